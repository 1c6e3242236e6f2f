#pragma once

#include <stdexcept>
#include <string>

namespace fonrev {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input document. line() is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Spectrum plan that the impairment model cannot evaluate
// (overlapping or touching channels on a shared link).
class PlanError : public DomainError {
 public:
  PlanError(int primary, int interferer, int link, const std::string& what)
      : DomainError(what), primary_(primary), interferer_(interferer), link_(link) {}
  int primary() const { return primary_; }
  int interferer() const { return interferer_; }
  int link() const { return link_; }

 private:
  int primary_, interferer_, link_;
};

}  // namespace fonrev
