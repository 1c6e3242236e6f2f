#pragma once

#include <string>
#include <vector>

namespace fonrev {

// h(x) = ln((x+1)/(x-1)), the XCI log term as a function of 2|f_i-f_j|/df_j.
double xci_log_term(double x);

struct PwlLine {
  double slope = 0;      // o^1
  double intercept = 0;  // o^0
};

struct PwlFit {
  double x1 = 0, x2 = 0;
  std::vector<PwlLine> lines;  // ordered by slope (i.e. by x of the active piece)
  int iterations = 0;

  int q_segments() const { return static_cast<int>(lines.size()); }
};

struct PwlEval {
  double value = 0;
  bool outside_domain = false;
};

// Max-affine fit of h over [x1, x2] with at most q pieces. The returned
// envelope is >= h everywhere on [x1, x2].
PwlFit fit_pwl(double x1, double x2, int q);

double eval_upper(const PwlFit& fit, double x);
PwlEval eval_upper_checked(const PwlFit& fit, double x);

// Max of (envelope - h)/h on a uniform grid; throws DomainError if any
// grid residual is negative.
double max_rel_error(const PwlFit& fit, int grid_points);

// Same on a grid log-spaced in (x - 1).
double max_rel_error_log(const PwlFit& fit, int grid_points);

// "k,o1,o0" rows, k from 1.
std::string pwl_to_csv(const PwlFit& fit);

}  // namespace fonrev
