#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fonrev/netmodel.hpp"
#include "fonrev/pli.hpp"
#include "fonrev/pwlfit.hpp"

namespace fonrev {

enum class VarType { Binary, Continuous };
enum class Sense { LessEqual, GreaterEqual, Equal };

struct Variable {
  std::string name;
  VarType type = VarType::Continuous;
  double lower = 0;
  double upper = 0;  // +inf allowed
};

struct LinTerm {
  int var = 0;
  double coef = 0;
};

struct Constraint {
  std::string name;
  std::vector<LinTerm> terms;
  Sense sense = Sense::LessEqual;
  double rhs = 0;
};

class MilpModel {
 public:
  int add_variable(std::string name, VarType type, double lower, double upper);
  int add_binary(std::string name) { return add_variable(std::move(name), VarType::Binary, 0, 1); }
  int add_constraint(std::string name, std::vector<LinTerm> terms, Sense sense, double rhs);
  void set_objective(std::vector<LinTerm> terms, bool maximize = true);

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return rows_; }
  const std::vector<LinTerm>& objective() const { return obj_; }
  bool maximize() const { return maximize_; }
  std::optional<int> find(const std::string& name) const;

 private:
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
  std::vector<LinTerm> obj_;
  bool maximize_ = true;
  std::unordered_map<std::string, int> index_;
};

// CPLEX-style LP text. Deterministic for a given model.
std::string export_lp(const MilpModel& model);

struct SolutionVector {
  std::map<std::string, double> values;
  double get(const std::string& name) const;
};

// Whitespace-separated "name value" lines; '#' starts a comment.
SolutionVector parse_solution(const std::string& text);
std::string emit_solution(const SolutionVector& sol);

// Dense values aligned with model.variables(); names absent from sol are 0.
std::vector<double> dense_values(const MilpModel& model, const SolutionVector& sol);

struct RowViolation {
  int row = 0;
  std::string name;
  double amount = 0;  // how far the row misses, > tol
};

struct BoundViolation {
  int var = 0;
  std::string name;
  double value = 0;
  bool integrality = false;
};

struct CheckReport {
  std::vector<RowViolation> rows;
  std::vector<BoundViolation> bounds;
  std::vector<std::string> unknown_names;
  double objective = 0;
  bool feasible() const { return rows.empty() && bounds.empty(); }
};

CheckReport check_solution(const MilpModel& model, const SolutionVector& sol,
                           double tol = 1e-6);

struct RmaxConfig {
  double eps1 = 0.01;
  // <= 0 picks a value from the instance (see required_theta).
  double theta = 0;
};

// RMAX for one instance, with lookup tables from semantic indices to
// model variables.
class RmaxModel {
 public:
  MilpModel lp;

  const Network& network() const { return net_; }
  const std::vector<Request>& demands() const { return demands_; }
  const ModeSet& modes() const { return modes_; }
  const PwlFit& fit() const { return fit_; }
  const ImpairmentModel& impairments() const { return model_; }
  double theta() const { return theta_; }
  double eps1() const { return eps1_; }

  int D() const { return static_cast<int>(demands_.size()); }
  int V() const { return static_cast<int>(net_.nodes().size()); }
  int E() const { return net_.link_count(); }
  int C() const { return static_cast<int>(modes_.size()); }

  // Variable indices. v is a node position in network().nodes(), e a link index.
  int B(int i) const { return B_[i]; }
  int q(int i, int v) const { return q_[i * V() + v]; }
  int p(int i, int v) const { return p_[i * V() + v]; }
  int x(int i, int e) const { return x_[i * E() + e]; }
  int xc(int i, int e, int c) const { return xc_[(i * E() + e) * C() + c]; }
  int m(int i, int c) const { return m_[i * C() + c]; }
  int f(int i) const { return f_[i]; }
  int df(int i) const { return df_[i]; }
  int fd(int i, int j) const { return fd_[i * D() + j]; }
  int dfo(int i, int j) const { return dfo_[i * D() + j]; }
  int fx(int i, int j) const { return fx_[i * D() + j]; }
  int w(int i, int j) const { return w_[i * D() + j]; }
  int a(int k, int i, int j) const { return a_[(i * D() + j) * 3 + k]; }  // i < j
  int tase(int i) const { return tase_[i]; }
  int tsci(int i) const { return tsci_[i]; }
  int tpli(int i) const { return tpli_[i]; }
  int txci(int i, int j, int v) const { return txci_[(i * D() + j) * V() + v]; }
  int tad(int i, int j, int v) const { return tad_[(i * D() + j) * V() + v]; }
  int h(int i, int j, int c) const { return h_[(i * D() + j) * C() + c]; }

  int node_pos(NodeId v) const { return node_pos_.at(v); }
  // Mode position in modes() or -1.
  int mode_index(const TransmissionMode& md) const;
  // Coefficient of the node-crosstalk row for primary i in mode c, interferer j.
  double ad_coef(int i, int j, int c) const;

 private:
  friend RmaxModel build_rmax(const Network&, const std::vector<Request>&, const ModeSet&,
                              const PwlFit&, const ImpairmentModel&, const RmaxConfig&);
  RmaxModel(const Network& net) : net_(net) {}

  Network net_;
  std::vector<Request> demands_;
  ModeSet modes_;
  PwlFit fit_;
  ImpairmentModel model_;
  double theta_ = 0, eps1_ = 0;
  std::vector<int> node_pos_;
  std::vector<int> B_, q_, p_, x_, xc_, m_, f_, df_, fd_, dfo_, fx_, w_, a_, tase_, tsci_, tpli_,
      txci_, tad_, h_;
};

// Smallest big-M for which every indicator-disabled row of the instance is
// slack for any self-consistent assignment that meets the QoT rows.
double required_theta(const Network& net, const std::vector<Request>& demands,
                      const ModeSet& modes, const PwlFit& fit, const ImpairmentModel& model);

RmaxModel build_rmax(const Network& net, const std::vector<Request>& demands,
                     const ModeSet& modes, const PwlFit& fit,
                     const ImpairmentModel& model = ImpairmentModel(),
                     const RmaxConfig& cfg = {});

// Fit over [1.001, max(200, largest 2*SE*F/rate of the instance)].
PwlFit instance_fit(const Network& net, const std::vector<Request>& demands,
                    const ModeSet& modes, int q);

struct RmaxSize {
  long long variables = 0;
  long long binaries = 0;
  long long rows = 0;
};

// Closed-form model size.
RmaxSize rmax_size(long long D, long long V, long long E, long long C, long long Q);

// Encodes lightpaths as a full RMAX vector. Assignments are matched to
// demands by request id; demands without an accepted assignment are blocked.
SolutionVector assignment_to_solution(const std::vector<Assignment>& assignments,
                                      const RmaxModel& rmax);

}  // namespace fonrev
