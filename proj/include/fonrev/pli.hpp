#pragma once

#include <optional>
#include <vector>

#include "fonrev/netmodel.hpp"

namespace fonrev {

struct Route {
  std::vector<NodeId> nodes;
  std::vector<int> links;  // directed link indices, in path order
  int spans = 0;
  double length_km = 0;

  bool empty() const { return nodes.empty(); }
  NodeId src() const { return nodes.front(); }
  NodeId dst() const { return nodes.back(); }
};

// Throws DomainError when a hop is not a link or a node repeats.
Route make_route(const Network& net, const std::vector<NodeId>& nodes);

struct Channel {
  double begin_ghz = 0;
  double end_ghz = 0;
  double center() const { return 0.5 * (begin_ghz + end_ghz); }
  double width() const { return end_ghz - begin_ghz; }
};

struct Assignment {
  Request request;
  Route route;
  TransmissionMode mode;
  Channel channel;
  bool accepted = false;
};

struct PliBreakdown {
  double t_ase = 0, t_sci = 0, t_xci = 0, t_ad = 0;
  // channel narrower than the range the nonlinear model was derived for
  bool below_validity_floor = false;

  double total() const { return t_ase + t_sci + t_xci + t_ad; }
  double snr_linear() const { return 1.0 / total(); }
  double snr_db() const;
};

inline constexpr double kValidityFloorGhz = 28.0;

// Closed-form impairment terms with the derived constants cached.
class ImpairmentModel {
 public:
  explicit ImpairmentModel(const PhysicsConstants& pc = {});

  const PhysicsConstants& constants() const { return pc_; }
  double mu() const { return mu_; }
  double rho() const { return rho_; }
  double eps_x() const { return eps_x_; }
  double ase_psd_per_span() const { return ase_; }

  double ase_nsr(int spans, double psd) const;
  double sci_nsr(int spans, double psd, double width_ghz) const;
  // XCI on the primary from an interferer of PSD psd_j and width width_j,
  // centers gap_ghz apart, over shared_spans spans.
  double xci_nsr(int shared_spans, double psd_j, double gap_ghz, double width_j) const;
  // Node crosstalk over `nodes` qualifying nodes.
  double ad_nsr(int nodes, double overlap_ghz, double psd_i, double width_i,
                double psd_j) const;

 private:
  PhysicsConstants pc_;
  double mu_, rho_, eps_x_, ase_;
};

double overlap_ghz(const Channel& a, const Channel& b);

// Total spans of directed links used by both routes.
int shared_spans(const Route& a, const Route& b, const Network& net);
// First directed link used by both routes, or -1.
int first_shared_link(const Route& a, const Route& b);
// Nodes where the primary is added or passes through and the interferer
// passes through or is dropped.
int ad_qualifying_nodes(const Route& primary, const Route& interferer);

double xci_nsr(const ImpairmentModel& m, const Assignment& primary,
               const Assignment& interferer, const Network& net);
double ad_xt_nsr(const ImpairmentModel& m, const Assignment& primary,
                 const Assignment& interferer, const Network& net);

// One entry per input assignment; empty for assignments not accepted.
// Throws PlanError naming the first conflicting pair and link.
std::vector<std::optional<PliBreakdown>> evaluate(const ImpairmentModel& m,
                                                  const std::vector<Assignment>& all,
                                                  const Network& net);

struct QotVerdict {
  int index = 0;  // position in the input list
  double snr_db = 0;
  double required_db = 0;
  bool ok = false;
};

// Verdicts for accepted assignments, in input order.
std::vector<QotVerdict> qot_ok(const ImpairmentModel& m, const std::vector<Assignment>& all,
                               const Network& net, double threshold_offset_db);

}  // namespace fonrev
