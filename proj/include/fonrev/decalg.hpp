#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fonrev/milp.hpp"
#include "fonrev/netmodel.hpp"
#include "fonrev/pli.hpp"

namespace fonrev {

// Up to k loopless routes ordered by length, ties by node sequence.
std::vector<Route> yen_ksp(const Network& net, NodeId src, NodeId dst, int k);

struct RoutePair {
  int request = 0;      // position in the demand list
  int route_index = 0;  // 0-based rank among the k shortest routes
  Route route;
  int mode = 0;  // position in the mode set
  double bandwidth_ghz = 0;
  double margin = 0;
};

// Every (route, mode) pair with its residual SNR margin, unfiltered.
std::vector<RoutePair> precalc_pairs(const Request& request, int request_pos,
                                     const std::vector<Route>& routes, const ModeSet& modes,
                                     double phi, const ImpairmentModel& model,
                                     const Network& net);

struct RtmaInstance {
  const Network* net = nullptr;
  std::vector<Request> demands;
  ModeSet modes;
  int k = 4;
  double eps2 = 0.001;
  std::vector<std::vector<RoutePair>> pairs;  // per request
};

RtmaInstance make_rtma_instance(const Network& net, const std::vector<Request>& demands,
                                const ModeSet& modes, int k, double phi, double eps2,
                                const ImpairmentModel& model = ImpairmentModel());

// A linear row over the pick of every request: coef[i][p] is the row's
// contribution when request i picks pair p, coef[i].back() when blocked.
struct RtmaRow {
  std::string kind;
  std::vector<std::vector<double>> coef;
  Sense sense = Sense::LessEqual;
  double rhs = 0;

  double lhs(const std::vector<int>& pick) const;
  bool satisfied(const std::vector<int>& pick, double tol = 1e-9) const;
};

struct RtmaSolution {
  bool feasible = false;
  bool proven_optimal = false;
  std::vector<int> pick;  // pair index per request, -1 when blocked
  double objective = 0;
  double revenue = 0;
  double phi_avg = 0;
  long long nodes = 0;

  std::vector<int> B() const;
  bool operator==(const RtmaSolution& o) const { return pick == o.pick; }
};

// Objective of a pick vector: sum eta B + eps2 * mean margin.
double rtma_objective(const RtmaInstance& inst, const std::vector<int>& pick);
// Capacity, margin and row feasibility of a pick vector.
bool rtma_feasible(const RtmaInstance& inst, const std::vector<int>& pick,
                   const std::vector<RtmaRow>& extra);

struct RtmaOptions {
  long long node_limit = 0;  // 0: no limit
};

// Exact optimum by branch and bound.
RtmaSolution solve_rtma(const RtmaInstance& inst, const std::vector<RtmaRow>& extra = {},
                        const RtmaOptions& opt = {});
// The n best solutions in objective order, ties in search order. Equal to
// the chain solve, excluding_constraint(previous), solve, ... of length n.
std::vector<RtmaSolution> solve_rtma_top(const RtmaInstance& inst,
                                         const std::vector<RtmaRow>& extra, int n,
                                         const RtmaOptions& opt = {});

// Row cutting off prev and nothing else.
RtmaRow excluding_constraint(const RtmaSolution& prev, const RtmaInstance& inst);
// Rows forcing mode l-1 and forbidding modes l.. (l is 1-based).
std::vector<RtmaRow> lock_constraints(int l, const RtmaInstance& inst);

enum class ArrangePolicy { Random, Bandwidth, Revenue, RevenuePerBandwidth };

ArrangePolicy parse_policy(const std::string& s);
std::string policy_name(ArrangePolicy p);

// Order of the given request positions. bandwidth[i] is indexed like revenue.
std::vector<int> arrange(const std::vector<int>& requests, const std::vector<double>& revenue,
                         const std::vector<double>& bandwidth, ArrangePolicy policy,
                         std::uint64_t seed);

struct SaConfig {
  ArrangePolicy policy = ArrangePolicy::RevenuePerBandwidth;
  int n_round = 2;
  double guard_ghz = 12.5;
  double step_ghz = 0;  // scan step; 0 means guard_ghz
  std::uint64_t seed = 1;
  double first_round_offset_db = 1.0;
  // When set, the XCI log term is replaced by this upper envelope (the one
  // the MILP uses), so every accepted plan also meets the MILP's QoT rows.
  const PwlFit* xci_envelope = nullptr;
};

// Threshold offset in dB for a round.
double round_offset_db(int round, int n_round, double first_offset_db);

struct SaState {
  std::vector<Assignment> assignments;  // one per request, demand order
  std::vector<std::vector<Channel>> link_spectrum;  // occupied intervals per link
  int rounds = 0;
  double revenue = 0;
  int accepted = 0;
};

SaState spectrum_assign(const RtmaInstance& inst, const RtmaSolution& rtma,
                        const ImpairmentModel& model, const SaConfig& cfg);

struct DecAlgConfig {
  int k = 4;
  int n_rtma = 40;
  int n_round = 2;
  double phi = 0.5;
  double eps2 = 0.001;
  double guard_ghz = 12.5;
  double step_ghz = 0;
  ArrangePolicy policy = ArrangePolicy::RevenuePerBandwidth;
  std::uint64_t seed = 1;
  double first_round_offset_db = 1.0;
  // Per RTMA search; 0 removes the cap. Exact proofs beyond ~25 requests on
  // NSFNET take minutes, so the default trades them for bounded runtime.
  long long node_limit = 200000;
  // Pieces of the XCI envelope used in spectrum assignment; 0 keeps the
  // exact log term.
  int xci_envelope_q = 20;

  SaConfig sa() const;
};

struct DecAlgResult {
  SaState state;
  RtmaSolution rtma;
  double revenue = 0;
  int candidates = 0;         // RTMA solutions passed to spectrum assignment
  int infeasible_subsets = 0;
  bool all_optimal = true;    // every RTMA solve finished within the node limit
  double runtime_ms = 0;
};

DecAlgResult dec_alg(const Network& net, const std::vector<Request>& demands,
                     const ModeSet& modes, const DecAlgConfig& cfg,
                     const ImpairmentModel& model = ImpairmentModel());

// One RTMA solve followed by one spectrum-assignment pass.
DecAlgResult ref_a(const Network& net, const std::vector<Request>& demands,
                   const ModeSet& modes, const DecAlgConfig& cfg,
                   const ImpairmentModel& model = ImpairmentModel());

// "id,accepted,route,mode,b_ghz,e_ghz,snr_db" rows plus the summary block.
std::string result_csv(const DecAlgResult& res, const Network& net,
                       const ImpairmentModel& model = ImpairmentModel());

}  // namespace fonrev
