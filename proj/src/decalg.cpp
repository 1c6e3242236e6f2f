#include "fonrev/decalg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>

namespace fonrev {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLenEps = 1e-9;

struct Labelled {
  double len;
  std::vector<NodeId> nodes;
};

bool shorter(double la, const std::vector<NodeId>& a, double lb, const std::vector<NodeId>& b) {
  if (la < lb - kLenEps) return true;
  if (lb < la - kLenEps) return false;
  return a < b;
}

struct PathLess {
  bool operator()(const Labelled& a, const Labelled& b) const {
    return shorter(a.len, a.nodes, b.len, b.nodes);
  }
};

double path_length(const Network& net, const std::vector<NodeId>& p) {
  double len = 0;
  for (std::size_t k = 1; k < p.size(); ++k)
    len += net.links()[*net.link_index(p[k - 1], p[k])].length_km;
  return len;
}

// Shortest path under (length, node sequence) order avoiding blocked nodes
// and links. Node sequences compare consistently under extension, so the
// label-setting search returns the least path in that order.
std::optional<std::vector<NodeId>> least_path(const Network& net, NodeId src, NodeId dst,
                                              const std::vector<bool>& node_blocked,
                                              const std::vector<bool>& link_blocked) {
  int n = static_cast<int>(node_blocked.size());
  std::vector<double> dist(n, kInf);
  std::vector<std::vector<NodeId>> path(n);
  std::vector<bool> done(n, false);
  dist[src] = 0;
  path[src] = {src};
  for (;;) {
    int u = -1;
    for (int v = 0; v < n; ++v)
      if (!done[v] && dist[v] < kInf && (u < 0 || shorter(dist[v], path[v], dist[u], path[u])))
        u = v;
    if (u < 0) return std::nullopt;
    if (u == dst) return path[u];
    done[u] = true;
    for (int e : net.out_links(u)) {
      if (link_blocked[e]) continue;
      int v = net.links()[e].to;
      if (done[v] || node_blocked[v]) continue;
      double nd = dist[u] + net.links()[e].length_km;
      std::vector<NodeId> np = path[u];
      np.push_back(v);
      if (dist[v] == kInf || shorter(nd, np, dist[v], path[v])) {
        dist[v] = nd;
        path[v] = std::move(np);
      }
    }
  }
}

}  // namespace

std::vector<Route> yen_ksp(const Network& net, NodeId src, NodeId dst, int k) {
  if (src == dst) throw DomainError("source equals destination");
  if (k < 1) throw DomainError("k must be positive");
  if (!net.has_node(src) || !net.has_node(dst)) throw DomainError("unknown node");
  int n = net.node_count();
  std::vector<bool> no_nodes(n, false), no_links(net.link_count(), false);
  auto first = least_path(net, src, dst, no_nodes, no_links);
  if (!first) return {};
  std::vector<Labelled> A{{path_length(net, *first), *first}};
  std::set<Labelled, PathLess> B;
  while (static_cast<int>(A.size()) < k) {
    const auto prev = A.back().nodes;
    for (std::size_t i = 0; i + 1 < prev.size(); ++i) {
      std::vector<NodeId> root(prev.begin(), prev.begin() + i + 1);
      std::vector<bool> nb(n, false), lb(net.link_count(), false);
      for (const auto& p : A)
        if (p.nodes.size() > i + 1 && std::equal(root.begin(), root.end(), p.nodes.begin()))
          lb[*net.link_index(p.nodes[i], p.nodes[i + 1])] = true;
      for (std::size_t r = 0; r < i; ++r) nb[root[r]] = true;
      auto spur = least_path(net, prev[i], dst, nb, lb);
      if (!spur) continue;
      std::vector<NodeId> total = root;
      total.insert(total.end(), spur->begin() + 1, spur->end());
      Labelled cand{path_length(net, total), total};
      bool known = std::any_of(A.begin(), A.end(), [&](auto& p) { return p.nodes == total; });
      if (!known) B.insert(cand);
    }
    if (B.empty()) break;
    A.push_back(*B.begin());
    B.erase(B.begin());
  }
  std::vector<Route> out;
  for (const auto& p : A) out.push_back(make_route(net, p.nodes));
  return out;
}

std::vector<RoutePair> precalc_pairs(const Request& request, int request_pos,
                                     const std::vector<Route>& routes, const ModeSet& modes,
                                     double phi, const ImpairmentModel& model,
                                     const Network& net) {
  if (!(phi >= 0 && phi <= 1)) throw DomainError("phi must lie in [0, 1]");
  std::vector<RoutePair> out;
  for (std::size_t r = 0; r < routes.size(); ++r) {
    const auto& route = routes[r];
    double node_xt = 0;
    for (NodeId v : route.nodes) node_xt += 0.5 * (net.degree(v) + 1);
    node_xt *= model.eps_x();
    double ase = model.ase_nsr(route.spans, request.psd_w_per_ghz);
    for (std::size_t c = 0; c < modes.size(); ++c) {
      RoutePair p;
      p.request = request_pos;
      p.route_index = static_cast<int>(r);
      p.route = route;
      p.mode = static_cast<int>(c);
      p.bandwidth_ghz = request.rate_gbps / modes[c].se();
      double sci = model.sci_nsr(route.spans, request.psd_w_per_ghz, p.bandwidth_ghz);
      p.margin = phi / modes[c].snr_th_linear() - ase - sci - node_xt;
      out.push_back(std::move(p));
    }
  }
  return out;
}

RtmaInstance make_rtma_instance(const Network& net, const std::vector<Request>& demands,
                                const ModeSet& modes, int k, double phi, double eps2,
                                const ImpairmentModel& model) {
  if (modes.empty()) throw DomainError("empty mode set");
  RtmaInstance inst;
  inst.net = &net;
  inst.demands = demands;
  inst.modes = modes;
  inst.k = k;
  inst.eps2 = eps2;
  for (std::size_t i = 0; i < demands.size(); ++i) {
    auto routes = yen_ksp(net, demands[i].src, demands[i].dst, k);
    inst.pairs.push_back(
        precalc_pairs(demands[i], static_cast<int>(i), routes, modes, phi, model, net));
  }
  return inst;
}

// ---------------------------------------------------------------- rows

double RtmaRow::lhs(const std::vector<int>& pick) const {
  double s = 0;
  for (std::size_t i = 0; i < coef.size(); ++i)
    s += pick[i] < 0 ? coef[i].back() : coef[i][pick[i]];
  return s;
}

bool RtmaRow::satisfied(const std::vector<int>& pick, double tol) const {
  double v = lhs(pick);
  switch (sense) {
    case Sense::LessEqual: return v <= rhs + tol;
    case Sense::GreaterEqual: return v >= rhs - tol;
    case Sense::Equal: return std::abs(v - rhs) <= tol;
  }
  return false;
}

std::vector<int> RtmaSolution::B() const {
  std::vector<int> b;
  for (int p : pick) b.push_back(p >= 0 ? 1 : 0);
  return b;
}

double rtma_objective(const RtmaInstance& inst, const std::vector<int>& pick) {
  double rev = 0, margin = 0;
  for (std::size_t i = 0; i < pick.size(); ++i)
    if (pick[i] >= 0) {
      rev += inst.demands[i].revenue;
      margin += inst.pairs[i][pick[i]].margin;
    }
  double d = static_cast<double>(std::max<std::size_t>(1, pick.size()));
  return rev + inst.eps2 * margin / d;
}

bool rtma_feasible(const RtmaInstance& inst, const std::vector<int>& pick,
                   const std::vector<RtmaRow>& extra) {
  const double F = inst.net->spectrum_ghz();
  std::vector<double> used(inst.net->link_count(), 0.0);
  for (std::size_t i = 0; i < pick.size(); ++i) {
    if (pick[i] < 0) continue;
    const auto& p = inst.pairs[i][pick[i]];
    if (p.margin < 0) return false;
    for (int e : p.route.links) used[e] += p.bandwidth_ghz;
  }
  for (double u : used)
    if (u > F + 1e-9) return false;
  for (const auto& r : extra)
    if (!r.satisfied(pick)) return false;
  return true;
}

RtmaRow excluding_constraint(const RtmaSolution& prev, const RtmaInstance& inst) {
  const double n = static_cast<double>(inst.k) * static_cast<double>(inst.modes.size());
  RtmaRow row;
  row.kind = "exclude";
  row.sense = Sense::LessEqual;
  row.rhs = static_cast<double>(inst.demands.size()) - 1.0 / n;
  for (std::size_t i = 0; i < inst.demands.size(); ++i) {
    std::vector<double> c(inst.pairs[i].size() + 1, 0.0);
    if (prev.pick[i] >= 0) {
      c[prev.pick[i]] = 1.0;
    } else {
      // (1/n) * sum over the n candidate pairs of (1 - g): every pair sits at
      // zero when blocked, one pair leaves zero when picked.
      for (std::size_t p = 0; p < inst.pairs[i].size(); ++p) c[p] = (n - 1.0) / n;
      c.back() = 1.0;
    }
    row.coef.push_back(std::move(c));
  }
  return row;
}

std::vector<RtmaRow> lock_constraints(int l, const RtmaInstance& inst) {
  int C = static_cast<int>(inst.modes.size());
  if (l < 1 || l > C) throw DomainError("lock index out of range");
  auto mode_row = [&](int mode, Sense s, double rhs, const char* kind) {
    RtmaRow r;
    r.kind = kind;
    r.sense = s;
    r.rhs = rhs;
    for (const auto& ps : inst.pairs) {
      std::vector<double> c(ps.size() + 1, 0.0);
      for (std::size_t p = 0; p < ps.size(); ++p)
        if (ps[p].mode == mode) c[p] = 1.0;
      r.coef.push_back(std::move(c));
    }
    return r;
  };
  std::vector<RtmaRow> rows{mode_row(l - 1, Sense::GreaterEqual, 1.0, "lock")};
  for (int c = l; c < C; ++c) rows.push_back(mode_row(c, Sense::Equal, 0.0, "lock-out"));
  return rows;
}

// ---------------------------------------------------------------- B&B

namespace {

class BranchAndBound {
 public:
  BranchAndBound(const RtmaInstance& inst, const std::vector<RtmaRow>& rows,
                 const RtmaOptions& opt, int keep)
      : I_(inst), rows_(rows), opt_(opt), keep_(std::max(1, keep)),
        D_(static_cast<int>(inst.demands.size())),
        F_(inst.net->spectrum_ghz()), used_(inst.net->link_count(), 0.0) {
    order_.resize(D_);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
      return I_.demands[a].revenue > I_.demands[b].revenue;
    });
    double d = std::max(1, D_);
    opts_.resize(D_);
    vals_.resize(D_);
    for (int i = 0; i < D_; ++i) {
      std::vector<int> ok;
      for (int p = 0; p < static_cast<int>(I_.pairs[i].size()); ++p)
        if (I_.pairs[i][p].margin >= 0) ok.push_back(p);
      std::stable_sort(ok.begin(), ok.end(), [&](int a, int b) {
        return I_.pairs[i][a].margin > I_.pairs[i][b].margin;
      });
      for (int p : ok) vals_[i].push_back(I_.demands[i].revenue + I_.eps2 * I_.pairs[i][p].margin / d);
      ok.push_back(-1);
      vals_[i].push_back(0.0);
      opts_[i] = std::move(ok);
    }
    // Row ranges over the options still open at each depth.
    suf_min_.assign(rows_.size(), std::vector<double>(D_ + 1, 0.0));
    suf_max_.assign(rows_.size(), std::vector<double>(D_ + 1, 0.0));
    for (std::size_t r = 0; r < rows_.size(); ++r)
      for (int t = D_ - 1; t >= 0; --t) {
        int i = order_[t];
        double lo = kInf, hi = -kInf;
        for (int p : opts_[i]) {
          double c = coef(r, i, p);
          lo = std::min(lo, c);
          hi = std::max(hi, c);
        }
        suf_min_[r][t] = suf_min_[r][t + 1] + lo;
        suf_max_[r][t] = suf_max_[r][t + 1] + hi;
      }
    lhs_.assign(rows_.size(), 0.0);
    pick_.assign(D_, -1);
    lambda_.assign(inst.net->link_count(), 0.0);
  }

  // Best solutions first; equal objectives keep DFS discovery order.
  std::vector<RtmaSolution> run() {
    init_multipliers();
    dfs(0, 0.0);
    std::vector<RtmaSolution> out;
    for (const auto& f : top_) {
      RtmaSolution s;
      s.nodes = nodes_;
      s.proven_optimal = !aborted_;
      s.feasible = true;
      s.pick = f.pick;
      s.objective = rtma_objective(I_, s.pick);
      double margin = 0;
      for (int i = 0; i < D_; ++i)
        if (s.pick[i] >= 0) {
          s.revenue += I_.demands[i].revenue;
          margin += I_.pairs[i][s.pick[i]].margin;
        }
      s.phi_avg = margin / std::max(1, D_);
      out.push_back(std::move(s));
    }
    return out;
  }

  long long nodes() const { return nodes_; }
  bool aborted() const { return aborted_; }

 private:
  double coef(std::size_t r, int i, int p) const {
    const auto& c = rows_[r].coef[i];
    return p < 0 ? c.back() : c[p];
  }

  bool fits(int i, int p) const {
    if (p < 0) return true;
    const auto& pr = I_.pairs[i][p];
    for (int e : pr.route.links)
      if (used_[e] + pr.bandwidth_ghz > F_ + 1e-9) return false;
    return true;
  }

  double lambda_cost(int i, int p) const {
    const auto& pr = I_.pairs[i][p];
    double s = 0;
    for (int e : pr.route.links) s += lambda_[e];
    return s * pr.bandwidth_ghz;
  }

  // Upper bound on what requests order_[t..] can still add.
  double bound(int t) const {
    double simple = 0, lag = 0;
    for (std::size_t e = 0; e < used_.size(); ++e) lag += lambda_[e] * (F_ - used_[e]);
    for (int s = t; s < D_; ++s) {
      int i = order_[s];
      double bs = 0, bl = 0;
      for (std::size_t o = 0; o + 1 < opts_[i].size(); ++o) {
        int p = opts_[i][o];
        if (!fits(i, p)) continue;
        bs = std::max(bs, vals_[i][o]);
        bl = std::max(bl, vals_[i][o] - lcost_[i][o]);
      }
      simple += bs;
      lag += bl;
    }
    return std::min(simple, lag);
  }

  bool rows_open(int t) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      double lo = lhs_[r] + suf_min_[r][t], hi = lhs_[r] + suf_max_[r][t];
      switch (rows_[r].sense) {
        case Sense::LessEqual:
          if (lo > rows_[r].rhs + 1e-9) return false;
          break;
        case Sense::GreaterEqual:
          if (hi < rows_[r].rhs - 1e-9) return false;
          break;
        case Sense::Equal:
          if (lo > rows_[r].rhs + 1e-9 || hi < rows_[r].rhs - 1e-9) return false;
          break;
      }
    }
    return true;
  }

  // Subgradient pass on the capacity rows at the root.
  void init_multipliers() {
    lcost_.assign(D_, {});
    for (int i = 0; i < D_; ++i) lcost_[i].assign(opts_[i].size(), 0.0);
    const int E = static_cast<int>(used_.size());
    if (E == 0 || D_ == 0) return;
    // Greedy value as the target.
    double target = 0;
    for (int t = 0; t < D_; ++t) {
      int i = order_[t];
      for (std::size_t o = 0; o + 1 < opts_[i].size(); ++o)
        if (fits(i, opts_[i][o])) {
          for (int e : I_.pairs[i][opts_[i][o]].route.links)
            used_[e] += I_.pairs[i][opts_[i][o]].bandwidth_ghz;
          target += vals_[i][o];
          break;
        }
    }
    std::fill(used_.begin(), used_.end(), 0.0);

    std::vector<double> lam(E, 0.0), best_lam(E, 0.0), g(E);
    double best = kInf, step_scale = 2.0;
    int stale = 0;
    for (int it = 0; it < 150; ++it) {
      double val = 0;
      for (int e = 0; e < E; ++e) {
        val += lam[e] * F_;
        g[e] = F_;
      }
      for (int i = 0; i < D_; ++i) {
        double bv = 0;
        int bo = -1;
        for (std::size_t o = 0; o + 1 < opts_[i].size(); ++o) {
          const auto& pr = I_.pairs[i][opts_[i][o]];
          if (pr.bandwidth_ghz > F_ + 1e-9) continue;
          double lc = 0;
          for (int e : pr.route.links) lc += lam[e];
          double v = vals_[i][o] - lc * pr.bandwidth_ghz;
          if (v > bv) {
            bv = v;
            bo = static_cast<int>(o);
          }
        }
        val += bv;
        if (bo >= 0)
          for (int e : I_.pairs[i][opts_[i][bo]].route.links)
            g[e] -= I_.pairs[i][opts_[i][bo]].bandwidth_ghz;
      }
      if (val < best - 1e-12) {
        best = val;
        best_lam = lam;
        stale = 0;
      } else if (++stale >= 15) {
        step_scale *= 0.5;
        stale = 0;
      }
      double norm = 0;
      for (int e = 0; e < E; ++e)
        if (!(lam[e] == 0 && g[e] > 0)) norm += g[e] * g[e];
      if (norm == 0 || val - target < 1e-12) break;
      double step = step_scale * (val - target) / norm;
      for (int e = 0; e < E; ++e) lam[e] = std::max(0.0, lam[e] - step * g[e]);
    }
    lambda_ = best_lam;
    for (int i = 0; i < D_; ++i)
      for (std::size_t o = 0; o + 1 < opts_[i].size(); ++o)
        lcost_[i][o] = lambda_cost(i, opts_[i][o]);
  }

  void dfs(int t, double cur) {
    if (aborted_) return;
    ++nodes_;
    if (opt_.node_limit > 0 && nodes_ > opt_.node_limit) {
      aborted_ = true;
      return;
    }
    if (t == D_) {
      if (full() && cur <= top_.back().value + 1e-12) return;
      for (const auto& r : rows_)
        if (!r.satisfied(pick_)) return;
      auto at = std::find_if(top_.begin(), top_.end(),
                             [&](const Found& f) { return f.value < cur - 1e-12; });
      top_.insert(at, Found{cur, pick_});
      if (static_cast<int>(top_.size()) > keep_) top_.pop_back();
      return;
    }
    if (full() && cur + bound(t) <= top_.back().value + 1e-12) return;
    int i = order_[t];
    for (std::size_t o = 0; o < opts_[i].size(); ++o) {
      int p = opts_[i][o];
      if (!fits(i, p)) continue;
      for (std::size_t r = 0; r < rows_.size(); ++r) lhs_[r] += coef(r, i, p);
      if (rows_open(t + 1)) {
        if (p >= 0)
          for (int e : I_.pairs[i][p].route.links) used_[e] += I_.pairs[i][p].bandwidth_ghz;
        pick_[i] = p;
        dfs(t + 1, cur + vals_[i][o]);
        pick_[i] = -1;
        if (p >= 0)
          for (int e : I_.pairs[i][p].route.links) used_[e] -= I_.pairs[i][p].bandwidth_ghz;
      }
      for (std::size_t r = 0; r < rows_.size(); ++r) lhs_[r] -= coef(r, i, p);
      if (aborted_) return;
    }
  }

  bool full() const { return static_cast<int>(top_.size()) >= keep_; }

  struct Found {
    double value;
    std::vector<int> pick;
  };

  const RtmaInstance& I_;
  const std::vector<RtmaRow>& rows_;
  RtmaOptions opt_;
  int keep_;
  int D_;
  double F_;
  std::vector<int> order_;
  std::vector<std::vector<int>> opts_;
  std::vector<std::vector<double>> vals_, lcost_;
  std::vector<std::vector<double>> suf_min_, suf_max_;
  std::vector<double> lhs_, used_, lambda_;
  std::vector<int> pick_;
  std::vector<Found> top_;
  long long nodes_ = 0;
  bool aborted_ = false;
};

}  // namespace

namespace {

void check_rows(const RtmaInstance& inst, const std::vector<RtmaRow>& extra) {
  for (const auto& r : extra) {
    if (r.coef.size() != inst.demands.size())
      throw DomainError("row '" + r.kind + "' does not match the instance");
    for (std::size_t i = 0; i < r.coef.size(); ++i)
      if (r.coef[i].size() != inst.pairs[i].size() + 1)
        throw DomainError("row '" + r.kind + "' does not match the instance");
  }
}

}  // namespace

std::vector<RtmaSolution> solve_rtma_top(const RtmaInstance& inst,
                                         const std::vector<RtmaRow>& extra, int n,
                                         const RtmaOptions& opt) {
  if (n < 1) throw DomainError("solution count must be positive");
  check_rows(inst, extra);
  BranchAndBound bb(inst, extra, opt, n);
  return bb.run();
}

RtmaSolution solve_rtma(const RtmaInstance& inst, const std::vector<RtmaRow>& extra,
                        const RtmaOptions& opt) {
  check_rows(inst, extra);
  BranchAndBound bb(inst, extra, opt, 1);
  auto top = bb.run();
  if (!top.empty()) return top.front();
  RtmaSolution s;
  s.pick.assign(inst.demands.size(), -1);
  s.nodes = bb.nodes();
  s.proven_optimal = !bb.aborted();
  return s;
}

// ---------------------------------------------------------------- SA

ArrangePolicy parse_policy(const std::string& s) {
  if (s == "sa") return ArrangePolicy::Random;
  if (s == "sa-b") return ArrangePolicy::Bandwidth;
  if (s == "sa-r") return ArrangePolicy::Revenue;
  if (s == "sa-ra") return ArrangePolicy::RevenuePerBandwidth;
  throw ParseError(0, "unknown policy '" + s + "' (sa, sa-b, sa-r, sa-ra)");
}

std::string policy_name(ArrangePolicy p) {
  switch (p) {
    case ArrangePolicy::Random: return "sa";
    case ArrangePolicy::Bandwidth: return "sa-b";
    case ArrangePolicy::Revenue: return "sa-r";
    case ArrangePolicy::RevenuePerBandwidth: return "sa-ra";
  }
  return "?";
}

std::vector<int> arrange(const std::vector<int>& requests, const std::vector<double>& revenue,
                         const std::vector<double>& bandwidth, ArrangePolicy policy,
                         std::uint64_t seed) {
  std::vector<int> out = requests;
  std::sort(out.begin(), out.end());
  auto by = [&](auto key) {
    std::stable_sort(out.begin(), out.end(), [&](int a, int b) { return key(a) > key(b); });
  };
  switch (policy) {
    case ArrangePolicy::Random: {
      std::mt19937_64 rng(seed);
      std::shuffle(out.begin(), out.end(), rng);
      break;
    }
    case ArrangePolicy::Bandwidth: by([&](int i) { return bandwidth[i]; }); break;
    case ArrangePolicy::Revenue: by([&](int i) { return revenue[i]; }); break;
    case ArrangePolicy::RevenuePerBandwidth:
      by([&](int i) { return revenue[i] / bandwidth[i]; });
      break;
  }
  return out;
}

double round_offset_db(int round, int n_round, double first_offset_db) {
  if (n_round <= 1) return 0.0;
  return first_offset_db * static_cast<double>(n_round - 1 - round) / (n_round - 1);
}

SaState spectrum_assign(const RtmaInstance& inst, const RtmaSolution& rtma,
                        const ImpairmentModel& model, const SaConfig& cfg) {
  if (!(cfg.guard_ghz > 0)) throw DomainError("guard band must be positive");
  if (cfg.n_round < 1) throw DomainError("at least one round is needed");
  const Network& net = *inst.net;
  const double F = net.spectrum_ghz();
  const double step = cfg.step_ghz > 0 ? cfg.step_ghz : cfg.guard_ghz;
  const int D = static_cast<int>(inst.demands.size());

  SaState st;
  st.assignments.resize(D);
  st.link_spectrum.assign(net.link_count(), {});
  std::vector<int> picked;
  std::vector<double> revenue(D, 0.0), bw(D, 0.0);
  for (int i = 0; i < D; ++i) {
    auto& a = st.assignments[i];
    a.request = inst.demands[i];
    revenue[i] = inst.demands[i].revenue;
    int p = rtma.feasible && i < static_cast<int>(rtma.pick.size()) ? rtma.pick[i] : -1;
    if (p < 0) continue;
    const auto& pr = inst.pairs[i][p];
    a.route = pr.route;
    a.mode = inst.modes[pr.mode];
    bw[i] = pr.bandwidth_ghz;
    picked.push_back(i);
  }
  auto order = arrange(picked, revenue, bw, cfg.policy, cfg.seed);

  // Pairwise route geometry among the picked requests.
  std::vector<std::vector<int>> shared(D, std::vector<int>(D, 0)), adn(D, std::vector<int>(D, 0));
  for (int i : picked)
    for (int j : picked)
      if (i != j) {
        shared[i][j] = shared_spans(st.assignments[i].route, st.assignments[j].route, net);
        adn[i][j] = ad_qualifying_nodes(st.assignments[i].route, st.assignments[j].route);
      }
  std::vector<double> base(D, 0.0), total(D, 0.0), delta(D, 0.0);
  for (int i : picked) {
    const auto& a = st.assignments[i];
    base[i] = model.ase_nsr(a.route.spans, a.request.psd_w_per_ghz) +
              model.sci_nsr(a.route.spans, a.request.psd_w_per_ghz, bw[i]);
  }
  std::vector<int> accepted;

  auto fits = [&](int i, double b) {
    double e = b + bw[i];
    for (int l : st.assignments[i].route.links)
      for (const auto& ch : st.link_spectrum[l])
        if (!(b >= ch.end_ghz + cfg.guard_ghz - 1e-9 || e <= ch.begin_ghz - cfg.guard_ghz + 1e-9))
          return false;
    return true;
  };
  auto meets = [&](double t, int i, double off) {
    return linear_to_db(1.0 / t) >= st.assignments[i].mode.snr_th_db + off - 1e-12;
  };
  // Interference on i from j, given their current channels.
  auto from = [&](int i, const Channel& ci, int j, const Channel& cj) {
    double v = 0;
    if (shared[i][j] > 0) {
      double gap = std::abs(ci.center() - cj.center());
      double x = 2.0 * gap / cj.width();
      if (cfg.xci_envelope && x <= cfg.xci_envelope->x2) {
        double g = inst.demands[j].psd_w_per_ghz;
        v += shared[i][j] * model.mu() * g * g * eval_upper(*cfg.xci_envelope, x);
      } else {
        v += model.xci_nsr(shared[i][j], inst.demands[j].psd_w_per_ghz, gap, cj.width());
      }
    }
    if (adn[i][j] > 0)
      v += model.ad_nsr(adn[i][j], overlap_ghz(ci, cj), inst.demands[i].psd_w_per_ghz,
                        ci.width(), inst.demands[j].psd_w_per_ghz);
    return v;
  };

  for (int r = 0; r < cfg.n_round; ++r) {
    double off = round_offset_db(r, cfg.n_round, cfg.first_round_offset_db);
    for (int i : order) {
      auto& a = st.assignments[i];
      if (a.accepted) continue;
      for (long long kk = 0;; ++kk) {
        double b = kk * step;
        if (b + bw[i] > F + 1e-9) break;
        if (!fits(i, b)) continue;
        Channel ch{b, b + bw[i]};
        double ti = base[i];
        for (int j : accepted) ti += from(i, ch, j, st.assignments[j].channel);
        if (!meets(ti, i, off)) continue;
        bool ok = true;
        for (int j : accepted) {
          delta[j] = from(j, st.assignments[j].channel, i, ch);
          if (!meets(total[j] + delta[j], j, off)) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        for (int j : accepted) total[j] += delta[j];
        total[i] = ti;
        a.channel = ch;
        a.accepted = true;
        accepted.push_back(i);
        for (int l : a.route.links) st.link_spectrum[l].push_back(ch);
        break;
      }
    }
  }
  for (auto& v : st.link_spectrum)
    std::sort(v.begin(), v.end(),
              [](const Channel& x, const Channel& y) { return x.begin_ghz < y.begin_ghz; });
  st.rounds = cfg.n_round;
  for (int i = 0; i < D; ++i)
    if (st.assignments[i].accepted) {
      st.revenue += inst.demands[i].revenue;
      ++st.accepted;
    }
  return st;
}

// ---------------------------------------------------------------- drivers

SaConfig DecAlgConfig::sa() const {
  SaConfig s;
  s.policy = policy;
  s.n_round = n_round;
  s.guard_ghz = guard_ghz;
  s.step_ghz = step_ghz;
  s.seed = seed;
  s.first_round_offset_db = first_round_offset_db;
  return s;
}

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

SaConfig sa_config(const DecAlgConfig& cfg, const Network& net,
                   const std::vector<Request>& demands, const ModeSet& modes,
                   std::optional<PwlFit>& env) {
  SaConfig s = cfg.sa();
  if (cfg.xci_envelope_q > 0 && !demands.empty()) {
    env = instance_fit(net, demands, modes, cfg.xci_envelope_q);
    s.xci_envelope = &*env;
  }
  return s;
}

void validate(const DecAlgConfig& cfg) {
  if (cfg.k < 1) throw DomainError("k must be positive");
  if (cfg.n_rtma < 1) throw DomainError("n_rtma must be positive");
  if (cfg.n_round < 1) throw DomainError("n_round must be positive");
  if (!(cfg.phi >= 0 && cfg.phi <= 1)) throw DomainError("phi must lie in [0, 1]");
  if (!(cfg.guard_ghz > 0)) throw DomainError("guard band must be positive");
  if (cfg.xci_envelope_q < 0) throw DomainError("envelope piece count must be >= 0");
}

}  // namespace

DecAlgResult dec_alg(const Network& net, const std::vector<Request>& demands,
                     const ModeSet& modes, const DecAlgConfig& cfg, const ImpairmentModel& model) {
  validate(cfg);
  auto t0 = std::chrono::steady_clock::now();
  auto inst = make_rtma_instance(net, demands, modes, cfg.k, cfg.phi, cfg.eps2, model);
  RtmaOptions opt{cfg.node_limit};
  std::optional<PwlFit> env;
  SaConfig sac = sa_config(cfg, net, demands, modes, env);
  DecAlgResult res;
  bool have = false;
  auto consider = [&](const RtmaSolution& s) {
    if (!s.proven_optimal) res.all_optimal = false;
    auto st = spectrum_assign(inst, s, model, sac);
    ++res.candidates;
    if (!have || st.revenue > res.revenue + 1e-9) {
      have = true;
      res.revenue = st.revenue;
      res.state = std::move(st);
      res.rtma = s;
    }
  };

  // The unconstrained optimum first; it is also the single candidate of REF-A.
  auto s0 = solve_rtma(inst, {}, opt);
  if (s0.feasible) consider(s0);
  for (int l = 1; l <= static_cast<int>(modes.size()); ++l) {
    // The n_rtma best solutions of one pass are the chain that successive
    // excluding rows would produce.
    auto chain = solve_rtma_top(inst, lock_constraints(l, inst), cfg.n_rtma, opt);
    if (chain.empty()) ++res.infeasible_subsets;
    for (const auto& s : chain) consider(s);
  }
  if (!have) {
    RtmaSolution none;
    none.pick.assign(demands.size(), -1);
    res.state = spectrum_assign(inst, none, model, sac);
    res.rtma = none;
  }
  res.runtime_ms = elapsed_ms(t0);
  return res;
}

DecAlgResult ref_a(const Network& net, const std::vector<Request>& demands, const ModeSet& modes,
                   const DecAlgConfig& cfg, const ImpairmentModel& model) {
  validate(cfg);
  auto t0 = std::chrono::steady_clock::now();
  auto inst = make_rtma_instance(net, demands, modes, cfg.k, cfg.phi, cfg.eps2, model);
  DecAlgResult res;
  res.rtma = solve_rtma(inst, {}, RtmaOptions{cfg.node_limit});
  res.all_optimal = res.rtma.proven_optimal;
  if (!res.rtma.feasible) res.rtma.pick.assign(demands.size(), -1);
  std::optional<PwlFit> env;
  res.state = spectrum_assign(inst, res.rtma, model, sa_config(cfg, net, demands, modes, env));
  res.candidates = 1;
  res.revenue = res.state.revenue;
  res.runtime_ms = elapsed_ms(t0);
  return res;
}

std::string result_csv(const DecAlgResult& res, const Network& net, const ImpairmentModel& model) {
  auto br = evaluate(model, res.state.assignments, net);
  std::ostringstream os;
  os << std::setprecision(10);
  os << "id,accepted,route,mode,b_ghz,e_ghz,snr_db\n";
  int blocked = 0;
  for (std::size_t i = 0; i < res.state.assignments.size(); ++i) {
    const auto& a = res.state.assignments[i];
    os << a.request.id << "," << (a.accepted ? 1 : 0) << ",";
    if (a.accepted) {
      for (std::size_t k = 0; k < a.route.nodes.size(); ++k)
        os << (k ? "-" : "") << a.route.nodes[k];
      os << "," << a.mode.label() << "," << a.channel.begin_ghz << "," << a.channel.end_ghz << ","
         << br[i]->snr_db() << "\n";
    } else {
      ++blocked;
      os << ",,,,\n";
    }
  }
  os << "revenue,blocked_count,runtime_ms\n";
  os << res.revenue << "," << blocked << "," << res.runtime_ms << "\n";
  return os.str();
}

}  // namespace fonrev
