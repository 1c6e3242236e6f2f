#include "fonrev/milp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace fonrev {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string nm(const char* base, std::initializer_list<int> idx) {
  std::string s = base;
  for (int k : idx) {
    s += '_';
    s += std::to_string(k);
  }
  return s;
}

}  // namespace

// ---------------------------------------------------------------- MilpModel

int MilpModel::add_variable(std::string name, VarType type, double lower, double upper) {
  if (name.empty() || name.size() > 255) throw DomainError("bad variable name '" + name + "'");
  if (index_.count(name)) throw DomainError("duplicate variable " + name);
  if (lower > upper) throw DomainError("empty bounds for " + name);
  int id = static_cast<int>(vars_.size());
  index_.emplace(name, id);
  vars_.push_back({std::move(name), type, lower, upper});
  return id;
}

int MilpModel::add_constraint(std::string name, std::vector<LinTerm> terms, Sense sense,
                              double rhs) {
  if (name.empty() || name.size() > 255) throw DomainError("bad row name '" + name + "'");
  for (const auto& t : terms)
    if (t.var < 0 || t.var >= static_cast<int>(vars_.size()))
      throw DomainError("row " + name + " references an undeclared variable");
  rows_.push_back({std::move(name), std::move(terms), sense, rhs});
  return static_cast<int>(rows_.size()) - 1;
}

void MilpModel::set_objective(std::vector<LinTerm> terms, bool maximize) {
  for (const auto& t : terms)
    if (t.var < 0 || t.var >= static_cast<int>(vars_.size()))
      throw DomainError("objective references an undeclared variable");
  obj_ = std::move(terms);
  maximize_ = maximize;
}

std::optional<int> MilpModel::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------- LP text

namespace {

void write_expr(std::ostringstream& os, const MilpModel& m, const std::vector<LinTerm>& terms,
                std::size_t indent) {
  std::size_t col = indent;
  bool first = true;
  for (const auto& t : terms) {
    if (t.coef == 0) continue;
    std::string piece;
    double c = t.coef;
    if (first) {
      if (c < 0) piece += "- ";
    } else {
      piece += c < 0 ? " - " : " + ";
    }
    double a = std::abs(c);
    if (a != 1.0) piece += num(a) + " ";
    piece += m.variables()[t.var].name;
    if (col + piece.size() > 200) {
      os << "\n   ";
      col = 3;
    }
    os << piece;
    col += piece.size();
    first = false;
  }
  if (first) os << "0";
}

}  // namespace

std::string export_lp(const MilpModel& m) {
  std::ostringstream os;
  os << (m.maximize() ? "Maximize\n" : "Minimize\n");
  os << " obj: ";
  write_expr(os, m, m.objective(), 6);
  os << "\nSubject To\n";
  for (const auto& r : m.constraints()) {
    os << " " << r.name << ": ";
    write_expr(os, m, r.terms, r.name.size() + 3);
    switch (r.sense) {
      case Sense::LessEqual: os << " <= "; break;
      case Sense::GreaterEqual: os << " >= "; break;
      case Sense::Equal: os << " = "; break;
    }
    os << num(r.rhs == 0 ? 0.0 : r.rhs) << "\n";
  }
  os << "Bounds\n";
  for (const auto& v : m.variables()) {
    if (v.type == VarType::Binary) continue;
    if (v.lower == -kInf && v.upper == kInf) {
      os << " " << v.name << " free\n";
    } else if (v.upper == kInf) {
      if (v.lower != 0) os << " " << v.name << " >= " << num(v.lower) << "\n";
    } else if (v.lower == -kInf) {
      os << " -inf <= " << v.name << " <= " << num(v.upper) << "\n";
    } else {
      os << " " << num(v.lower) << " <= " << v.name << " <= " << num(v.upper) << "\n";
    }
  }
  os << "Binary\n";
  for (const auto& v : m.variables())
    if (v.type == VarType::Binary) os << " " << v.name << "\n";
  os << "End\n";
  return os.str();
}

// ---------------------------------------------------------------- solutions

double SolutionVector::get(const std::string& name) const {
  auto it = values.find(name);
  return it == values.end() ? 0.0 : it->second;
}

SolutionVector parse_solution(const std::string& text) {
  SolutionVector sol;
  std::istringstream is(text);
  int lineno = 0;
  for (std::string raw; std::getline(is, raw);) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    std::istringstream ls(line);
    std::string name, value, extra;
    if (!(ls >> name)) continue;
    if (!(ls >> value) || (ls >> extra)) throw ParseError(lineno, "expected '<name> <value>'");
    double v = 0;
    auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size())
      throw ParseError(lineno, "bad value '" + value + "'");
    sol.values[name] = v;
  }
  return sol;
}

std::string emit_solution(const SolutionVector& sol) {
  std::ostringstream os;
  for (const auto& [k, v] : sol.values) os << k << " " << num(v) << "\n";
  return os.str();
}

std::vector<double> dense_values(const MilpModel& m, const SolutionVector& sol) {
  std::vector<double> x(m.variables().size(), 0.0);
  for (const auto& [k, v] : sol.values)
    if (auto id = m.find(k)) x[*id] = v;
  return x;
}

CheckReport check_solution(const MilpModel& m, const SolutionVector& sol, double tol) {
  CheckReport rep;
  for (const auto& [k, v] : sol.values)
    if (!m.find(k)) rep.unknown_names.push_back(k);
  auto x = dense_values(m, sol);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& v = m.variables()[i];
    if (x[i] < v.lower - tol || x[i] > v.upper + tol)
      rep.bounds.push_back({static_cast<int>(i), v.name, x[i], false});
    else if (v.type == VarType::Binary && std::min(std::abs(x[i]), std::abs(x[i] - 1)) > tol)
      rep.bounds.push_back({static_cast<int>(i), v.name, x[i], true});
  }
  for (std::size_t r = 0; r < m.constraints().size(); ++r) {
    const auto& row = m.constraints()[r];
    double lhs = 0;
    for (const auto& t : row.terms) lhs += t.coef * x[t.var];
    double miss = 0;
    switch (row.sense) {
      case Sense::LessEqual: miss = lhs - row.rhs; break;
      case Sense::GreaterEqual: miss = row.rhs - lhs; break;
      case Sense::Equal: miss = std::abs(lhs - row.rhs); break;
    }
    if (miss > tol) rep.rows.push_back({static_cast<int>(r), row.name, miss});
  }
  for (const auto& t : m.objective()) rep.objective += t.coef * x[t.var];
  return rep;
}

// ---------------------------------------------------------------- RMAX

int RmaxModel::mode_index(const TransmissionMode& md) const {
  for (int c = 0; c < C(); ++c)
    if (modes_[c].mf_name == md.mf_name && std::abs(modes_[c].fec_oh - md.fec_oh) < 1e-12)
      return c;
  return -1;
}

double RmaxModel::ad_coef(int i, int j, int c) const {
  const auto& ri = demands_[i];
  const auto& rj = demands_[j];
  return model_.eps_x() * rj.psd_w_per_ghz * modes_[c].se() / (ri.rate_gbps * ri.psd_w_per_ghz);
}

double required_theta(const Network& net, const std::vector<Request>& demands,
                      const ModeSet& modes, const PwlFit& fit, const ImpairmentModel& model) {
  double inv_th = 0, se_max = 0;
  for (const auto& md : modes) {
    inv_th = std::max(inv_th, 1.0 / md.snr_th_linear());
    se_max = std::max(se_max, md.se());
  }
  double g_max = 0, g_min = kInf, r_min = kInf;
  for (const auto& r : demands) {
    g_max = std::max(g_max, r.psd_w_per_ghz);
    g_min = std::min(g_min, r.psd_w_per_ghz);
    r_min = std::min(r_min, r.rate_gbps);
  }
  if (demands.empty()) return 10.0 * inv_th;
  int l_max = 0;
  for (const auto& l : net.links()) l_max = std::max(l_max, l.spans);
  // The envelope is decreasing on [0, x2]; its largest value is at 0.
  double h_max = std::max(eval_upper(fit, 0.0), 0.0);
  double xci = model.mu() * g_max * g_max * l_max * h_max + inv_th;
  double ad = model.eps_x() * net.spectrum_ghz() * g_max * se_max / (r_min * g_min);
  return std::max({xci, ad, inv_th});
}

PwlFit instance_fit(const Network& net, const std::vector<Request>& demands,
                    const ModeSet& modes, int q) {
  double x2 = 200.0;
  for (const auto& md : modes)
    for (const auto& r : demands)
      if (r.rate_gbps > 0)
        x2 = std::max(x2, 2.0 * md.se() * net.spectrum_ghz() / r.rate_gbps * (1 + 1e-9));
  return fit_pwl(1.001, x2, q);
}

RmaxModel build_rmax(const Network& net, const std::vector<Request>& demands,
                     const ModeSet& modes, const PwlFit& fit, const ImpairmentModel& model,
                     const RmaxConfig& cfg) {
  if (modes.empty()) throw DomainError("empty mode set");
  for (std::size_t i = 0; i < demands.size(); ++i) {
    const auto& r = demands[i];
    if (!net.has_node(r.src) || !net.has_node(r.dst))
      throw DomainError("request " + std::to_string(r.id) + " references an unknown node");
    for (const auto& md : modes) {
      double x = 2.0 * md.se() * net.spectrum_ghz() / r.rate_gbps;
      if (x > fit.x2) {
        std::ostringstream os;
        os << "fit domain [" << fit.x1 << ", " << fit.x2 << "] does not cover mode "
           << md.label() << " at rate " << r.rate_gbps << " Gbps (needs " << x << ")";
        throw DomainError(os.str());
      }
    }
  }

  RmaxModel R(net);
  R.demands_ = demands;
  R.modes_ = modes;
  R.fit_ = fit;
  R.model_ = model;
  R.eps1_ = cfg.eps1;
  double theta_min = required_theta(net, demands, modes, fit, model);
  if (cfg.theta > 0) {
    if (cfg.theta < theta_min)
      throw DomainError("theta " + num(cfg.theta) + " below the instance minimum " +
                        num(theta_min));
    R.theta_ = cfg.theta;
  } else {
    double inv_th = 0;
    for (const auto& md : modes) inv_th = std::max(inv_th, 1.0 / md.snr_th_linear());
    R.theta_ = std::max(10.0 * inv_th, 2.0 * theta_min);
  }
  const double theta = R.theta_;
  const double F = net.spectrum_ghz();
  const int D = R.D(), V = R.V(), E = R.E(), C = R.C();
  const auto& nodes = net.nodes();
  R.node_pos_.assign(nodes.empty() ? 0 : nodes.back() + 1, -1);
  for (int k = 0; k < V; ++k) R.node_pos_[nodes[k]] = k;

  MilpModel& M = R.lp;
  auto bin = [&](const char* b, std::initializer_list<int> idx) { return M.add_binary(nm(b, idx)); };
  auto cont = [&](const char* b, std::initializer_list<int> idx, double lo, double hi) {
    return M.add_variable(nm(b, idx), VarType::Continuous, lo, hi);
  };

  // Variables, grouped by kind.
  R.B_.resize(D);
  R.q_.resize(D * V);
  R.p_.resize(D * V);
  R.x_.resize(D * E);
  R.xc_.resize(D * E * C);
  R.m_.resize(D * C);
  R.f_.resize(D);
  R.df_.resize(D);
  R.fd_.assign(D * D, -1);
  R.dfo_.assign(D * D, -1);
  R.fx_.assign(D * D, -1);
  R.w_.assign(D * D, -1);
  R.a_.assign(D * D * 3, -1);
  R.tase_.resize(D);
  R.tsci_.resize(D);
  R.tpli_.resize(D);
  R.txci_.assign(D * D * V, -1);
  R.tad_.assign(D * D * V, -1);
  R.h_.assign(D * D * C, -1);

  for (int i = 0; i < D; ++i) R.B_[i] = bin("B", {i});
  for (int i = 0; i < D; ++i)
    for (int v = 0; v < V; ++v) R.q_[i * V + v] = bin("q", {i, nodes[v]});
  for (int i = 0; i < D; ++i)
    for (int v = 0; v < V; ++v) R.p_[i * V + v] = bin("p", {i, nodes[v]});
  for (int i = 0; i < D; ++i)
    for (int e = 0; e < E; ++e) {
      const auto& l = net.links()[e];
      R.x_[i * E + e] = bin("x", {i, l.from, l.to});
    }
  for (int i = 0; i < D; ++i)
    for (int e = 0; e < E; ++e)
      for (int c = 0; c < C; ++c) {
        const auto& l = net.links()[e];
        R.xc_[(i * E + e) * C + c] = bin("xc", {i, l.from, l.to, c});
      }
  for (int i = 0; i < D; ++i)
    for (int c = 0; c < C; ++c) R.m_[i * C + c] = bin("m", {i, c});
  for (int i = 0; i < D; ++i) R.f_[i] = cont("f", {i}, 0, F);
  for (int i = 0; i < D; ++i) R.df_[i] = cont("df", {i}, 0, F);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      if (i != j) R.fd_[i * D + j] = cont("fd", {i, j}, 0, F);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      if (i != j) R.dfo_[i * D + j] = cont("dfo", {i, j}, 0, F);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      if (i != j) R.fx_[i * D + j] = cont("fx", {i, j}, 0, F);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      if (i != j) R.w_[i * D + j] = bin("w", {i, j});
  for (int i = 0; i < D; ++i)
    for (int j = i + 1; j < D; ++j)
      for (int k = 0; k < 3; ++k) {
        const char* b = k == 0 ? "a1" : k == 1 ? "a2" : "a3";
        R.a_[(i * D + j) * 3 + k] = bin(b, {i, j});
      }
  for (int i = 0; i < D; ++i) R.tase_[i] = cont("tase", {i}, 0, kInf);
  for (int i = 0; i < D; ++i) R.tsci_[i] = cont("tsci", {i}, 0, kInf);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      if (i != j)
        for (int v = 0; v < V; ++v)
          R.txci_[(i * D + j) * V + v] = cont("txci", {i, j, nodes[v]}, 0, kInf);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      if (i != j)
        for (int v = 0; v < V; ++v)
          R.tad_[(i * D + j) * V + v] = cont("tad", {i, j, nodes[v]}, 0, kInf);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      if (i != j)
        for (int c = 0; c < C; ++c) R.h_[(i * D + j) * C + c] = cont("h", {i, j, c}, 0, kInf);
  for (int i = 0; i < D; ++i) R.tpli_[i] = cont("tpli", {i}, 0, kInf);

  // Objective: sum eta_i B_i - eps1 t^PLI_i.
  {
    std::vector<LinTerm> obj;
    for (int i = 0; i < D; ++i) obj.push_back({R.B(i), demands[i].revenue});
    for (int i = 0; i < D; ++i) obj.push_back({R.tpli(i), -cfg.eps1});
    M.set_objective(std::move(obj), true);
  }

  auto row = [&](const char* b, std::initializer_list<int> idx, std::vector<LinTerm> t, Sense s,
                 double rhs) { M.add_constraint(nm(b, idx), std::move(t), s, rhs); };

  // Flow: in-degree, out-degree, conservation.
  for (int i = 0; i < D; ++i)
    for (int v = 0; v < V; ++v) {
      std::vector<LinTerm> t{{R.q(i, v), 1}};
      for (int e = 0; e < E; ++e)
        if (net.links()[e].to == nodes[v]) t.push_back({R.x(i, e), -1});
      row("c7a", {i, nodes[v]}, std::move(t), Sense::Equal, 0);
    }
  for (int i = 0; i < D; ++i)
    for (int v = 0; v < V; ++v) {
      std::vector<LinTerm> t{{R.p(i, v), 1}};
      for (int e : net.out_links(nodes[v])) t.push_back({R.x(i, e), -1});
      row("c7b", {i, nodes[v]}, std::move(t), Sense::Equal, 0);
    }
  for (int i = 0; i < D; ++i)
    for (int v = 0; v < V; ++v) {
      std::vector<LinTerm> t{{R.p(i, v), 1}, {R.q(i, v), -1}};
      if (nodes[v] == demands[i].src) t.push_back({R.B(i), -1});
      if (nodes[v] == demands[i].dst) t.push_back({R.B(i), 1});
      row("c7c", {i, nodes[v]}, std::move(t), Sense::Equal, 0);
    }

  // Spectrum.
  for (int i = 0; i < D; ++i) {
    std::vector<LinTerm> t;
    for (int c = 0; c < C; ++c) t.push_back({R.m(i, c), 1});
    t.push_back({R.B(i), -1});
    row("c8a", {i}, std::move(t), Sense::Equal, 0);
  }
  for (int i = 0; i < D; ++i) {
    std::vector<LinTerm> t{{R.df(i), 1}};
    for (int c = 0; c < C; ++c) t.push_back({R.m(i, c), -demands[i].rate_gbps / modes[c].se()});
    row("c8b", {i}, std::move(t), Sense::GreaterEqual, 0);
  }
  for (int i = 0; i < D; ++i)
    for (int j = i + 1; j < D; ++j)
      row("c8c", {i, j}, {{R.w(i, j), 1}, {R.w(j, i), 1}}, Sense::Equal, 1);
  for (int i = 0; i < D; ++i) {
    row("c8d1", {i}, {{R.f(i), 1}, {R.df(i), 0.5}}, Sense::LessEqual, F);
    row("c8d2", {i}, {{R.f(i), 1}, {R.df(i), -0.5}}, Sense::GreaterEqual, 0);
  }
  // Center distance, over every ordered pair so that f_ij = |f_i - f_j|.
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) {
      if (i == j) continue;
      row("c8e1", {i, j}, {{R.fd(i, j), 1}, {R.f(i), -1}, {R.f(j), 1}, {R.w(i, j), 2 * F}},
          Sense::LessEqual, 2 * F);
      row("c8e2", {i, j}, {{R.f(i), 1}, {R.f(j), -1}, {R.fd(i, j), -1}}, Sense::LessEqual, 0);
    }
  // Overlap >= min(df_i, df_j, fx_ij).
  for (int i = 0; i < D; ++i)
    for (int j = i + 1; j < D; ++j) {
      row("c8f1", {i, j}, {{R.df(i), 1}, {R.a(0, i, j), -F}, {R.dfo(i, j), -1}}, Sense::LessEqual,
          0);
      row("c8f2", {i, j}, {{R.df(j), 1}, {R.a(1, i, j), -F}, {R.dfo(i, j), -1}}, Sense::LessEqual,
          0);
      row("c8f3", {i, j}, {{R.fx(i, j), 1}, {R.a(2, i, j), -F}, {R.dfo(i, j), -1}},
          Sense::LessEqual, 0);
      row("c8f4", {i, j}, {{R.df(i), 0.5}, {R.df(j), 0.5}, {R.fd(i, j), -1}, {R.fx(i, j), -1}},
          Sense::LessEqual, 0);
      row("c8f5", {i, j}, {{R.fx(i, j), 1}, {R.fx(j, i), -1}}, Sense::Equal, 0);
      row("c8f6", {i, j}, {{R.a(0, i, j), 1}, {R.a(1, i, j), 1}, {R.a(2, i, j), 1}}, Sense::Equal,
          2);
    }
  for (int e = 0; e < E; ++e)
    for (int i = 0; i < D; ++i)
      for (int j = i + 1; j < D; ++j) {
        const auto& l = net.links()[e];
        row("c8g", {i, j, l.from, l.to}, {{R.dfo(i, j), 1}, {R.x(i, e), F}, {R.x(j, e), F}},
            Sense::LessEqual, 2 * F);
      }
  for (int i = 0; i < D; ++i)
    for (int j = i + 1; j < D; ++j) {
      row("c8h1", {i, j}, {{R.dfo(i, j), 1}, {R.dfo(j, i), -1}}, Sense::Equal, 0);
      row("c8h2", {i, j}, {{R.fd(i, j), 1}, {R.fd(j, i), -1}}, Sense::Equal, 0);
    }

  // SNR.
  for (int i = 0; i < D; ++i) {
    std::vector<LinTerm> t{{R.tase(i), 1}};
    for (int e = 0; e < E; ++e)
      t.push_back({R.x(i, e), -model.ase_nsr(net.links()[e].spans, demands[i].psd_w_per_ghz)});
    row("c11a", {i}, std::move(t), Sense::Equal, 0);
  }
  for (int i = 0; i < D; ++i) {
    std::vector<LinTerm> t{{R.tsci(i), 1}};
    for (int e = 0; e < E; ++e)
      for (int c = 0; c < C; ++c)
        t.push_back({R.xc(i, e, c), -model.sci_nsr(net.links()[e].spans, demands[i].psd_w_per_ghz,
                                                    demands[i].rate_gbps / modes[c].se())});
    row("c11b", {i}, std::move(t), Sense::Equal, 0);
  }
  for (int i = 0; i < D; ++i)
    for (int c = 0; c < C; ++c)
      for (int e = 0; e < E; ++e) {
        const auto& l = net.links()[e];
        row("c11c", {i, c, l.from, l.to}, {{R.x(i, e), 1}, {R.m(i, c), 1}, {R.xc(i, e, c), -1}},
            Sense::LessEqual, 1);
      }
  for (int e = 0; e < E; ++e) {
    const auto& l = net.links()[e];
    int u = R.node_pos(l.from), v = R.node_pos(l.to);
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j) {
        if (i == j) continue;
        double g = demands[j].psd_w_per_ghz;
        for (int c = 0; c < C; ++c)
          row("c11d", {i, j, c, l.from, l.to},
              {{R.txci(i, j, v), 1},
               {R.txci(i, j, u), -1},
               {R.x(i, e), -theta},
               {R.xc(j, e, c), -theta},
               {R.h(i, j, c), -model.mu() * g * g * l.spans}},
              Sense::GreaterEqual, -2 * theta);
      }
  }
  for (int e = 0; e < E; ++e) {
    const auto& l = net.links()[e];
    int u = R.node_pos(l.from), v = R.node_pos(l.to);
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j) {
        if (i == j) continue;
        row("c11e", {i, j, l.from, l.to},
            {{R.txci(i, j, v), 1}, {R.txci(i, j, u), -1}, {R.x(i, e), -theta}},
            Sense::GreaterEqual, -theta);
      }
  }
  // Node crosstalk, normalized by the primary's bandwidth in mode c.
  for (int c = 0; c < C; ++c)
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j) {
        if (i == j) continue;
        for (int v = 0; v < V; ++v)
          row("c11f", {i, j, c, nodes[v]},
              {{R.tad(i, j, v), 1},
               {R.p(i, v), -theta},
               {R.q(j, v), -theta},
               {R.m(i, c), -theta},
               {R.dfo(i, j), -R.ad_coef(i, j, c)}},
              Sense::GreaterEqual, -3 * theta);
      }
  for (int i = 0; i < D; ++i) {
    std::vector<LinTerm> t{{R.tpli(i), 1}, {R.tase(i), -1}, {R.tsci(i), -1}};
    int d = R.node_pos(demands[i].dst);
    for (int j = 0; j < D; ++j)
      if (j != i) t.push_back({R.txci(i, j, d), -1});
    for (int j = 0; j < D; ++j)
      if (j != i)
        for (int v = 0; v < V; ++v) t.push_back({R.tad(i, j, v), -1});
    row("c11g1", {i}, std::move(t), Sense::GreaterEqual, 0);
    std::vector<LinTerm> u{{R.tpli(i), 1}};
    for (int c = 0; c < C; ++c) u.push_back({R.m(i, c), -1.0 / modes[c].snr_th_linear()});
    row("c11g2", {i}, std::move(u), Sense::LessEqual, 0);
  }
  // Envelope rows for the XCI log term.
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) {
      if (i == j) continue;
      for (int c = 0; c < C; ++c) {
        double scale = 2.0 * modes[c].se() / demands[j].rate_gbps;
        for (int k = 0; k < fit.q_segments(); ++k)
          row("pwl", {i, j, c, k + 1},
              {{R.h(i, j, c), 1}, {R.fd(i, j), -fit.lines[k].slope * scale}},
              Sense::GreaterEqual, fit.lines[k].intercept);
      }
    }
  return R;
}

RmaxSize rmax_size(long long D, long long V, long long E, long long C, long long Q) {
  const long long P = D * (D - 1) / 2, O = D * (D - 1);
  RmaxSize s;
  s.binaries = D + 2 * D * V + D * E + D * E * C + D * C + O + 3 * P;
  s.variables = s.binaries + 2 * D + 3 * O + 3 * D + 2 * O * V + O * C;
  s.rows = 3 * D * V + D + D + P + 2 * D + 2 * O + 6 * P + E * P + 2 * P + D + D + D * C * E +
           E * O * C + E * O + C * O * V + 2 * D + O * C * Q;
  return s;
}

SolutionVector assignment_to_solution(const std::vector<Assignment>& assignments,
                                      const RmaxModel& R) {
  const int D = R.D(), V = R.V(), C = R.C();
  const auto& net = R.network();
  const auto& M = R.lp;
  const auto& model = R.impairments();
  std::vector<double> x(M.variables().size(), 0.0);

  // Accepted lightpath per demand, with its mode index.
  std::vector<const Assignment*> lp(D, nullptr);
  std::vector<int> mode(D, -1);
  for (const auto& a : assignments) {
    if (!a.accepted) continue;
    int i = a.request.id;
    if (i < 0 || i >= D) throw DomainError("assignment for unknown request " + std::to_string(i));
    if (lp[i]) throw DomainError("two assignments for request " + std::to_string(i));
    if (a.route.src() != R.demands()[i].src || a.route.dst() != R.demands()[i].dst)
      throw DomainError("route endpoints differ from request " + std::to_string(i));
    for (std::size_t k = 1; k < a.route.nodes.size(); ++k)
      if (!net.link_index(a.route.nodes[k - 1], a.route.nodes[k]))
        throw DomainError("route edge " + std::to_string(a.route.nodes[k - 1]) + "->" +
                          std::to_string(a.route.nodes[k]) + " is not in the network");
    int c = R.mode_index(a.mode);
    if (c < 0) throw DomainError("mode " + a.mode.label() + " is not in the model");
    lp[i] = &a;
    mode[i] = c;
  }

  std::vector<double> fc(D, 0.0), bw(D, 0.0);
  for (int i = 0; i < D; ++i) {
    if (!lp[i]) continue;
    const auto& a = *lp[i];
    fc[i] = a.channel.center();
    bw[i] = a.channel.width();
    x[R.B(i)] = 1;
    x[R.m(i, mode[i])] = 1;
    x[R.f(i)] = fc[i];
    x[R.df(i)] = bw[i];
    for (int e : a.route.links) {
      x[R.x(i, e)] = 1;
      x[R.xc(i, e, mode[i])] = 1;
    }
    for (std::size_t k = 0; k < a.route.nodes.size(); ++k) {
      int v = R.node_pos(a.route.nodes[k]);
      if (k > 0) x[R.q(i, v)] = 1;
      if (k + 1 < a.route.nodes.size()) x[R.p(i, v)] = 1;
    }
    double g = a.request.psd_w_per_ghz;
    double tase = 0, tsci = 0;
    for (int e : a.route.links) {
      int s = net.links()[e].spans;
      tase += model.ase_nsr(s, g);
      tsci += model.sci_nsr(s, g, a.request.rate_gbps / R.modes()[mode[i]].se());
    }
    x[R.tase(i)] = tase;
    x[R.tsci(i)] = tsci;
  }

  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) {
      if (i == j) continue;
      double d = std::abs(fc[i] - fc[j]);
      x[R.fd(i, j)] = d;
      x[R.w(i, j)] = (fc[i] > fc[j] || (fc[i] == fc[j] && i < j)) ? 1 : 0;
      double fxv = std::max(0.0, 0.5 * (bw[i] + bw[j]) - d);
      x[R.fx(i, j)] = fxv;
      x[R.dfo(i, j)] = std::min({bw[i], bw[j], fxv});
      for (int c = 0; c < C; ++c)
        x[R.h(i, j, c)] = eval_upper(R.fit(), 2.0 * R.modes()[c].se() * d / R.demands()[j].rate_gbps);
    }
  for (int i = 0; i < D; ++i)
    for (int j = i + 1; j < D; ++j) {
      double vals[3] = {bw[i], bw[j], x[R.fx(i, j)]};
      int arg = static_cast<int>(std::min_element(vals, vals + 3) - vals);
      for (int k = 0; k < 3; ++k) x[R.a(k, i, j)] = k == arg ? 0 : 1;
    }

  // Accumulated XCI along the primary's route, and node crosstalk.
  for (int i = 0; i < D; ++i) {
    if (!lp[i]) continue;
    const auto& a = *lp[i];
    double tpli = x[R.tase(i)] + x[R.tsci(i)];
    for (int j = 0; j < D; ++j) {
      if (j == i) continue;
      double t = 0;
      for (std::size_t k = 0; k < a.route.links.size(); ++k) {
        int e = a.route.links[k];
        if (lp[j] && x[R.x(j, e)] > 0.5) {
          double g = R.demands()[j].psd_w_per_ghz;
          t += model.mu() * g * g * net.links()[e].spans * x[R.h(i, j, mode[j])];
        }
        x[R.txci(i, j, R.node_pos(a.route.nodes[k + 1]))] = t;
      }
      tpli += t;
      if (!lp[j]) continue;
      for (int v = 0; v < V; ++v) {
        if (x[R.p(i, v)] > 0.5 && x[R.q(j, v)] > 0.5) {
          double val = R.ad_coef(i, j, mode[i]) * x[R.dfo(i, j)];
          x[R.tad(i, j, v)] = val;
          tpli += val;
        }
      }
    }
    x[R.tpli(i)] = tpli;
  }

  SolutionVector sol;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (x[k] != 0) sol.values[M.variables()[k].name] = x[k];
  return sol;
}

}  // namespace fonrev
