#include "fonrev/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "fonrev/milp.hpp"
#include "fonrev/pwlfit.hpp"

namespace fonrev {

Algorithm parse_algorithm(const std::string& s) {
  if (s == "decalg") return Algorithm::DecAlg;
  if (s == "refa") return Algorithm::RefA;
  if (s == "milp-export") return Algorithm::MilpExport;
  throw ParseError(0, "unknown algorithm '" + s + "' (decalg, refa, milp-export)");
}

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::DecAlg: return "decalg";
    case Algorithm::RefA: return "refa";
    case Algorithm::MilpExport: return "milp-export";
  }
  return "?";
}

std::vector<double> rate_set(int n) {
  if (n < 0) throw DomainError("rate-set index must be non-negative");
  std::vector<double> r;
  for (int k = 0; k <= 2 * n; ++k) r.push_back(250.0 + 250.0 * k);
  return r;
}

std::vector<double> parse_rate_set(const std::string& s) {
  if (s.rfind("avg:", 0) == 0) {
    double avg = 0;
    try {
      avg = std::stod(s.substr(4));
    } catch (const std::exception&) {
      throw ParseError(0, "bad average rate in '" + s + "'");
    }
    double n = (avg - 250.0) / 250.0;
    if (n < 0 || std::abs(n - std::round(n)) > 1e-9)
      throw ParseError(0, "average rate must be 250 + n*250 Gbps");
    return rate_set(static_cast<int>(std::lround(n)));
  }
  std::vector<double> out;
  std::istringstream is(s);
  for (std::string item; std::getline(is, item, ',');) {
    try {
      std::size_t pos = 0;
      double v = std::stod(item, &pos);
      if (pos != item.size() || !(v > 0)) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ParseError(0, "bad rate '" + item + "'");
    }
  }
  if (out.empty()) throw ParseError(0, "empty rate set");
  return out;
}

ZipfRevenue::ZipfRevenue(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("revenue map is empty");
  for (double v : values_)
    if (!(v > 0)) throw DomainError("revenue values must be positive");
}

std::vector<double> ZipfRevenue::probabilities() const {
  std::vector<double> p;
  double h = 0;
  for (std::size_t k = 1; k <= values_.size(); ++k) h += 1.0 / k;
  for (std::size_t k = 1; k <= values_.size(); ++k) p.push_back(1.0 / k / h);
  return p;
}

std::vector<Request> gen_demands(std::uint64_t seed, int n, const Network& net,
                                 const DemandGenOptions& opt) {
  if (n < 1) throw DomainError("request count must be positive");
  if (opt.rates.empty()) throw DomainError("empty rate set");
  const auto& nodes = net.nodes();
  if (nodes.size() < 2) throw DomainError("network needs two nodes");
  long long pairs = static_cast<long long>(nodes.size()) * (nodes.size() - 1);
  if (opt.distinct_pairs && n > pairs)
    throw DomainError("more requests than distinct node pairs");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_node(0, nodes.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_other(0, nodes.size() - 2);
  std::uniform_int_distribution<std::size_t> pick_rate(0, opt.rates.size() - 1);
  auto probs = opt.revenue.probabilities();
  std::discrete_distribution<std::size_t> pick_rank(probs.begin(), probs.end());
  double psd = dbm_per_ghz_to_w(opt.psd_dbm_per_ghz);

  std::vector<Request> out;
  std::vector<std::pair<NodeId, NodeId>> used;
  while (static_cast<int>(out.size()) < n) {
    std::size_t a = pick_node(rng);
    std::size_t b = pick_other(rng);
    if (b >= a) ++b;
    NodeId s = nodes[a], d = nodes[b];
    if (opt.distinct_pairs) {
      if (std::find(used.begin(), used.end(), std::pair{s, d}) != used.end()) continue;
      used.emplace_back(s, d);
    }
    Request r;
    r.id = static_cast<int>(out.size());
    r.src = s;
    r.dst = d;
    r.rate_gbps = opt.rates[pick_rate(rng)];
    r.revenue = opt.revenue.values()[pick_rank(rng)];
    r.psd_w_per_ghz = psd;
    out.push_back(r);
  }
  return out;
}

std::vector<double> PsdSweep::points() const {
  if (!(step > 0)) throw DomainError("PSD step must be positive");
  if (stop < start) throw DomainError("PSD sweep is empty");
  std::vector<double> p;
  for (long long k = 0;; ++k) {
    double v = start + k * step;
    if (v > stop + 1e-9) break;
    p.push_back(v);
  }
  return p;
}

PsdSweep parse_psd(const std::string& s) {
  std::vector<double> f;
  std::istringstream is(s);
  for (std::string item; std::getline(is, item, ':');) {
    try {
      std::size_t pos = 0;
      f.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError(0, "bad PSD value '" + item + "'");
    }
  }
  PsdSweep p;
  if (f.size() == 1) {
    p.start = p.stop = f[0];
  } else if (f.size() == 3) {
    p.start = f[0];
    p.stop = f[1];
    p.step = f[2];
  } else {
    throw ParseError(0, "PSD must be DBM or DBM:DBM:STEP");
  }
  p.points();
  return p;
}

void ScenarioConfig::validate() const {
  if (runs < 1) throw DomainError("runs must be at least 1");
  psd.points();
  if (demands_path.empty() && gen_count < 1)
    throw DomainError("either a demand file or a generated request count is needed");
  if (rates.empty()) throw DomainError("empty rate set");
  if (pwl_segments < 1) throw DomainError("PWL segment count must be positive");
  if (algorithm == Algorithm::MilpExport && lp_out.empty())
    throw DomainError("milp-export needs an LP output path");
}

int ResultRecord::ok_runs() const {
  int n = 0;
  for (const auto& r : runs) n += r.status != "failed";
  return n;
}

double ResultRecord::mean_revenue() const {
  double s = 0;
  int n = 0;
  for (const auto& r : runs)
    if (r.status != "failed") {
      s += r.revenue;
      ++n;
    }
  return n ? s / n : 0.0;
}

double ResultRecord::sd_revenue() const {
  int n = ok_runs();
  if (n < 2) return 0.0;
  double m = mean_revenue(), s = 0;
  for (const auto& r : runs)
    if (r.status != "failed") s += (r.revenue - m) * (r.revenue - m);
  return std::sqrt(s / (n - 1));
}

namespace {

std::string lp_path_for(const std::string& base, std::size_t point, int run, bool many) {
  if (!many) return base;
  auto dot = base.rfind('.');
  auto slash = base.rfind('/');
  std::string stem = base, ext;
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    stem = base.substr(0, dot);
    ext = base.substr(dot);
  }
  return stem + "_p" + std::to_string(point) + "_r" + std::to_string(run) + ext;
}

}  // namespace

std::vector<ResultRecord> run_scenario(const ScenarioConfig& cfg, const Network& net,
                                       const ModeSet& modes,
                                       const std::vector<Request>& fixed) {
  if (fixed.empty()) cfg.validate();
  if (modes.empty()) throw DomainError("empty mode set");
  ImpairmentModel model;
  auto points = cfg.psd.points();
  std::vector<ResultRecord> out;
  bool many = points.size() * cfg.runs > 1;
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    ResultRecord rec;
    rec.psd_dbm_per_ghz = points[pi];
    rec.algorithm = algorithm_name(cfg.algorithm);
    rec.catalog = cfg.catalog_spec;
    rec.policy = policy_name(cfg.heuristic.policy);
    for (int r = 0; r < cfg.runs; ++r) {
      RunRecord run;
      run.run = r;
      run.seed = cfg.seed + r;
      auto t0 = std::chrono::steady_clock::now();
      try {
        std::vector<Request> demands = fixed;
        if (demands.empty()) {
          DemandGenOptions g;
          g.rates = cfg.rates;
          g.psd_dbm_per_ghz = points[pi];
          g.revenue = ZipfRevenue(cfg.revenue_values);
          demands = gen_demands(run.seed, cfg.gen_count, net, g);
        } else {
          for (auto& d : demands) d.psd_w_per_ghz = dbm_per_ghz_to_w(points[pi]);
        }
        rec.requests = static_cast<int>(demands.size());
        if (cfg.algorithm == Algorithm::MilpExport) {
          auto fit = instance_fit(net, demands, modes, cfg.pwl_segments);
          RmaxConfig rc;
          rc.eps1 = cfg.eps1;
          auto rmax = build_rmax(net, demands, modes, fit, model, rc);
          run.lp_path = lp_path_for(cfg.lp_out, pi, r, many);
          std::ofstream f(run.lp_path, std::ios::binary);
          if (!f) throw IoError("cannot write " + run.lp_path);
          f << export_lp(rmax.lp);
          if (!f) throw IoError("cannot write " + run.lp_path);
          run.status = "exported";
        } else {
          auto h = cfg.heuristic;
          h.seed = run.seed;
          auto res = cfg.algorithm == Algorithm::DecAlg ? dec_alg(net, demands, modes, h, model)
                                                        : ref_a(net, demands, modes, h, model);
          run.revenue = res.revenue;
          run.accepted = res.state.accepted;
          run.blocked = static_cast<int>(demands.size()) - res.state.accepted;
          if (cfg.keep_detail) run.detail_csv = result_csv(res, net, model);
          run.status = "ok";
        }
      } catch (const std::exception& e) {
        run.status = "failed";
        run.error = e.what();
      }
      run.runtime_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      rec.runs.push_back(std::move(run));
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<ResultRecord> run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  TopologyOptions topt;
  topt.length_divisor = cfg.length_divisor;
  auto net = load_topology(read_file(cfg.topology_path), topt);
  if (cfg.modes_path.empty()) throw DomainError("a mode-catalog file is required");
  auto modes = load_catalog(read_file(cfg.modes_path)).select(cfg.catalog_spec);
  std::vector<Request> demands;
  if (!cfg.demands_path.empty()) {
    demands = load_demands(read_file(cfg.demands_path), &net);
    if (demands.empty()) throw DomainError("demand file has no requests");
  }
  return run_scenario(cfg, net, modes, demands);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

std::string emit_csv(const std::vector<ResultRecord>& records) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "psd_dbm_per_ghz,algorithm,catalog,policy,requests,run,seed,status,revenue,accepted,"
        "blocked,runtime_ms,error\n";
  for (const auto& rec : records) {
    auto prefix = [&](std::ostringstream& o) {
      o << rec.psd_dbm_per_ghz << "," << csv_field(rec.algorithm) << "," << csv_field(rec.catalog)
        << "," << csv_field(rec.policy) << "," << rec.requests << ",";
    };
    for (const auto& r : rec.runs) {
      prefix(os);
      os << r.run << "," << r.seed << "," << r.status << "," << r.revenue << "," << r.accepted
         << "," << r.blocked << "," << r.runtime_ms << "," << csv_field(r.error) << "\n";
    }
    if (rec.runs.size() >= 2) {
      double acc = 0, blk = 0, ms = 0;
      int n = 0;
      for (const auto& r : rec.runs)
        if (r.status != "failed") {
          acc += r.accepted;
          blk += r.blocked;
          ms += r.runtime_ms;
          ++n;
        }
      if (n == 0) n = 1;
      prefix(os);
      os << "mean,,summary," << rec.mean_revenue() << "," << acc / n << "," << blk / n << ","
         << ms / n << ",\n";
      prefix(os);
      os << "sd,,summary," << rec.sd_revenue() << ",,,,\n";
    }
  }
  return os.str();
}

}  // namespace fonrev
