// Command-line front end. Talks to the library only through fonrev.h.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fonrev/fonrev.h"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double to_number(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("bad " + what + " '" + s + "'");
}

// "250,500,750" or "avg:1000" (the set 250..250+2n*250 with that mean)
std::vector<double> parse_rates(const std::string& s) {
  std::vector<double> out;
  if (s.rfind("avg:", 0) == 0) {
    double avg = to_number(s.substr(4), "average rate");
    double n = (avg - 250.0) / 250.0;
    if (n < 0 || n != static_cast<long long>(n))
      throw UsageError("average rate must be 250 + n*250 Gbps");
    for (long long k = 0; k <= 2 * static_cast<long long>(n); ++k) out.push_back(250.0 + 250.0 * k);
    return out;
  }
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    double v = to_number(item, "rate");
    if (!(v > 0)) throw UsageError("rates must be positive");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty rate set");
  return out;
}

void parse_psd(const std::string& s, fonrev_scenario_config& c) {
  std::vector<double> f;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ':');) f.push_back(to_number(item, "PSD"));
  if (f.size() == 1) {
    c.psd_start = c.psd_stop = f[0];
    c.psd_step = 1;
  } else if (f.size() == 3) {
    c.psd_start = f[0];
    c.psd_stop = f[1];
    c.psd_step = f[2];
  } else {
    throw UsageError("PSD must be DBM or DBM:DBM:STEP");
  }
}

int parse_algo(const std::string& s) {
  if (s == "decalg") return FONREV_ALGO_DECALG;
  if (s == "refa") return FONREV_ALGO_REFA;
  if (s == "milp-export") return FONREV_ALGO_MILP_EXPORT;
  throw UsageError("unknown algorithm '" + s + "'");
}

int parse_policy(const std::string& s) {
  if (s == "sa") return FONREV_POLICY_SA;
  if (s == "sa-b") return FONREV_POLICY_SA_B;
  if (s == "sa-r") return FONREV_POLICY_SA_R;
  if (s == "sa-ra") return FONREV_POLICY_SA_RA;
  throw UsageError("unknown policy '" + s + "'");
}

std::string take(size_t (*get)(const fonrev_records*, char*, size_t), const fonrev_records* r) {
  std::string s(get(r, nullptr, 0), '\0');
  get(r, s.data(), s.size() + 1);
  return s;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Revenue-driven routing, modulation, FEC and spectrum planning"};
  app.set_version_flag("--version", std::string(fonrev_version()));

  fonrev_scenario_config cfg;
  fonrev_scenario_config_init(&cfg);

  std::string topology, demands, modes = std::string(FONREV_DATA_DIR) + "/modes.cat";
  std::string rates = "250", psd = "-16", catalog = "all", algo = "decalg", policy = "sa-ra";
  std::string out = "-", detail, lp_out;
  int gen = 0;
  double divisor = 1;

  auto env = [](const char* name) { return std::string("FONREV_") + name; };
  app.add_option("--topology", topology, "Topology file")->required()->envname(env("TOPOLOGY"));
  auto* dem = app.add_option("--demands", demands, "Demand file")->envname(env("DEMANDS"));
  auto* gn = app.add_option("--gen", gen, "Generate N requests per run")->envname(env("GEN"));
  dem->excludes(gn);
  app.add_option("--rates", rates, "Rate set: 250,500,... or avg:GBPS")->envname(env("RATES"));
  app.add_option("--psd", psd, "PSD in dBm/GHz, or START:STOP:STEP")->envname(env("PSD"));
  app.add_option("--catalog", catalog, "all | amf:M:OH | mfec:M:MINOH | list:LABEL,...")
      ->envname(env("CATALOG"));
  app.add_option("--modes", modes, "Mode catalog file")->envname(env("MODES"));
  app.add_option("--algo", algo, "decalg | refa | milp-export")->envname(env("ALGO"));
  app.add_option("--runs", cfg.runs, "Runs per sweep point")->envname(env("RUNS"));
  app.add_option("--seed", cfg.seed, "Base seed; run r uses seed+r")->envname(env("SEED"));
  app.add_option("--out", out, "CSV output ('-' for stdout)")->envname(env("OUT"));
  app.add_option("--detail", detail, "Per-request CSV of the last successful run")
      ->envname(env("DETAIL"));
  app.add_option("--lp-out", lp_out, "LP file for milp-export")->envname(env("LP_OUT"));
  app.add_option("--length-divisor", divisor, "Divide topology lengths by this")
      ->envname(env("LENGTH_DIVISOR"));
  app.add_option("--k", cfg.params.k, "Candidate routes per request")->envname(env("K"));
  app.add_option("--n-rtma", cfg.params.n_rtma, "RTMA solutions per lock subset")
      ->envname(env("N_RTMA"));
  app.add_option("--n-round", cfg.params.n_round, "Spectrum assignment rounds")
      ->envname(env("N_ROUND"));
  app.add_option("--phi", cfg.params.phi, "Revenue/spectrum tradeoff")->envname(env("PHI"));
  app.add_option("--eps1", cfg.eps1, "MILP spectrum weight")->envname(env("EPS1"));
  app.add_option("--eps2", cfg.params.eps2, "RTMA margin weight")->envname(env("EPS2"));
  app.add_option("--guard", cfg.params.guard_ghz, "Guard band in GHz")->envname(env("GUARD"));
  app.add_option("--step", cfg.params.step_ghz, "Spectrum scan step in GHz (0: guard)")
      ->envname(env("STEP"));
  app.add_option("--policy", policy, "sa | sa-b | sa-r | sa-ra")->envname(env("POLICY"));
  app.add_option("--pwl-q", cfg.pwl_segments, "PWL segments for milp-export")
      ->envname(env("PWL_Q"));
  app.add_option("--node-limit", cfg.params.node_limit, "B&B node limit per RTMA solve")
      ->envname(env("NODE_LIMIT"));
  app.add_option("--xci-env-q", cfg.params.xci_envelope_q,
                 "XCI envelope pieces in spectrum assignment (0: exact log term)")
      ->check(CLI::NonNegativeNumber)
      ->envname(env("XCI_ENV_Q"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  std::vector<double> rate_values;
  try {
    if (demands.empty() && gen < 1) throw UsageError("one of --demands or --gen N is required");
    rate_values = parse_rates(rates);
    parse_psd(psd, cfg);
    cfg.algorithm = parse_algo(algo);
    cfg.params.policy = parse_policy(policy);
    if (cfg.algorithm == FONREV_ALGO_MILP_EXPORT && lp_out.empty())
      throw UsageError("milp-export needs --lp-out");
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  cfg.topology_path = topology.c_str();
  cfg.length_divisor = divisor;
  cfg.demands_path = demands.empty() ? nullptr : demands.c_str();
  cfg.gen_count = gen;
  cfg.rates = rate_values.data();
  cfg.n_rates = rate_values.size();
  cfg.modes_path = modes.c_str();
  cfg.catalog_spec = catalog.c_str();
  cfg.lp_out_path = lp_out.empty() ? nullptr : lp_out.c_str();
  cfg.keep_detail = detail.empty() ? 0 : 1;

  fonrev_records* rec = nullptr;
  fonrev_status st = fonrev_scenario_run(&cfg, &rec);
  if (st != FONREV_OK) {
    std::cerr << "error: " << fonrev_last_error() << "\n";
    return st == FONREV_ERR_PARSE || st == FONREV_ERR_DOMAIN || st == FONREV_ERR_ARGUMENT ||
                   st == FONREV_ERR_IO
               ? kExitConfig
               : kExitRuntime;
  }
  int rc = 0;
  try {
    write_text(out, take(fonrev_records_csv, rec));
    if (!detail.empty()) write_text(detail, take(fonrev_records_detail, rec));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    rc = kExitRuntime;
  }
  size_t failed = fonrev_records_failed(rec);
  if (failed) std::cerr << "warning: " << failed << " run(s) failed\n";
  fonrev_records_free(rec);
  return rc;
}
