#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fonrev/decalg.hpp"
#include "fonrev/netmodel.hpp"

namespace fonrev {

enum class Algorithm { DecAlg, RefA, MilpExport };

Algorithm parse_algorithm(const std::string& s);
std::string algorithm_name(Algorithm a);

// {250, 500, ..., 250 + 2n*250}; its mean is 250 + n*250.
std::vector<double> rate_set(int n);
// Parses "250,500,750" or "avg:<gbps>" (the symmetric set with that mean).
std::vector<double> parse_rate_set(const std::string& s);

// P(rank k) proportional to 1/k over ranks 1..values.size(); returns
// values[k-1].
class ZipfRevenue {
 public:
  explicit ZipfRevenue(std::vector<double> values = {1, 2, 3, 4, 5});
  std::vector<double> probabilities() const;
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

struct DemandGenOptions {
  std::vector<double> rates{250};
  double psd_dbm_per_ghz = -16;
  ZipfRevenue revenue;
  bool distinct_pairs = false;
};

std::vector<Request> gen_demands(std::uint64_t seed, int n, const Network& net,
                                 const DemandGenOptions& opt);

struct PsdSweep {
  double start = -16, stop = -16, step = 1;
  std::vector<double> points() const;
};

// "DBM" or "DBM:DBM:STEP"
PsdSweep parse_psd(const std::string& s);

struct ScenarioConfig {
  std::string topology_path;
  double length_divisor = 1;
  std::string demands_path;  // empty: generate
  int gen_count = 0;
  std::vector<double> rates{250};
  std::vector<double> revenue_values{1, 2, 3, 4, 5};
  PsdSweep psd;
  std::string modes_path;
  std::string catalog_spec = "all";
  Algorithm algorithm = Algorithm::DecAlg;
  int runs = 10;
  std::uint64_t seed = 1;
  DecAlgConfig heuristic;
  double eps1 = 0.01;
  int pwl_segments = 20;
  std::string lp_out;  // milp-export target
  bool keep_detail = false;

  void validate() const;
};

struct RunRecord {
  int run = 0;
  std::uint64_t seed = 0;
  std::string status;  // ok, failed, exported
  std::string error;
  double revenue = 0;
  int accepted = 0;
  int blocked = 0;
  double runtime_ms = 0;
  std::string detail_csv;
  std::string lp_path;
};

struct ResultRecord {
  double psd_dbm_per_ghz = 0;
  std::string algorithm;
  std::string catalog;
  std::string policy;
  int requests = 0;
  std::vector<RunRecord> runs;

  int ok_runs() const;
  double mean_revenue() const;
  double sd_revenue() const;  // sample sd, 0 with fewer than two runs
};

// Runs with already loaded inputs. demands, when non-empty, replace the generator.
std::vector<ResultRecord> run_scenario(const ScenarioConfig& cfg, const Network& net,
                                       const ModeSet& modes,
                                       const std::vector<Request>& demands = {});
std::vector<ResultRecord> run_scenario(const ScenarioConfig& cfg);

// Header, one row per (point, run), then mean and sd rows for points with
// at least two runs.
std::string emit_csv(const std::vector<ResultRecord>& records);

}  // namespace fonrev
