#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "fonrev/scenario.hpp"

using namespace fonrev;

namespace {

const std::string kDataDir = FONREV_DATA_DIR;

Network nsf() {
  TopologyOptions opt;
  opt.length_divisor = 6;
  return load_topology(read_file(kDataDir + "/nsfnet.topo"), opt);
}

ModeSet modes(const std::string& sel) {
  return load_catalog(read_file(kDataDir + "/modes.cat")).select(sel);
}

// RFC 4180 reader: quoted fields may hold commas, quotes and newlines.
std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  for (std::size_t k = 0; k < text.size(); ++k) {
    char c = text[k];
    if (quoted) {
      if (c == '"' && k + 1 < text.size() && text[k + 1] == '"') {
        field += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
    } else if (c == '\n') {
      row.push_back(field);
      field.clear();
      rows.push_back(row);
      row.clear();
    } else {
      field += c;
    }
  }
  if (!field.empty() || !row.empty()) {
    row.push_back(field);
    rows.push_back(row);
  }
  return rows;
}

ScenarioConfig three_req_scenario() {
  ScenarioConfig cfg;
  cfg.runs = 1;
  cfg.psd = {-11, -11, 1};
  cfg.catalog_spec = "list:PM-QPSK@7,PM-QPSK@20";
  cfg.heuristic.phi = 0.9;
  cfg.heuristic.step_ghz = 0.25;
  cfg.keep_detail = true;
  return cfg;
}

}  // namespace

TEST(Rates, SymmetricSets) {
  EXPECT_EQ(rate_set(0), (std::vector<double>{250}));
  EXPECT_EQ(rate_set(1), (std::vector<double>{250, 500, 750}));
  EXPECT_EQ(parse_rate_set("avg:1000"), rate_set(3));
  EXPECT_EQ(parse_rate_set("100,400"), (std::vector<double>{100, 400}));
  EXPECT_THROW(parse_rate_set("avg:300"), Error);
  EXPECT_THROW(parse_rate_set(""), Error);
  EXPECT_THROW(parse_rate_set("1,x"), ParseError);
}

TEST(Psd, Sweep) {
  auto s = parse_psd("-36:-6:3");
  auto p = s.points();
  ASSERT_EQ(p.size(), 11u);
  EXPECT_DOUBLE_EQ(p.front(), -36);
  EXPECT_DOUBLE_EQ(p.back(), -6);
  EXPECT_EQ(parse_psd("-16").points(), (std::vector<double>{-16}));
  EXPECT_THROW(parse_psd("-6:-36:3").points(), DomainError);
  EXPECT_THROW(parse_psd("a:b"), ParseError);
}

TEST(Generator, SameSeedSameDemands) {
  auto net = nsf();
  DemandGenOptions opt;
  opt.rates = rate_set(3);
  auto a = gen_demands(5, 50, net, opt), b = gen_demands(5, 50, net, opt);
  EXPECT_EQ(emit_demands(a), emit_demands(b));
  EXPECT_NE(emit_demands(a), emit_demands(gen_demands(6, 50, net, opt)));
  for (const auto& r : a) {
    EXPECT_NE(r.src, r.dst);
    EXPECT_TRUE(net.has_node(r.src) && net.has_node(r.dst));
  }
}

TEST(Generator, ZipfMass) {
  auto net = nsf();
  DemandGenOptions opt;
  const int n = 1000000;
  auto d = gen_demands(1, n, net, opt);
  std::map<double, int> count;
  for (const auto& r : d) ++count[r.revenue];
  // 1/k over five ranks, normalised by H_5 = 137/60.
  for (int k = 1; k <= 5; ++k) {
    double p = (1.0 / k) / (137.0 / 60.0);
    EXPECT_NEAR(double(count[k]) / n, p, 0.005 * p) << "revenue " << k;
  }
  auto probs = opt.revenue.probabilities();
  EXPECT_NEAR(std::accumulate(probs.begin(), probs.end(), 0.0), 1.0, 1e-15);
}

TEST(Generator, AverageRate) {
  auto net = nsf();
  DemandGenOptions opt;
  opt.rates = parse_rate_set("avg:1000");
  auto d = gen_demands(3, 20000, net, opt);
  double s = 0;
  for (const auto& r : d) s += r.rate_gbps;
  EXPECT_NEAR(s / d.size(), 1000, 20);
}

TEST(Generator, DistinctPairs) {
  auto net = load_topology("F 100\n0 1 10\n1 2 10\n");
  DemandGenOptions opt;
  opt.distinct_pairs = true;
  auto d = gen_demands(1, 6, net, opt);
  std::set<std::pair<int, int>> seen;
  for (const auto& r : d) EXPECT_TRUE(seen.insert({r.src, r.dst}).second);
  EXPECT_THROW(gen_demands(1, 7, net, opt), DomainError);
  EXPECT_THROW(gen_demands(1, 0, net, opt), DomainError);
}

TEST(Csv, EmptyGivesHeaderOnly) {
  auto rows = read_csv(emit_csv({}));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].size(), 13u);
  EXPECT_EQ(rows[0][0], "psd_dbm_per_ghz");
}

TEST(Csv, OneRecordTwoLines) {
  ResultRecord rec;
  rec.psd_dbm_per_ghz = -16;
  rec.algorithm = "decalg";
  rec.catalog = "all";
  rec.policy = "sa-ra";
  rec.requests = 4;
  RunRecord r;
  r.seed = 1;
  r.status = "ok";
  r.revenue = 7;
  rec.runs.push_back(r);
  std::string text = emit_csv({rec});
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
}

TEST(Csv, RoundTripWithAwkwardFields) {
  ResultRecord rec;
  rec.psd_dbm_per_ghz = -13.5;
  rec.algorithm = "refa";
  rec.catalog = "list:PM-QPSK@7,PM-BPSK@7";
  rec.policy = "sa";
  rec.requests = 3;
  for (int k = 0; k < 3; ++k) {
    RunRecord r;
    r.run = k;
    r.seed = 10 + k;
    r.status = k == 1 ? "failed" : "ok";
    r.error = k == 1 ? "line 2: bad \"x\", then\nmore" : "";
    r.revenue = k == 1 ? 0 : 3 + k;
    r.accepted = 2;
    r.blocked = 1;
    rec.runs.push_back(r);
  }
  auto rows = read_csv(emit_csv({rec}));
  ASSERT_EQ(rows.size(), 1u + 3u + 2u);
  for (const auto& row : rows) EXPECT_EQ(row.size(), 13u);
  EXPECT_EQ(rows[1][2], rec.catalog);
  EXPECT_EQ(rows[2][7], "failed");
  EXPECT_EQ(rows[2][12], rec.runs[1].error);
  EXPECT_EQ(rows[4][5], "mean");
  EXPECT_DOUBLE_EQ(std::stod(rows[4][8]), 4.0);  // failed run excluded
  EXPECT_EQ(rows[5][5], "sd");
  EXPECT_NEAR(std::stod(rows[5][8]), std::sqrt(2.0), 1e-9);
}

TEST(Scenario, ThreeReqFromFiles) {
  auto cfg = three_req_scenario();
  cfg.topology_path = kDataDir + "/six_node.topo";
  cfg.demands_path = kDataDir + "/three_req.dem";
  cfg.modes_path = kDataDir + "/modes.cat";
  auto recs = run_scenario(cfg);
  ASSERT_EQ(recs.size(), 1u);
  ASSERT_EQ(recs[0].runs.size(), 1u);
  const auto& run = recs[0].runs[0];
  EXPECT_EQ(run.status, "ok");
  EXPECT_NEAR(run.revenue, 3.7, 1e-9);
  EXPECT_EQ(run.accepted, 3);
  EXPECT_EQ(run.blocked, 0);
  EXPECT_FALSE(run.detail_csv.empty());
}

TEST(Scenario, RevenueMatchesDetail) {
  auto net = nsf();
  ScenarioConfig cfg;
  cfg.gen_count = 15;
  cfg.rates = rate_set(2);
  cfg.runs = 3;
  cfg.keep_detail = true;
  cfg.catalog_spec = "amf:4:7";
  auto recs = run_scenario(cfg, net, modes("amf:4:7"));
  for (const auto& run : recs[0].runs) {
    auto demands = [&] {
      DemandGenOptions g;
      g.rates = cfg.rates;
      g.psd_dbm_per_ghz = -16;
      return gen_demands(run.seed, cfg.gen_count, net, g);
    }();
    auto rows = read_csv(run.detail_csv);
    double rev = 0;
    int acc = 0;
    for (std::size_t k = 1; k < rows.size() && rows[k][0] != "revenue"; ++k)
      if (rows[k][1] == "1") {
        rev += demands[std::stoi(rows[k][0])].revenue;
        ++acc;
      }
    EXPECT_NEAR(run.revenue, rev, 1e-9);
    EXPECT_EQ(run.accepted, acc);
    EXPECT_EQ(run.accepted + run.blocked, 15);
  }
  EXPECT_EQ(recs[0].runs[1].seed, cfg.seed + 1);
}

TEST(Scenario, MeanOverRuns) {
  auto net = nsf();
  ScenarioConfig cfg;
  cfg.gen_count = 10;
  cfg.runs = 10;
  auto recs = run_scenario(cfg, net, modes("amf:4:7"));
  const auto& rec = recs[0];
  ASSERT_EQ(rec.runs.size(), 10u);
  double lo = 1e9, hi = -1e9, s = 0;
  for (const auto& r : rec.runs) {
    lo = std::min(lo, r.revenue);
    hi = std::max(hi, r.revenue);
    s += r.revenue;
  }
  EXPECT_NEAR(rec.mean_revenue(), s / 10, 1e-9);
  EXPECT_GE(rec.mean_revenue(), lo);
  EXPECT_LE(rec.mean_revenue(), hi);
}

TEST(Scenario, FailedRunsAreRecorded) {
  auto net = nsf();
  ScenarioConfig cfg;
  cfg.gen_count = 3;
  cfg.runs = 2;
  cfg.psd = {-16, -13, 3};
  cfg.algorithm = Algorithm::MilpExport;
  cfg.lp_out = "/nonexistent-dir/out.lp";
  auto recs = run_scenario(cfg, net, modes("amf:2:7"));
  ASSERT_EQ(recs.size(), 2u);
  for (const auto& rec : recs)
    for (const auto& r : rec.runs) {
      EXPECT_EQ(r.status, "failed");
      EXPECT_NE(r.error.find("cannot write"), std::string::npos);
    }
}

TEST(Scenario, MilpExportWritesFiles) {
  auto net = nsf();
  auto dir = std::filesystem::temp_directory_path() / "fonrev_scenario_lp";
  std::filesystem::create_directories(dir);
  ScenarioConfig cfg;
  cfg.gen_count = 2;
  cfg.runs = 2;
  cfg.algorithm = Algorithm::MilpExport;
  cfg.lp_out = (dir / "m.lp").string();
  auto recs = run_scenario(cfg, net, modes("amf:2:7"));
  for (const auto& r : recs[0].runs) {
    EXPECT_EQ(r.status, "exported");
    ASSERT_TRUE(std::filesystem::exists(r.lp_path)) << r.lp_path;
    EXPECT_NE(read_file(r.lp_path).find("Subject To"), std::string::npos);
  }
  EXPECT_NE(recs[0].runs[0].lp_path, recs[0].runs[1].lp_path);
  std::filesystem::remove_all(dir);
}

TEST(Scenario, PsdSweepRisesThenFalls) {
  auto net = nsf();
  ScenarioConfig cfg;
  cfg.gen_count = 20;
  cfg.rates = rate_set(3);
  cfg.runs = 3;
  cfg.psd = parse_psd("-36:-6:3");
  cfg.heuristic.node_limit = 20000;
  auto recs = run_scenario(cfg, net, modes("amf:4:7"));
  std::vector<double> mean;
  for (const auto& r : recs) mean.push_back(r.mean_revenue());
  auto top = std::max_element(mean.begin(), mean.end()) - mean.begin();
  EXPECT_GT(top, 0);
  EXPECT_LT(top, static_cast<long>(mean.size()) - 1);
  EXPECT_LT(mean.front(), mean[top]);
  EXPECT_LT(mean.back(), mean[top]);
}

TEST(Scenario, ConfigValidation) {
  ScenarioConfig cfg;
  EXPECT_THROW(cfg.validate(), DomainError);  // neither file nor count
  cfg.gen_count = 2;
  cfg.runs = 0;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg.runs = 1;
  cfg.algorithm = Algorithm::MilpExport;
  EXPECT_THROW(cfg.validate(), DomainError);
  EXPECT_EQ(parse_algorithm("refa"), Algorithm::RefA);
  EXPECT_EQ(algorithm_name(Algorithm::MilpExport), "milp-export");
  EXPECT_THROW(parse_algorithm("cplex"), Error);
}
