#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "fonrev/netmodel.hpp"

using namespace fonrev;

namespace {

const std::string kDataDir = FONREV_DATA_DIR;

ModeCatalog shipped_catalog() { return load_catalog(read_file(kDataDir + "/modes.cat")); }

}  // namespace

TEST(Units, DbmPerGhzToWatts) {
  EXPECT_NEAR(dbm_per_ghz_to_w(-11), 7.943282347242815e-5, 1e-15);
  EXPECT_NEAR(dbm_per_ghz_to_w(-16), 2.5118864315095795e-5, 1e-15);
  EXPECT_NEAR(w_to_dbm_per_ghz(dbm_per_ghz_to_w(-7.5)), -7.5, 1e-12);
}

TEST(Physics, SpanGainIsTwentyDbPerHundredKm) {
  PhysicsConstants pc;
  EXPECT_NEAR(pc.span_gain(), 100.0, 1e-9);
}

TEST(Physics, InternalConstants) {
  // Frozen from an mpmath evaluation of the SI expressions.
  PhysicsConstants pc;
  EXPECT_NEAR(pc.mu(), 807463.0777, 1e-3);
  EXPECT_NEAR(pc.rho(), 0.0046506515, 1e-10);
  EXPECT_NEAR(pc.rho() * 28 * 28, 3.6461107618941586, 1e-8);
}

TEST(Physics, RejectsNonPositiveSpan) {
  PhysicsConstants pc;
  pc.span_km = 0;
  EXPECT_THROW(pc.validate(), DomainError);
}

TEST(Topology, TwoNodeLinkIsBidirectional) {
  auto net = load_topology("F 1000\n0 1 80\n");
  ASSERT_EQ(net.link_count(), 2);
  auto a = net.link_index(0, 1), b = net.link_index(1, 0);
  ASSERT_TRUE(a && b);
  EXPECT_EQ(net.links()[*a].spans, 1);
  EXPECT_EQ(net.links()[*b].spans, 1);
  EXPECT_EQ(net.degree(0), 1);
}

TEST(Topology, SpanCountRoundsUp) {
  auto net = load_topology("F 1000\n0 1 250\n1 2 100\n2 3 100.5\n");
  EXPECT_EQ(net.links()[*net.link_index(0, 1)].spans, 3);
  EXPECT_EQ(net.links()[*net.link_index(1, 2)].spans, 1);
  EXPECT_EQ(net.links()[*net.link_index(2, 3)].spans, 2);
}

TEST(Topology, ShippedNsfnetHas44DirectedLinks) {
  TopologyOptions opt;
  opt.length_divisor = 6;
  auto net = load_topology(read_file(kDataDir + "/nsfnet.topo"), opt);
  EXPECT_EQ(net.node_count(), 14);
  EXPECT_EQ(net.link_count(), 44);
  EXPECT_DOUBLE_EQ(net.spectrum_ghz(), 1000);
  for (const auto& l : net.links()) {
    auto rev = net.link_index(l.to, l.from);
    ASSERT_TRUE(rev);
    EXPECT_EQ(net.links()[*rev].spans, l.spans);
    EXPECT_GE(l.spans, 1);
  }
}

TEST(Topology, LengthDivisorScalesSpans) {
  TopologyOptions opt;
  opt.length_divisor = 6;
  auto net = load_topology("F 1000\n0 1 2100\n", opt);
  EXPECT_NEAR(net.links()[0].length_km, 350, 1e-9);
  EXPECT_EQ(net.links()[0].spans, 4);
}

TEST(Topology, EmitLoadRoundTrip) {
  auto net = load_topology(read_file(kDataDir + "/nsfnet.topo"));
  auto again = load_topology(emit_topology(net));
  EXPECT_TRUE(net == again);
  EXPECT_EQ(emit_topology(again), emit_topology(net));
}

TEST(Topology, ParseErrorsCarryLineNumbers) {
  struct Case {
    std::string text;
    int line;
  };
  std::vector<Case> cases = {
      {"F 100\n0 1 100\n1 0 50\n", 3},      // duplicate
      {"F 100\nN 3\n0 1 10\n1 7 10\n", 4},  // unknown node
      {"F 100\n0 1 -5\n", 2},               // non-positive length
      {"F 100\n0 1\n", 2},                  // missing field
      {"0 1 100\n", 1},                     // no header
      {"F 100\n0 0 10\n", 2},               // self loop
  };
  for (const auto& c : cases) {
    try {
      load_topology(c.text);
      ADD_FAILURE() << "accepted: " << c.text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), c.line) << e.what();
    }
  }
  EXPECT_THROW(load_topology(""), ParseError);
}

TEST(Demands, ParsesSpecExample) {
  auto d = load_demands("0 3 50 1.2 -11\n");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].src, 0);
  EXPECT_EQ(d[0].dst, 3);
  EXPECT_DOUBLE_EQ(d[0].rate_gbps, 50);
  EXPECT_DOUBLE_EQ(d[0].revenue, 1.2);
  EXPECT_NEAR(d[0].psd_w_per_ghz, 7.94e-5, 0.005e-5);
}

TEST(Demands, LowerPsd) {
  auto d = load_demands("# comment\n\n1 2 100 3 -16\n");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_NEAR(d[0].psd_w_per_ghz, 2.51e-5, 0.005e-5);
}

TEST(Demands, EmptyFileGivesEmptyList) {
  EXPECT_TRUE(load_demands("").empty());
  EXPECT_TRUE(load_demands("# only a comment\n").empty());
}

TEST(Demands, IdsFollowFileOrder) {
  auto d = load_demands("0 1 50 1 -11\n1 2 50 1 -11\n2 0 50 1 -11\n");
  for (int i = 0; i < 3; ++i) EXPECT_EQ(d[i].id, i);
}

TEST(Demands, Rejections) {
  EXPECT_THROW(load_demands("0 0 50 1 -11\n"), ParseError);
  EXPECT_THROW(load_demands("0 1 -50 1 -11\n"), ParseError);
  EXPECT_THROW(load_demands("0 1 50 0 -11\n"), ParseError);
  EXPECT_THROW(load_demands("0 1 50 1\n"), ParseError);
  auto net = load_topology("F 100\n0 1 10\n");
  try {
    load_demands("0 1 50 1 -11\n0 5 50 1 -11\n", &net);
    ADD_FAILURE();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(Demands, EmitLoadRoundTrip) {
  auto d = load_demands("0 3 50 1.2 -11\n4 2 1250 5 -16.5\n");
  auto again = load_demands(emit_demands(d));
  ASSERT_EQ(again.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(again[i].src, d[i].src);
    EXPECT_EQ(again[i].dst, d[i].dst);
    EXPECT_DOUBLE_EQ(again[i].rate_gbps, d[i].rate_gbps);
    EXPECT_DOUBLE_EQ(again[i].revenue, d[i].revenue);
    EXPECT_NEAR(again[i].psd_w_per_ghz / d[i].psd_w_per_ghz, 1.0, 1e-9);
  }
}

TEST(Modes, SpectralEfficiency) {
  TransmissionMode qam16{"PM-16QAM", 4, 0.10, 15.7};
  EXPECT_NEAR(mode_se(qam16), 3.636, 0.0005);
  TransmissionMode bpsk0{"PM-BPSK", 1, 0.0, 0};
  EXPECT_DOUBLE_EQ(mode_se(bpsk0), 1.0);
  TransmissionMode bpsk7{"PM-BPSK", 1, 0.07, 0};
  EXPECT_NEAR(mode_se(bpsk7), 0.9346, 0.00005);
  EXPECT_EQ(qam16.label(), "PM-16QAM@10");
}

TEST(Modes, CatalogSeMonotone) {
  auto cat = shipped_catalog();
  auto mfs = cat.mf_names();
  auto ohs = cat.fec_ohs();
  ASSERT_EQ(mfs.size(), 4u);
  ASSERT_EQ(ohs.size(), 6u);
  for (double oh : ohs)
    for (std::size_t k = 1; k < mfs.size(); ++k)
      EXPECT_GT(cat.at(mfs[k], oh).se(), cat.at(mfs[k - 1], oh).se());
  for (const auto& mf : mfs)
    for (std::size_t k = 1; k < ohs.size(); ++k)
      EXPECT_LT(cat.at(mf, ohs[k]).se(), cat.at(mf, ohs[k - 1]).se());
}

TEST(Modes, CatalogThresholdsMonotone) {
  auto cat = shipped_catalog();
  auto mfs = cat.mf_names();
  auto ohs = cat.fec_ohs();
  for (double oh : ohs)
    for (std::size_t k = 1; k < mfs.size(); ++k)
      EXPECT_GT(cat.at(mfs[k], oh).snr_th_db, cat.at(mfs[k - 1], oh).snr_th_db);
  for (const auto& mf : mfs)
    for (std::size_t k = 1; k < ohs.size(); ++k)
      EXPECT_LT(cat.at(mf, ohs[k]).snr_th_db, cat.at(mf, ohs[k - 1]).snr_th_db);
}

TEST(Modes, CatalogAnchors) {
  auto cat = shipped_catalog();
  EXPECT_NEAR(cat.at("PM-16QAM", 0.10).snr_th_db, 15.70, 0.005);
  EXPECT_NEAR(cat.at("PM-QPSK", 0.20).snr_th_db, 4.58, 0.005);
}

TEST(Modes, Selectors) {
  auto cat = shipped_catalog();
  auto amf = cat.select("amf:2:7");
  ASSERT_EQ(amf.size(), 2u);
  EXPECT_EQ(amf[0].label(), "PM-BPSK@7");
  EXPECT_EQ(amf[1].label(), "PM-QPSK@7");
  auto mfec = cat.select("mfec:2:20");
  ASSERT_EQ(mfec.size(), 3u);
  EXPECT_EQ(mfec[0].label(), "PM-QPSK@20");
  EXPECT_EQ(mfec[2].label(), "PM-QPSK@50");
  auto list = cat.select("list:PM-QPSK@20,PM-BPSK@1");
  ASSERT_EQ(list.size(), 2u);
  EXPECT_EQ(list[1].label(), "PM-BPSK@1");
  EXPECT_EQ(cat.select("all").size(), 24u);
  EXPECT_THROW(cat.select("amf:x"), ParseError);
  EXPECT_THROW(cat.select("list:PM-64QAM@7"), Error);
  EXPECT_THROW(cat.select("bogus"), ParseError);
}

TEST(Modes, CatalogRejectsDuplicates) {
  EXPECT_THROW(load_catalog("A 1 7 3\nA 1 7 4\n"), ParseError);
  EXPECT_THROW(load_catalog("# nothing\n"), ParseError);
}
