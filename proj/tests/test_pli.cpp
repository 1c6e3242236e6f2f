#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fonrev/pli.hpp"

using namespace fonrev;

namespace {

const double kG = 7.943282347242815e-5;  // -11 dBm/GHz

Request req(int id, NodeId s, NodeId d, double psd = kG) {
  Request r;
  r.id = id;
  r.src = s;
  r.dst = d;
  r.rate_gbps = 50;
  r.revenue = 1;
  r.psd_w_per_ghz = psd;
  return r;
}

Assignment lightpath(const Network& net, int id, std::vector<NodeId> nodes, double b, double e,
                     double psd = kG) {
  Assignment a;
  a.request = req(id, nodes.front(), nodes.back(), psd);
  a.route = make_route(net, nodes);
  a.mode = TransmissionMode{"PM-QPSK", 2, 0.07, 3.0};
  a.channel = {b, e};
  a.accepted = true;
  return a;
}

// Chain 0-1-2-3 plus a spur 4-1, all 100 km links.
Network chain() { return load_topology("F 1000\n0 1 100\n1 2 100\n2 3 100\n4 1 100\n"); }

}  // namespace

TEST(Ase, FrozenValueAndLinearity) {
  ImpairmentModel m;
  EXPECT_EQ(m.ase_nsr(0, kG), 0.0);
  EXPECT_NEAR(m.ase_nsr(1, kG), 7.9674979035991589e-4, 1e-12);
  for (int s = 1; s < 8; ++s) EXPECT_NEAR(m.ase_nsr(s, kG), s * m.ase_nsr(1, kG), 1e-15);
  EXPECT_THROW(m.ase_nsr(1, 0.0), DomainError);
  EXPECT_THROW(m.ase_nsr(1, -1e-5), DomainError);
}

TEST(Sci, FrozenValueAndShape) {
  ImpairmentModel m;
  EXPECT_EQ(m.sci_nsr(0, kG, 28), 0.0);
  EXPECT_NEAR(m.sci_nsr(1, kG, 28), 0.01021549983118088, 1e-10);
  EXPECT_NEAR(m.sci_nsr(3, kG, 28), 3 * m.sci_nsr(1, kG, 28), 1e-14);
  double prev = 0;
  for (double w = 10; w < 400; w += 10) {
    double v = m.sci_nsr(1, kG, w);
    EXPECT_GT(v, prev);
    prev = v;
  }
  EXPECT_THROW(m.sci_nsr(1, kG, 0), DomainError);
}

TEST(Xci, FrozenModelValue) {
  ImpairmentModel m;
  EXPECT_NEAR(m.xci_nsr(1, kG, 62.5, 50), 0.0043167687343845298, 1e-11);
  EXPECT_EQ(m.xci_nsr(0, kG, 62.5, 50), 0.0);
}

TEST(Ad, FrozenModelValue) {
  ImpairmentModel m;
  // eps_x = 10^-2.5, overlap 10 of a 50 GHz primary, equal PSD
  EXPECT_NEAR(m.ad_nsr(1, 10, kG, 50, kG), 6.324555320336759e-4, 1e-15);
  EXPECT_NEAR(m.ad_nsr(3, 10, kG, 50, kG), 3 * 6.324555320336759e-4, 1e-15);
  EXPECT_EQ(m.ad_nsr(0, 10, kG, 50, kG), 0.0);
}

TEST(Overlap, Examples) {
  EXPECT_DOUBLE_EQ(overlap_ghz({0, 40}, {30, 50}), 10);
  EXPECT_DOUBLE_EQ(overlap_ghz({0, 40}, {0, 40}), 40);
  EXPECT_DOUBLE_EQ(overlap_ghz({0, 40}, {40, 50}), 0);
  EXPECT_DOUBLE_EQ(overlap_ghz({0, 40}, {60, 80}), 0);
  EXPECT_DOUBLE_EQ(overlap_ghz({0, 100}, {20, 30}), 10);
}

TEST(Overlap, AgreesWithGridCount) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pos(0, 200), wid(1, 80);
  const double step = 0.01;
  for (int t = 0; t < 1000; ++t) {
    Channel a, b;
    a.begin_ghz = pos(rng);
    a.end_ghz = a.begin_ghz + wid(rng);
    b.begin_ghz = pos(rng);
    b.end_ghz = b.begin_ghz + wid(rng);
    long count = 0;
    for (double x = 0.5 * step; x < 300; x += step)
      if (x >= a.begin_ghz && x < a.end_ghz && x >= b.begin_ghz && x < b.end_ghz) ++count;
    double grid = count * step;
    double ov = overlap_ghz(a, b);
    EXPECT_NEAR(ov, grid, 2 * step);
    EXPECT_DOUBLE_EQ(ov, overlap_ghz(b, a));
    EXPECT_LE(ov, std::min(a.width(), b.width()) + 1e-12);
  }
}

TEST(Routes, SharedSpansAndLinks) {
  auto net = chain();
  auto a = make_route(net, {0, 1, 2, 3});
  auto b = make_route(net, {4, 1, 2});
  auto c = make_route(net, {3, 2});
  EXPECT_EQ(shared_spans(a, b, net), 1);
  EXPECT_EQ(shared_spans(a, c, net), 0);  // opposite direction
  EXPECT_EQ(first_shared_link(a, b), *net.link_index(1, 2));
  EXPECT_EQ(first_shared_link(a, c), -1);
  EXPECT_THROW(make_route(net, {0, 2}), DomainError);
  EXPECT_THROW(make_route(net, {0, 1, 0}), DomainError);
}

TEST(Xci, DisjointRoutesGiveZero) {
  auto net = chain();
  ImpairmentModel m;
  auto p = lightpath(net, 0, {0, 1}, 0, 50);
  auto q = lightpath(net, 1, {2, 3}, 0, 50);  // same spectrum, no shared link
  EXPECT_EQ(xci_nsr(m, p, q, net), 0.0);
}

TEST(Xci, LargerGapLowersInterference) {
  auto net = chain();
  ImpairmentModel m;
  auto p = lightpath(net, 0, {0, 1, 2}, 0, 50);
  auto near = lightpath(net, 1, {0, 1}, 62.5, 112.5);   // gap 62.5
  auto far = lightpath(net, 2, {0, 1}, 100, 150);       // gap 100
  auto farther = lightpath(net, 3, {0, 1}, 200, 250);   // gap 200
  double v1 = xci_nsr(m, p, near, net), v2 = xci_nsr(m, p, far, net),
         v3 = xci_nsr(m, p, farther, net);
  EXPECT_GT(v1, v2);
  EXPECT_GT(v2, v3);
  EXPECT_NEAR(v1, m.xci_nsr(1, kG, 62.5, 50), 1e-15);
}

TEST(Xci, TouchingChannelsArePlanErrors) {
  auto net = chain();
  ImpairmentModel m;
  auto p = lightpath(net, 4, {0, 1, 2}, 0, 50);
  auto q = lightpath(net, 9, {1, 2}, 50, 100);
  try {
    xci_nsr(m, p, q, net);
    FAIL();
  } catch (const PlanError& e) {
    EXPECT_EQ(e.primary(), 4);
    EXPECT_EQ(e.interferer(), 9);
    EXPECT_EQ(e.link(), *net.link_index(1, 2));
  }
  EXPECT_THROW(evaluate(m, {p, q}, net), PlanError);
}

// Primary C1->C2->C3, interferer added elsewhere, passing C2 and dropped at C3.
// Only C2 sees the primary leave and the interferer arrive.
TEST(Ad, QualifyingNodeCases) {
  auto net = chain();
  auto primary = make_route(net, {0, 1, 2});
  auto interferer = make_route(net, {4, 1, 2});
  EXPECT_EQ(ad_qualifying_nodes(primary, interferer), 1);
  EXPECT_EQ(ad_qualifying_nodes(interferer, primary), 1);
  // Interferer dropped where the primary is added.
  EXPECT_EQ(ad_qualifying_nodes(make_route(net, {1, 2}), make_route(net, {0, 1})), 1);
  // Interferer added where the primary is dropped: nothing.
  EXPECT_EQ(ad_qualifying_nodes(make_route(net, {0, 1}), make_route(net, {1, 2})), 0);
  // Both pass the same two transit nodes.
  EXPECT_EQ(ad_qualifying_nodes(make_route(net, {0, 1, 2, 3}), make_route(net, {4, 1, 2, 3})),
            2);
}

TEST(Ad, NoOverlapNoCrosstalk) {
  auto net = chain();
  ImpairmentModel m;
  auto p = lightpath(net, 0, {0, 1, 2}, 0, 50);
  auto q = lightpath(net, 1, {4, 1, 2}, 100, 150);
  EXPECT_EQ(ad_xt_nsr(m, p, q, net), 0.0);
}

TEST(Evaluate, SingleLightpathHasOnlyLinearAndSelfTerms) {
  auto net = chain();
  ImpairmentModel m;
  auto br = evaluate(m, {lightpath(net, 0, {0, 1}, 0, 50)}, net);
  ASSERT_TRUE(br[0]);
  EXPECT_EQ(br[0]->t_xci, 0.0);
  EXPECT_EQ(br[0]->t_ad, 0.0);
  EXPECT_NEAR(br[0]->t_ase, m.ase_nsr(1, kG), 1e-18);
  EXPECT_NEAR(br[0]->t_sci, m.sci_nsr(1, kG, 50), 1e-18);
  EXPECT_FALSE(br[0]->below_validity_floor);
  auto narrow = evaluate(m, {lightpath(net, 0, {0, 1}, 0, 20)}, net);
  EXPECT_TRUE(narrow[0]->below_validity_floor);
}

TEST(Evaluate, BlockedEntriesAreSkipped) {
  auto net = chain();
  ImpairmentModel m;
  auto a = lightpath(net, 0, {0, 1}, 0, 50);
  auto b = lightpath(net, 1, {0, 1}, 10, 60);  // would collide, but blocked
  b.accepted = false;
  auto br = evaluate(m, {a, b}, net);
  EXPECT_TRUE(br[0]);
  EXPECT_FALSE(br[1]);
}

TEST(Evaluate, IdenticalLightpathsOnDisjointRoutesMatch) {
  auto net = chain();
  ImpairmentModel m;
  auto br = evaluate(m, {lightpath(net, 0, {0, 1}, 0, 50), lightpath(net, 1, {2, 3}, 0, 50)},
                     net);
  EXPECT_DOUBLE_EQ(br[0]->total(), br[1]->total());
}

TEST(Evaluate, RemovingAnInterfererNeverLowersSnr) {
  auto net = chain();
  ImpairmentModel m;
  std::vector<Assignment> all = {
      lightpath(net, 0, {0, 1, 2, 3}, 0, 40),   lightpath(net, 1, {4, 1, 2}, 60, 100),
      lightpath(net, 2, {1, 2}, 120, 170),       lightpath(net, 3, {0, 1}, 200, 260),
      lightpath(net, 4, {2, 1, 4}, 20, 35),      // overlaps 0 at node 1 only
  };
  auto full = evaluate(m, all, net);
  for (std::size_t drop = 0; drop < all.size(); ++drop) {
    auto fewer = all;
    fewer[drop].accepted = false;
    auto br = evaluate(m, fewer, net);
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (i == drop) continue;
      EXPECT_GE(br[i]->snr_db(), full[i]->snr_db() - 1e-12);
    }
  }
}

TEST(Qot, ThresholdOffset) {
  auto net = chain();
  ImpairmentModel m;
  auto a = lightpath(net, 0, {0, 1, 2}, 0, 50);
  double snr = evaluate(m, {a}, net)[0]->snr_db();
  a.mode.snr_th_db = snr;
  auto v0 = qot_ok(m, {a}, net, 0.0);
  ASSERT_EQ(v0.size(), 1u);
  EXPECT_TRUE(v0[0].ok);
  EXPECT_FALSE(qot_ok(m, {a}, net, 1.0)[0].ok);
  EXPECT_TRUE(qot_ok(m, {}, net, 0.0).empty());
}

TEST(Qot, SnrScalesWithPsdAtLowPower) {
  // ASE-limited regime: +3 dB of PSD gives about +3 dB of SNR.
  auto net = chain();
  ImpairmentModel m;
  double g = dbm_per_ghz_to_w(-40), g2 = dbm_per_ghz_to_w(-37);
  double s1 = evaluate(m, {lightpath(net, 0, {0, 1}, 0, 50, g)}, net)[0]->snr_db();
  double s2 = evaluate(m, {lightpath(net, 0, {0, 1}, 0, 50, g2)}, net)[0]->snr_db();
  EXPECT_NEAR(s2 - s1, 3.0, 0.05);
}
