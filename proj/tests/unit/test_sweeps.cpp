#include <gtest/gtest.h>

#include <cmath>

#include "vpflab/oracle.hpp"
#include "vpflab/sweeps.hpp"

namespace vpflab {
namespace {

SweepConfig small_config() {
  SweepConfig cfg;
  cfg.q1_range = {4, 9, 17};
  cfg.q2_range = {3, 12, 29};
  cfg.count = 2048;
  cfg.base_seed = 31;
  return cfg;
}

int sgn(double v) { return (v > 0) - (v < 0); }

TEST(SweepConfig, Validation) {
  SweepConfig cfg = SweepConfig::full_grid();
  EXPECT_EQ(cfg.q1_range.size(), 30u);
  EXPECT_EQ(cfg.q2_range.front(), 2);
  EXPECT_EQ(cfg.q2_range.back(), 31);
  EXPECT_NO_THROW(cfg.validate());

  auto broken = [&](auto mutate) {
    SweepConfig c = SweepConfig::full_grid();
    mutate(c);
    return c;
  };
  EXPECT_THROW(broken([](SweepConfig& c) { c.q1_range.clear(); }).validate(),
               std::domain_error);
  EXPECT_THROW(broken([](SweepConfig& c) { c.q2_range.push_back(1); }).validate(),
               std::domain_error);
  EXPECT_THROW(broken([](SweepConfig& c) { c.alpha_i_set = {2.5}; }).validate(),
               std::domain_error);
  EXPECT_THROW(broken([](SweepConfig& c) { c.alpha_i_set.clear(); }).validate(),
               std::domain_error);
  EXPECT_THROW(broken([](SweepConfig& c) { c.alpha_p = 0.9; }).validate(),
               std::domain_error);
  EXPECT_THROW(broken([](SweepConfig& c) { c.count = 1; }).validate(),
               std::domain_error);
}

TEST(CellSeed, DistinctPerCoordinate) {
  const auto base = cell_seed(1, Statistic::VpfDirect, 5, 9, 0);
  EXPECT_NE(base, cell_seed(2, Statistic::VpfDirect, 5, 9, 0));
  EXPECT_NE(base, cell_seed(1, Statistic::CorrI1nP2nm1, 5, 9, 0));
  EXPECT_NE(base, cell_seed(1, Statistic::VpfDirect, 9, 5, 0));
  EXPECT_NE(base, cell_seed(1, Statistic::VpfDirect, 5, 9, 1));
}

TEST(Curves, ShapeAndMetadata) {
  SweepConfig cfg = small_config();
  cfg.alpha_i_set = {1.0, 2.0};
  const auto maps = variance_curves(cfg);
  ASSERT_EQ(maps.size(), 4u);
  EXPECT_EQ(maps[0].statistic, Statistic::VarEI1);
  EXPECT_EQ(maps[1].statistic, Statistic::VarEP1);
  EXPECT_EQ(maps[2].alpha_i, 2.0);
  for (const auto& m : maps) {
    EXPECT_TRUE(m.is_curve());
    EXPECT_EQ(m.values.size(), cfg.q1_range.size());
    EXPECT_EQ(m.count, cfg.count);
    EXPECT_EQ(m.base_seed, cfg.base_seed);
  }
  EXPECT_EQ(&find_map(maps, Statistic::VarEP1, 2.0), &maps[3]);
  EXPECT_THROW(find_map(maps, Statistic::VarEP1, 1.25), std::out_of_range);
  EXPECT_THROW(maps[0].at(5), std::out_of_range);
}

TEST(CorrCurves, Bounded) {
  const auto maps = corr_vs_q1(small_config());
  ASSERT_EQ(maps.size(), 6u);
  for (const auto& m : maps) {
    for (double v : m.values) {
      EXPECT_GE(v, -1.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(CorrMap, BoundedAndThreadIndependent) {
  SweepConfig cfg = small_config();
  for (CorrPair which : {CorrPair::I1_vs_P2, CorrPair::P1_vs_P2}) {
    cfg.threads = 1;
    const auto serial = corr_map(cfg, which);
    cfg.threads = 5;
    const auto parallel = corr_map(cfg, which);
    ASSERT_EQ(serial.size(), 3u);
    for (std::size_t k = 0; k < serial.size(); ++k) {
      EXPECT_EQ(serial[k].values, parallel[k].values);
      EXPECT_EQ(serial[k].seeds, parallel[k].seeds);
      EXPECT_EQ(serial[k].values.size(), 9u);
      for (double v : serial[k].values) {
        EXPECT_GE(v, -1.0);
        EXPECT_LE(v, 1.0);
      }
    }
  }
}

TEST(CorrMap, CellReproducibleInIsolation) {
  SweepConfig cfg = small_config();
  const auto full = corr_map(cfg, CorrPair::I1_vs_P2);
  SweepConfig one = cfg;
  one.q1_range = {9};
  one.q2_range = {29};
  one.alpha_i_set = {1.0, 1.25, 2.0};
  const auto single = corr_map(one, CorrPair::I1_vs_P2);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(single[k].at(9, 29), full[k].at(9, 29));
  }
}

TEST(VpfMap, RoutesAgreeAndPairUp) {
  const auto maps = vpf_map(small_config());
  ASSERT_EQ(maps.size(), 6u);
  for (std::size_t k = 0; k < maps.size(); k += 2) {
    EXPECT_EQ(maps[k].statistic, Statistic::VpfDirect);
    EXPECT_EQ(maps[k + 1].statistic, Statistic::VpfDecomposed);
    for (std::size_t i = 0; i < maps[k].values.size(); ++i) {
      EXPECT_LE(relative_gap(maps[k].values[i], maps[k + 1].values[i]), 1e-9);
    }
  }
}

TEST(SignMap, HandEvaluatedCells) {
  const std::vector<int> q1{5}, q2{9, 11};
  const StatMap intra = sign_map(CentroidKind::Intra, 1.0, 2.0, q1, q2);
  EXPECT_EQ(intra.at(5, 9), 1);
  EXPECT_EQ(intra.at(5, 11), -1);
  const StatMap inter =
      sign_map(CentroidKind::Inter, 1.0, 2.0, {10}, {14, 15, 16});
  EXPECT_EQ(inter.at(10, 14), 1);
  EXPECT_EQ(inter.at(10, 15), 1);
  EXPECT_EQ(inter.at(10, 16), -1);
}

TEST(SignMap, MatchesLiteralEvaluationEverywhere) {
  const SweepConfig grid = SweepConfig::full_grid();
  for (double ai : {1.0, 1.25, 1.5, 2.0}) {
    for (double ap : {1.0, 2.0}) {
      const StatMap mi = sign_map(CentroidKind::Intra, ai, ap, grid.q1_range,
                                  grid.q2_range);
      const StatMap mp = sign_map(CentroidKind::Inter, ai, ap, grid.q1_range,
                                  grid.q2_range);
      for (int a : grid.q1_range) {
        for (int b : grid.q2_range) {
          const double d1 = 2.0 * a, d2 = 2.0 * b;
          const double di = d1;
          const double di2 = oracle::literal_dequantize(
              oracle::literal_quantize(di, d2, ai), d2, true);
          const double dp = d1 + d1 / 2;
          const double dp2 = oracle::literal_dequantize(
              oracle::literal_quantize(dp, d2, ap), d2, false);
          ASSERT_EQ(mi.at(a, b), sgn(di2 - di));
          ASSERT_EQ(mp.at(a, b), sgn(dp2 - dp));
          if (a == b) ASSERT_EQ(mi.at(a, b), 0);
        }
      }
    }
  }
}

TEST(SignMap, BoundaryPredicatesAboveDiagonal) {
  const SweepConfig grid = SweepConfig::full_grid();
  for (double ai : {1.0, 1.25}) {
    const StatMap m = sign_map(CentroidKind::Intra, ai, 2.0, grid.q1_range,
                               grid.q2_range);
    for (int a : grid.q1_range) {
      for (int b : grid.q2_range) {
        if (b <= a) continue;
        EXPECT_EQ(m.at(a, b) < 0, b > (2.0 / ai) * a) << a << "," << b;
      }
    }
  }
  const StatMap inter = sign_map(CentroidKind::Inter, 2.0, 2.0, grid.q1_range,
                                 grid.q2_range);
  for (int a : grid.q1_range) {
    for (int b : grid.q2_range) {
      if (b <= a) continue;
      EXPECT_EQ(inter.at(a, b) < 0, b > 1.5 * a) << a << "," << b;
    }
  }
}

TEST(SignMap, RejectsBadRanges) {
  EXPECT_THROW(sign_map(CentroidKind::Intra, 1.0, 2.0, {}, {4}),
               std::domain_error);
  EXPECT_THROW(sign_map(CentroidKind::Intra, 3.0, 2.0, {4}, {4}),
               std::domain_error);
  EXPECT_THROW(sign_map(CentroidKind::Inter, 1.0, 2.0, {4}, {40}),
               std::domain_error);
}

}  // namespace
}  // namespace vpflab
