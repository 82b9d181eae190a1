// Randomized checks of the structural properties of the ranking function and
// the quantile sets.

#include <random>

#include <gtest/gtest.h>

#include "conerank/quantiles.hpp"
#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace conerank;
using namespace conerank::testing;

namespace {

constexpr int kCases = 120;

std::vector<Verdict> labels(const std::vector<QuantileVerdict>& vs) {
  std::vector<Verdict> out;
  for (const auto& v : vs) out.push_back(v.label);
  return out;
}

}  // namespace

TEST(AffineEquivariance, RanksOnExampleThree) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> shift(-10.0, 10.0), pt(0.0, 6.0);
  const auto x = example3();
  const auto k = table1_cone();
  for (int trial = 0; trial < kCases; ++trial) {
    const Matrix a = random_invertible(rng);
    const Vector b = vec({shift(rng), shift(rng)});
    const auto y = transform(x, a, b);
    const auto k2 = transform_importance(k, a);
    for (std::size_t i = 0; i < 5; ++i) {
      const Vector z = x.column(i);
      EXPECT_EQ(cone_distribution(y, k2, a * z + b).rank, cone_distribution(x, k, z).rank) << trial;
      EXPECT_EQ(strict_exceedance_sup(y, k2, a * z + b).rank, strict_exceedance_sup(x, k, z).rank) << trial;
    }
    const Vector z = vec({pt(rng), pt(rng)});
    EXPECT_EQ(cone_distribution(y, k2, a * z + b).rank, cone_distribution(x, k, z).rank) << trial;
  }
}

TEST(AffineEquivariance, RanksOnRandomData) {
  std::mt19937_64 rng(102);
  std::uniform_real_distribution<double> shift(-5.0, 5.0);
  for (int trial = 0; trial < kCases; ++trial) {
    const auto x = random_integer_matrix(rng, 2, 7, 0, 9);
    const auto k = random_cone(rng, 2);
    const Matrix a = random_invertible(rng);
    const Vector b = vec({shift(rng), shift(rng)});
    const auto y = transform(x, a, b);
    const auto k2 = transform_importance(k, a);
    for (std::size_t i = 0; i < x.alternatives(); ++i)
      EXPECT_EQ(cone_distribution(y, k2, a * x.column(i) + b).rank, cone_distribution(x, k, x.column(i)).rank);
  }
}

TEST(AffineEquivariance, ClassifyLabelsAreInvariant) {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> shift(-5.0, 5.0);
  std::uniform_int_distribution<int> order(1, 19);
  for (int trial = 0; trial < kCases; ++trial) {
    const bool fixed_data = trial % 2 == 0;
    const auto x = fixed_data ? example3() : random_integer_matrix(rng, 2, 6, 0, 9);
    const auto k = fixed_data ? table1_cone() : random_cone(rng, 2);
    const Matrix a = random_invertible(rng);
    const Vector b = vec({shift(rng), shift(rng)});
    const double p = order(rng) / 20.0;
    EXPECT_EQ(labels(classify(transform(x, a, b), transform_importance(k, a), p)), labels(classify(x, k, p)))
        << "trial " << trial << " p " << p;
  }
}

TEST(AffineEquivariance, RegionsMapOntoEachOther) {
  std::mt19937_64 rng(104);
  std::uniform_real_distribution<double> shift(-5.0, 5.0);
  std::uniform_int_distribution<int> order(1, 9);
  const auto x = example3();
  const auto k = table1_cone();
  const Box box{0, 0, 6, 6};
  for (int trial = 0; trial < kCases; ++trial) {
    const Matrix a = random_invertible(rng);
    const Vector b = vec({shift(rng), shift(rng)});
    const double p = order(rng) / 10.0;
    const auto r = quantile_region_2d(x, k, p, box);
    // Image box covering A * box + b.
    Box img{1e300, 1e300, -1e300, -1e300};
    for (const auto& c : box_polygon(box)) {
      const Vector q = a * vec({c.x(), c.y()}) + b;
      img = {std::min(img.x0, q(0)), std::min(img.y0, q(1)), std::max(img.x1, q(0)), std::max(img.y1, q(1))};
    }
    const auto rt = quantile_region_2d(transform(x, a, b), transform_importance(k, a), p, img);
    // Every vertex of the original lower polygon maps into the transformed one.
    for (const auto& v : r.lower_polygon) {
      const Vector q = a * vec({v.x(), v.y()}) + b;
      EXPECT_TRUE(polygon_contains(rt.lower_polygon, Point2(q(0), q(1)), 1e-6)) << trial;
    }
    for (int i = 0; i < 15; ++i)
      for (int j = 0; j < 15; ++j) {
        const Point2 q(0.2 + 0.4 * i, 0.2 + 0.4 * j);
        const Vector t = a * vec({q.x(), q.y()}) + b;
        const Point2 qt(t(0), t(1));
        auto margin = [](const std::vector<Halfplane>& hs, const Point2& pnt) {
          double best = 1e300;
          for (const auto& h : hs) best = std::min(best, std::abs(h.normal.dot(pnt) - h.offset) / h.normal.norm());
          return best;
        };
        if (margin(r.lower_halfplanes, q) > 1e-6 && margin(rt.lower_halfplanes, qt) > 1e-6) {
          EXPECT_EQ(polygon_contains(r.lower_polygon, q), polygon_contains(rt.lower_polygon, qt)) << trial;
        }
        if (margin(r.upper_halfplanes, q) > 1e-6 && margin(rt.upper_halfplanes, qt) > 1e-6) {
          EXPECT_EQ(polygon_contains(r.upper_polygon, q), polygon_contains(rt.upper_polygon, qt)) << trial;
        }
      }
  }
}

TEST(Monotonicity, NonDecreasingAlongAcceptanceOrder) {
  std::mt19937_64 rng(201);
  std::uniform_real_distribution<double> pt(-1.0, 10.0);
  for (int trial = 0; trial < kCases; ++trial) {
    const Eigen::Index d = trial % 4 == 3 ? 3 : 2;
    const auto x = random_integer_matrix(rng, d, d == 2 ? 8 : 5, 0, 9);
    const auto k = random_cone(rng, d);
    const auto k_a = dual_cone(k);
    Vector y(d);
    for (Eigen::Index i = 0; i < d; ++i) y(i) = pt(rng);
    const Vector z = y + random_member(rng, k_a);
    ASSERT_TRUE(leq_cone(y, z, k_a));
    EXPECT_LE(cone_distribution(x, k, y).rank, cone_distribution(x, k, z).rank) << trial;
  }
}

TEST(Monotonicity, AntitoneUnderColumnwiseShift) {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < kCases; ++trial) {
    const Eigen::Index d = trial % 4 == 3 ? 3 : 2;
    const auto x = random_integer_matrix(rng, d, d == 2 ? 7 : 5, 0, 9);
    const auto k = random_cone(rng, d);
    const auto k_a = dual_cone(k);
    Matrix shifted = x.data();
    for (Eigen::Index j = 0; j < shifted.cols(); ++j) shifted.col(j) += random_member(rng, k_a);
    const EvaluationMatrix y(shifted);
    for (std::size_t i = 0; i < x.alternatives(); ++i) {
      const Vector z = x.column(i);
      EXPECT_GE(cone_distribution(x, k, z).rank, cone_distribution(y, k, z).rank) << trial;
    }
  }
}

TEST(Monotonicity, ShiftedDataHasSmallerLowerQuantile) {
  std::mt19937_64 rng(203);
  std::uniform_int_distribution<int> order(1, 9);
  for (int trial = 0; trial < kCases; ++trial) {
    const auto x = random_integer_matrix(rng, 2, 6, 0, 9);
    const auto k = random_cone(rng, 2);
    const auto k_a = dual_cone(k);
    const Vector c = random_member(rng, k_a);
    Matrix shifted = x.data();
    shifted.colwise() += c;
    const EvaluationMatrix y(shifted);
    const double p = order(rng) / 10.0;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        const Vector z = vec({-1.0 + 2.1 * i, -1.0 + 2.1 * j});
        if (lower_quantile_membership(y, k, p, z)) {
          EXPECT_TRUE(lower_quantile_membership(x, k, p, z)) << trial;
        }
      }
  }
}

TEST(ConeNesting, WiderImportanceConeLowersRanks) {
  std::mt19937_64 rng(301);
  std::uniform_int_distribution<int> u(0, 5), order(1, 9);
  for (int trial = 0; trial < kCases; ++trial) {
    const Eigen::Index d = trial % 4 == 3 ? 3 : 2;
    const auto x = random_integer_matrix(rng, d, d == 2 ? 7 : 5, 0, 9);
    std::vector<Vector> small, large;
    for (int j = 0; j < 2; ++j) {
      Vector v(d);
      for (Eigen::Index i = 0; i < d; ++i) v(i) = u(rng);
      if (v.norm() == 0) v(0) = 1;
      small.push_back(v);
    }
    large = small;
    Vector extra(d);
    for (Eigen::Index i = 0; i < d; ++i) extra(i) = u(rng);
    if (extra.norm() == 0) extra(d - 1) = 1;
    large.push_back(extra);
    const auto k_wide = conic_hull(large), k_narrow = conic_hull(small);
    const double p = order(rng) / 10.0;
    for (std::size_t i = 0; i < x.alternatives(); ++i) {
      const Vector z = x.column(i);
      EXPECT_LE(cone_distribution(x, k_wide, z).rank, cone_distribution(x, k_narrow, z).rank) << trial;
      if (lower_quantile_membership(x, k_wide, p, z)) {
        EXPECT_TRUE(lower_quantile_membership(x, k_narrow, p, z));
      }
    }
  }
}

TEST(ConeNesting, TableOneBelowSingleJudgeRow) {
  const auto x = example3();
  const auto ray = conic_hull({v1()});
  for (std::size_t i = 0; i < 5; ++i)
    EXPECT_LE(cone_distribution(x, table1_cone(), x.column(i)).rank, cone_distribution(x, ray, x.column(i)).rank);
}

TEST(Quantiles, LowerMembershipAntitoneInP) {
  std::mt19937_64 rng(401);
  std::uniform_real_distribution<double> pr(0.01, 0.99), pt(-1.0, 10.0);
  for (int trial = 0; trial < kCases; ++trial) {
    const Eigen::Index d = trial % 4 == 3 ? 3 : 2;
    const auto x = random_integer_matrix(rng, d, 6, 0, 9);
    const auto k = random_cone(rng, d);
    double p1 = pr(rng), p2 = pr(rng);
    if (p1 < p2) std::swap(p1, p2);
    for (int s = 0; s < 4; ++s) {
      Vector z(d);
      for (Eigen::Index i = 0; i < d; ++i) z(i) = pt(rng);
      if (lower_quantile_membership(x, k, p1, z)) {
        EXPECT_TRUE(lower_quantile_membership(x, k, p2, z)) << trial;
      }
    }
    // Recommended sets shrink as p grows.
    const auto hi = classify(x, k, p1), lo = classify(x, k, p2);
    for (std::size_t i = 0; i < hi.size(); ++i)
      if (hi[i].in_lower) {
        EXPECT_TRUE(lo[i].in_lower);
      }
  }
}

TEST(Ranks, RangeSelfCountAndSaturation) {
  std::mt19937_64 rng(501);
  for (int trial = 0; trial < kCases; ++trial) {
    const auto x = random_integer_matrix(rng, 2, 6, 0, 9);
    const auto k = random_cone(rng, 2);
    const auto k_a = dual_cone(k);
    for (std::size_t i = 0; i < x.alternatives(); ++i) {
      const auto r = cone_distribution(x, k, x.column(i));
      EXPECT_EQ(r.rank.of, x.alternatives());
      EXPECT_GE(r.rank.count, 1u);
      for (const auto& g : k.generators()) EXPECT_LE(r.rank, scalarized_cdf(x, g, x.column(i)));
    }
    // A point above every sample in the acceptance order has rank one.
    Vector top = x.column(0);
    for (std::size_t i = 1; i < x.alternatives(); ++i) top = top.cwiseMax(x.column(i));
    top += random_member(rng, k_a) + vec({20, 20});
    bool dominates = true;
    for (std::size_t i = 0; i < x.alternatives(); ++i) dominates = dominates && leq_cone(x.column(i), top, k_a);
    if (dominates) {
      EXPECT_EQ(cone_distribution(x, k, top).rank, (Rank{x.alternatives(), x.alternatives()}));
    }
  }
}

TEST(Duality, BipolarOnRandomPanels) {
  std::mt19937_64 rng(601);
  for (int trial = 0; trial < kCases; ++trial) {
    const auto k = random_cone(rng, 2 + trial % 3);
    EXPECT_EQ(dual_cone(dual_cone(k)), k) << k;
    EXPECT_TRUE(same_set(dual_cone(dual_cone(k)), k));
  }
}
