#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "radwave/radial_field.hpp"

namespace radwave {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(RadialGrid, SmallGridArithmetic) {
  auto g = make_grid(kPi, 3);
  EXPECT_NEAR(g->spacing(), kPi / 4, 1e-15);
  EXPECT_NEAR(g->spectral_spacing(), 1.0, 1e-15);
  EXPECT_NEAR(g->frequency(0), 1.0, 1e-15);
  EXPECT_NEAR(g->frequency(1), 2.0, 1e-15);
  EXPECT_NEAR(g->frequency(2), 3.0, 1e-15);
}

TEST(RadialGrid, ProductionGridArithmetic) {
  auto g = make_grid(40.0, 8192);
  EXPECT_NEAR(g->spectral_spacing(), 0.0785398, 1e-7);
  EXPECT_NEAR(g->max_frequency(), 643.4, 0.05);
  EXPECT_NEAR(g->max_frequency(), 8192 * kPi / 40, 1e-10);
}

TEST(RadialGrid, Invariants) {
  for (double L : {0.5, 3.0, 40.0}) {
    for (Index n : {1, 2, 17, 1000}) {
      auto g = make_grid(L, n);
      EXPECT_NEAR(g->spacing() * double(n + 1), L, 4 * L * 1e-16);
      EXPECT_GT(g->frequency(0), 0.0);
      EXPECT_NEAR(g->max_frequency(), n * kPi / L, 1e-12 * n);
      EXPECT_GT(g->radius(0), 1.0);
      EXPECT_LT(g->radius(n - 1), 1.0 + L);
      for (Index j = 1; j < n; ++j) EXPECT_LT(g->radius(j - 1), g->radius(j));
    }
  }
}

TEST(RadialGrid, RejectsBadConfiguration) {
  EXPECT_THROW(make_grid(0.0, 8), ConfigError);
  EXPECT_THROW(make_grid(-1.0, 8), ConfigError);
  EXPECT_THROW(make_grid(1.0, 0), ConfigError);
  EXPECT_THROW(make_grid(std::nan(""), 4), ConfigError);
}

TEST(Sample, ZeroProfile) {
  auto g = make_grid(5.0, 16);
  auto f = sample([](double) { return 0.0; }, g);
  EXPECT_EQ(f.values().norm(), 0.0);
}

TEST(Sample, InverseRadiusGivesOnes) {
  auto g = make_grid(kPi, 3);
  auto f = sample([](double r) { return 1.0 / r; }, g);
  for (Index j = 0; j < 3; ++j) EXPECT_NEAR(f.values()[j], 1.0, 1e-15);
}

TEST(Sample, FirstEigenmode) {
  auto g = make_grid(kPi, 31);
  auto f = sample([](double r) { return std::sin(r - 1.0) / r; }, g);
  for (Index j = 0; j < 31; ++j)
    EXPECT_NEAR(f.values()[j], std::sin(g->node(j)), 1e-15);
}

TEST(Sample, NonFiniteProfileIsRejected) {
  auto g = make_grid(2.0, 8);
  EXPECT_THROW(sample([](double r) { return r > 2.0 ? kInf : 0.0; }, g),
               InputError);
}

TEST(Sample, PhysicalReadbackIsIdentity) {
  auto g = make_grid(7.0, 64);
  const Vector<double> u = oracle::random_vector(64, 11);
  auto f = RadialField<double>::from_physical(g, u);
  EXPECT_LT((f.physical() - u).norm(), 1e-14 * u.norm());
  Index j = 0;
  auto again = sample([&](double) { return u[j++]; }, g);
  EXPECT_EQ(again.values(), f.values());
}

TEST(LpNorm, InverseSquareProfileConvergesToClosedForm) {
  for (Index n : {999, 9999, 99999}) {
    auto g = make_grid(9.0, n);
    auto f = sample([](double r) { return 1.0 / (r * r); }, g);
    const double norm = lp_norm(f, 2.0);
    // Rectangle rule misses the endpoint half-weights: error below h.
    EXPECT_NEAR(norm * norm, 0.9, g->spacing()) << "N = " << n;
  }
  auto fine = make_grid(9.0, 99999);
  EXPECT_NEAR(lp_norm(sample([](double r) { return 1.0 / (r * r); }, fine), 2.0),
              0.94868, 1e-4);
}

TEST(LpNorm, ZeroField) {
  auto g = make_grid(3.0, 20);
  auto f = RadialField<double>::zero(g);
  for (double p : {1.0, 2.0, 3.5, kInf}) EXPECT_EQ(lp_norm(f, p), 0.0);
}

TEST(LpNorm, SupOfInverseRadiusAtFirstNode) {
  auto g = make_grid(10.0, 1000);
  auto f = sample([](double r) { return 1.0 / r; }, g);
  EXPECT_NEAR(lp_norm(f, kInf), 1.0 / g->radius(0), 1e-15);
  EXPECT_NEAR(lp_norm(f, kInf), 1.0, 1e-2);
}

TEST(LpNorm, RejectsExponentBelowOne) {
  auto g = make_grid(3.0, 20);
  auto f = RadialField<double>::zero(g);
  EXPECT_THROW(lp_norm(f, 0.5), ConfigError);
}

TEST(LpNorm, MatchesDirectQuadrature) {
  auto g = make_grid(4.0, 200);
  const Vector<double> u = oracle::random_vector(200, 3);
  auto f = RadialField<double>::from_physical(g, u);
  for (double p : {1.0, 1.5, 2.0, 5.0}) {
    double sum = 0;
    for (Index j = 0; j < 200; ++j)
      sum += std::pow(std::abs(u[j]), p) * g->radius(j) * g->radius(j);
    EXPECT_NEAR(lp_norm(f, p), std::pow(g->spacing() * sum, 1 / p),
                1e-12 * std::pow(g->spacing() * sum, 1 / p));
  }
}

// Property checks over random fields.
TEST(LpNormProperty, Homogeneity) {
  auto g = make_grid(6.0, 300);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> scale(-50, 50), expo(1, 8);
  for (int trial = 0; trial < 50; ++trial) {
    auto f = RadialField<double>(g, oracle::random_vector(300, 100 + trial));
    const double c = scale(rng), p = expo(rng);
    EXPECT_NEAR(lp_norm(c * f, p), std::abs(c) * lp_norm(f, p),
                1e-13 * std::abs(c) * lp_norm(f, p));
    EXPECT_NEAR(lp_norm(c * f, kInf), std::abs(c) * lp_norm(f, kInf),
                1e-14 * std::abs(c) * lp_norm(f, kInf));
  }
}

TEST(LpNormProperty, HolderInterpolation) {
  auto g = make_grid(6.0, 300);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> lo(1.0, 2.0), hi(2.0, 12.0);
  for (int trial = 0; trial < 100; ++trial) {
    auto f = RadialField<double>(g, oracle::random_vector(300, 500 + trial));
    const double p = lo(rng), q = hi(rng);
    // 1/2 = theta/p + (1 - theta)/q.
    const double theta = (0.5 - 1 / q) / (1 / p - 1 / q);
    const double bound =
        std::pow(lp_norm(f, p), theta) * std::pow(lp_norm(f, q), 1 - theta);
    EXPECT_LE(lp_norm(f, 2.0), bound * (1 + 1e-12));
  }
}

TEST(WeightedSup, Examples) {
  auto g = make_grid(10.0, 500);
  auto inv = sample([](double r) { return 1.0 / r; }, g);
  EXPECT_NEAR(weighted_sup(inv, 1.0), 1.0, 1e-14);
  EXPECT_EQ(weighted_sup(RadialField<double>::zero(g), 0.7), 0.0);
  auto f = RadialField<double>(g, oracle::random_vector(500, 1));
  double expected = 0;
  for (Index j = 0; j < 500; ++j)
    expected = std::max(expected, std::pow(g->radius(j), 0.4) *
                                      std::abs(f.values()[j]) / g->radius(j));
  EXPECT_NEAR(weighted_sup(f, 0.4), expected, 1e-14 * expected);
}

TEST(SupportExtent, CompactProfile) {
  auto g = make_grid(10.0, 1000);
  auto f = sample(
      [](double r) { return std::abs(r - 3.0) < 1.0 ? 1.0 : 0.0; }, g);
  EXPECT_NEAR(support_extent(f), 3.0, g->spacing());
  EXPECT_EQ(support_extent(RadialField<double>::zero(g)), 0.0);
}

TEST(BoundaryTail, FractionOfOuterTenth) {
  auto g = make_grid(10.0, 100);
  Vector<double> v = Vector<double>::Zero(100);
  v[95] = 1.0;
  v[10] = 1.0;
  EXPECT_NEAR(boundary_tail_fraction(RadialField<double>(g, v)),
              std::sqrt(0.5), 1e-15);
}

TEST(WaveState, RejectsMixedGrids) {
  auto a = make_grid(1.0, 4), b = make_grid(2.0, 4);
  EXPECT_THROW(WaveState<double>(RadialField<double>::zero(a),
                                 RadialField<double>::zero(b)),
               ConfigError);
  auto c = make_grid(1.0, 4);
  EXPECT_NO_THROW(WaveState<double>(RadialField<double>::zero(a),
                                    RadialField<double>::zero(c)));
}

}  // namespace
}  // namespace radwave
