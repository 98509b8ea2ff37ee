#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "radwave/spectral_calculus.hpp"

namespace radwave {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

RadialField<double> mode_field(const GridPtr<double>& g, Index k, double a = 1) {
  Vector<double> c = Vector<double>::Zero(g->size());
  c[k - 1] = a;
  return inverse(SpectralField<double>(g, c));
}

/// Random field whose spectrum vanishes above `top`.
RadialField<double> band_limited(const GridPtr<double>& g, double top,
                                 std::uint64_t seed) {
  Vector<double> c = oracle::random_vector(g->size(), seed);
  for (Index k = 0; k < g->size(); ++k)
    if (g->frequency(k) > top) c[k] = 0;
  return inverse(SpectralField<double>(g, c));
}

TEST(Multiplier, IdentitySymbol) {
  auto g = make_grid(9.0, 500);
  auto f = RadialField<double>(g, oracle::random_vector(500, 1));
  auto out = apply_multiplier(Multiplier<double>{[](double) { return 1.0; }}, f);
  EXPECT_LE((out.values() - f.values()).norm(), 1e-13 * f.values().norm());
}

TEST(Multiplier, LaplacianOnSecondMode) {
  auto g = make_grid(kPi, 63);
  auto f = RadialField<double>(g, oracle::mode(*g, 2));
  auto out = apply_multiplier(Multiplier<double>{[](double l) { return l * l; }}, f);
  EXPECT_LE((out.values() - 4.0 * f.values()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Multiplier, InverseThenForwardSymbolIsIdentity) {
  auto g = make_grid(20.0, 1023);
  auto f = RadialField<double>(g, oracle::random_vector(1023, 2));
  const Multiplier<double> inv{[](double l) { return 1.0 / l; }};
  const Multiplier<double> id{[](double l) { return l; }};
  auto out = apply_multiplier(id, apply_multiplier(inv, f));
  EXPECT_LE((out.values() - f.values()).norm(), 1e-12 * f.values().norm());
}

TEST(Multiplier, CompositionLaw) {
  auto g = make_grid(10.0, 700);
  const Multiplier<double> a{[](double l) { return std::exp(-0.1 * l); }};
  const Multiplier<double> b{[](double l) { return std::cos(l) + 2.0; }};
  const Multiplier<double> ab{
      [](double l) { return std::exp(-0.1 * l) * (std::cos(l) + 2.0); }};
  for (int trial = 0; trial < 10; ++trial) {
    auto f = RadialField<double>(g, oracle::random_vector(700, 40 + trial));
    auto lhs = apply_multiplier(a, apply_multiplier(b, f));
    auto rhs = apply_multiplier(ab, f);
    EXPECT_LE((lhs.values() - rhs.values()).norm(), 1e-13 * f.values().norm());
  }
}

TEST(Multiplier, NonFiniteSymbolIsRejected) {
  auto g = make_grid(kPi, 7);
  auto f = RadialField<double>::zero(g);
  const Multiplier<double> bad{[](double l) { return l > 3.5 ? kInf : 1.0; }};
  EXPECT_THROW(apply_multiplier(bad, f), ConfigError);
}

TEST(DyadicCutoff, BumpShape) {
  EXPECT_EQ(DyadicCutoff::phi(0.0), 1.0);
  EXPECT_EQ(DyadicCutoff::phi(1.0), 1.0);
  EXPECT_EQ(DyadicCutoff::phi(2.0), 0.0);
  EXPECT_EQ(DyadicCutoff::phi(7.0), 0.0);
  EXPECT_NEAR(DyadicCutoff::phi(1.5), 0.5, 1e-15);
  double prev = 1.0;
  for (double x = 1.0; x <= 2.0; x += 1e-3) {
    const double v = DyadicCutoff::phi(x);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    EXPECT_LE(v, prev + 1e-15);
    prev = v;
  }
  EXPECT_EQ(DyadicCutoff::psi(8.0, 8.0), 1.0);
  EXPECT_EQ(DyadicCutoff::psi(8.0, 3.99), 0.0);
  EXPECT_EQ(DyadicCutoff::psi(8.0, 16.01), 0.0);
}

TEST(DyadicBand, Limits) {
  auto g = make_grid(kPi, 63);  // spacing 1, lambda_max 63
  const DyadicBand b = dyadic_band(*g);
  EXPECT_EQ(b.lowest, 1);
  EXPECT_EQ(b.highest, 5);
  auto big = make_grid(40.0, 8192);  // 2 dl = 0.157, lambda_max = 643.4
  const DyadicBand bb = dyadic_band(*big);
  EXPECT_EQ(bb.lowest, -2);
  EXPECT_EQ(bb.highest, 9);
}

TEST(LpProject, ModeAtDyadicFrequencyIsUnchanged) {
  auto g = make_grid(kPi, 63);
  for (Index k : {2, 4, 8, 16, 32}) {
    auto f = RadialField<double>(g, oracle::mode(*g, k));
    auto out = lp_project(f, double(k));
    EXPECT_LE((out.values() - f.values()).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(LpProject, OutOfBandIsAnError) {
  auto g = make_grid(40.0, 8192);
  auto f = RadialField<double>::zero(g);
  EXPECT_THROW(lp_project(f, std::ldexp(1.0, 30)), BandError);
  EXPECT_THROW(lp_project(f, 1024.0), BandError);
  EXPECT_THROW(lp_project(f, 0.125), BandError);
  EXPECT_THROW(lp_project(f, 3.0), ConfigError);
  EXPECT_NO_THROW(lp_project(f, 512.0));
  EXPECT_NO_THROW(lp_low(f, 0.125));  // tail one octave below the band
}

TEST(LpProject, SpectralSupport) {
  auto g = make_grid(30.0, 2000);
  auto f = RadialField<double>(g, oracle::random_vector(2000, 5));
  for (double n : {1.0, 4.0, 32.0}) {
    const Vector<double> band = forward(lp_project(f, n)).coefficients();
    const Vector<double> low = forward(lp_low(f, n)).coefficients();
    const Vector<double> high = forward(lp_high(f, n)).coefficients();
    const double scale = forward(f).coefficients().cwiseAbs().maxCoeff();
    for (Index k = 0; k < 2000; ++k) {
      const double l = g->frequency(k);
      if (l < n / 2 || l > 2 * n) {
        EXPECT_LE(std::abs(band[k]), 1e-13 * scale);
      }
      if (l > 2 * n) {
        EXPECT_LE(std::abs(low[k]), 1e-13 * scale);
      }
      if (l < n) {
        EXPECT_LE(std::abs(high[k]), 1e-13 * scale);
      }
    }
  }
}

TEST(LpProject, LowPlusHighIsIdentity) {
  auto g = make_grid(25.0, 1500);
  for (int trial = 0; trial < 10; ++trial) {
    auto f = RadialField<double>(g, oracle::random_vector(1500, 60 + trial));
    for (double n : {0.25, 2.0, 64.0}) {
      auto sum = lp_low(f, n) + lp_high(f, n);
      EXPECT_LE((sum.values() - f.values()).norm(), 1e-13 * f.values().norm());
    }
  }
}

TEST(LpProject, LowProjectionSquaresItsSymbol) {
  auto g = make_grid(25.0, 1500);
  auto f = RadialField<double>(g, oracle::random_vector(1500, 7));
  for (double n : {1.0, 8.0}) {
    auto twice = lp_low(lp_low(f, n), n);
    const Multiplier<double> sq{[n](double l) {
      const double v = DyadicCutoff::phi(n, l);
      return v * v;
    }};
    auto direct = apply_multiplier(sq, f);
    EXPECT_LE((twice.values() - direct.values()).norm(), 1e-13 * f.values().norm());
  }
}

TEST(LpProject, DyadicSumPlusLowTailReconstructs) {
  auto g = make_grid(40.0, 4096);
  const DyadicBand b = dyadic_band(*g);
  const double top = std::ldexp(1.0, b.highest);
  for (int trial = 0; trial < 5; ++trial) {
    auto f = band_limited(g, top, 300 + trial);
    RadialField<double> sum = lp_low(f, std::ldexp(1.0, b.lowest - 1));
    for (double n : b.frequencies<double>()) sum += lp_project(f, n);
    EXPECT_LE((sum.values() - f.values()).norm(), 1e-8 * f.values().norm());
  }
}

TEST(DyadicCutoffProperty, PartitionTelescopes) {
  auto g = make_grid(40.0, 4096);
  const DyadicBand b = dyadic_band(*g);
  const double top = std::ldexp(1.0, b.highest);
  for (Index k = 0; k < g->size(); ++k) {
    const double l = g->frequency(k);
    if (l > top) break;
    double sum = DyadicCutoff::phi(std::ldexp(1.0, b.lowest - 1), l);
    for (double n : b.frequencies<double>()) sum += DyadicCutoff::psi(n, l);
    EXPECT_NEAR(sum, 1.0, 1e-15) << "lambda = " << l;
  }
}

TEST(SobolevNorm, OneTermSum) {
  auto g = make_grid(kPi, 31);
  auto f = mode_field(g, 2);
  EXPECT_NEAR(sobolev_norm(f, 0.5), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(sobolev_norm(f, 0.5), 1.41421, 1e-5);
}

TEST(SobolevNorm, ZeroRegularityIsPlancherel) {
  auto g = make_grid(40.0, 4095);
  for (int trial = 0; trial < 5; ++trial) {
    auto f = RadialField<double>(g, oracle::random_vector(4095, 12 + trial));
    EXPECT_NEAR(sobolev_norm(f, 0.0), lp_norm(f, 2.0), 1e-12 * lp_norm(f, 2.0));
  }
}

TEST(SobolevNorm, HomogeneousOfDegreeOne) {
  auto g = make_grid(8.0, 400);
  auto f = RadialField<double>(g, oracle::random_vector(400, 3));
  for (double c : {-3.0, 0.5, 11.0})
    EXPECT_NEAR(sobolev_norm(c * f, 0.7), std::abs(c) * sobolev_norm(f, 0.7),
                1e-13 * std::abs(c) * sobolev_norm(f, 0.7));
}

TEST(SobolevNorm, RoughSpectralLawBlowsUpAtCriticalRegularity) {
  // c_k = lambda^{-s-1/2-delta}: square-summable against lambda^{2 sigma} iff
  // sigma < s + delta. Direct sums over growing N are the oracle.
  const double s = 0.6, delta = 0.05, L = 20.0;
  const double dl = kPi / L;
  auto direct = [&](Index n, double sigma) {
    double acc = 0;
    for (Index k = 1; k <= n; ++k) {
      const double l = k * dl;
      acc += std::pow(l, 2 * sigma) * std::pow(l, -2 * (s + 0.5 + delta)) * dl;
    }
    return std::sqrt(acc);
  };
  std::vector<double> below, at;
  for (int e = 10; e <= 14; ++e) {
    const Index n = Index(1) << e;
    auto g = make_grid(L, n);
    Vector<double> c = g->frequencies().array().pow(-(s + 0.5 + delta)).matrix();
    SpectralField<double> spec(g, c);
    below.push_back(sobolev_norm(spec, s + delta - 0.2));
    at.push_back(sobolev_norm(spec, s + delta));
    EXPECT_NEAR(below.back(), direct(n, s + delta - 0.2), 1e-12 * below.back());
    EXPECT_NEAR(at.back(), direct(n, s + delta), 1e-12 * at.back());
  }
  // Below: increments shrink geometrically. At: squared norm grows like
  // log N, a constant increment per doubling.
  for (std::size_t i = 2; i < below.size(); ++i) {
    EXPECT_LT(below[i] - below[i - 1], 0.8 * (below[i - 1] - below[i - 2]));
    const double d1 = at[i] * at[i] - at[i - 1] * at[i - 1];
    const double d0 = at[i - 1] * at[i - 1] - at[i - 2] * at[i - 2];
    EXPECT_NEAR(d1 / d0, 1.0, 0.01);
  }
  EXPECT_GT(at.back(), at.front() * 1.1);
}

TEST(BesovNorm, ZeroField) {
  auto g = make_grid(kPi, 63);
  EXPECT_EQ(besov_norm(RadialField<double>::zero(g), 0.5, 2.0, 2.0), 0.0);
}

TEST(BesovNorm, SingleModeHasOneBlock) {
  auto g = make_grid(kPi, 63);
  auto f = RadialField<double>(g, oracle::mode(*g, 8));
  for (double q : {2.0, 4.0, kInf}) {
    for (double sigma : {-0.5, 0.0, 1.0}) {
      EXPECT_NEAR(besov_norm(f, sigma, q, 2.0), std::pow(8.0, sigma) * lp_norm(f, q),
                  1e-12 * std::pow(8.0, sigma) * lp_norm(f, q));
    }
  }
}

TEST(BesovNorm, RejectsBadExponents) {
  auto g = make_grid(kPi, 63);
  auto f = RadialField<double>(g, oracle::mode(*g, 8));
  EXPECT_THROW(besov_norm(f, 0.0, 0.5, 2.0), ConfigError);
  EXPECT_THROW(besov_norm(f, 0.0, 2.0, 0.5), ConfigError);
  EXPECT_THROW(besov_norm(f, 0.0, 2.0, kInf), ConfigError);
}

TEST(BesovNorm, ComparableToL2AtZeroRegularity) {
  auto g = make_grid(40.0, 4096);
  const double top = std::ldexp(1.0, dyadic_band(*g).highest);
  for (int trial = 0; trial < 5; ++trial) {
    auto f = band_limited(g, top / 2, 80 + trial);
    const double ratio = besov_norm(f, 0.0, 2.0, 2.0) / lp_norm(f, 2.0);
    // psi_N^2 summed over N lies in [1/2, 1]; the low tail is dropped.
    EXPECT_GT(ratio, 0.5);
    EXPECT_LE(ratio, 1.0 + 1e-12);
  }
}

TEST(BesovNorm, ComplexModulusReducesToRealField) {
  auto g = make_grid(20.0, 1024);
  auto f = RadialField<double>(g, oracle::random_vector(1024, 4));
  auto zero = RadialField<double>::zero(g);
  EXPECT_NEAR(besov_norm(f, zero, -0.5, 4.0, 2.0), besov_norm(f, -0.5, 4.0, 2.0),
              1e-13 * besov_norm(f, -0.5, 4.0, 2.0));
}

TEST(Energy, KineticOnly) {
  auto g = make_grid(5.0, 100);
  Vector<double> v = oracle::random_vector(100, 1);
  v *= std::sqrt(2.0 / (g->spacing() * v.squaredNorm()));
  WaveState<double> st(RadialField<double>::zero(g), RadialField<double>(g, v));
  EXPECT_NEAR(energy(st, 4.0), 1.0, 1e-14);
}

TEST(Energy, ZeroState) {
  auto g = make_grid(5.0, 100);
  WaveState<double> st(RadialField<double>::zero(g), RadialField<double>::zero(g));
  EXPECT_EQ(energy(st, 3.0), 0.0);
}

TEST(Energy, SmallSingleMode) {
  auto g = make_grid(kPi, 255);
  const double a = 1e-3, p = 4.0;
  WaveState<double> st(mode_field(g, 2, a), RadialField<double>::zero(g));
  const double e = energy(st, p);
  EXPECT_NEAR(e, 2e-6 * g->spectral_spacing(), 1e-14);
  // Quintic correction against a continuum quadrature of |u|^5/5 r^2.
  const double amp = a * std::sqrt(2 / kPi);
  const double potential = oracle::simpson(
      [&](double r) {
        const double u = amp * std::sin(2 * (r - 1)) / r;
        return std::pow(std::abs(u), p + 1) * r * r / (p + 1);
      },
      1.0, 1.0 + kPi);
  EXPECT_LT(potential, 1e-14);
  EXPECT_NEAR(e - 2e-6, potential, 1e-17);
}

TEST(Energy, GradientTermMatchesFiniteDifferenceOfG) {
  // int u_r^2 r^2 dr = int (g')^2 dt for g vanishing at both ends.
  auto g = make_grid(6.0, 6000);
  auto f = sample(
      [](double r) {
        const double x = (r - 3.0) / 1.5;
        return std::abs(x) < 1 ? std::exp(1 - 1 / (1 - x * x)) : 0.0;
      },
      g);
  WaveState<double> st(f, RadialField<double>::zero(g));
  const double h = g->spacing();
  double fd = 0, prev = 0;
  for (Index j = 0; j <= g->size(); ++j) {
    const double cur = j < g->size() ? f.values()[j] : 0.0;
    fd += (cur - prev) * (cur - prev) / h;
    prev = cur;
  }
  const double spectral = sobolev_norm(f, 1.0);
  EXPECT_NEAR(spectral * spectral, fd, 1e-5 * fd);
  EXPECT_NEAR(energy(st, 4.0), 0.5 * fd + potential_integral(f, 4.0) / 5, 1e-5 * fd);
}

}  // namespace
}  // namespace radwave
