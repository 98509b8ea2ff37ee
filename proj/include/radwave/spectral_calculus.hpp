#ifndef RADWAVE_SPECTRAL_CALCULUS_HPP
#define RADWAVE_SPECTRAL_CALCULUS_HPP

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "radwave/distorted_fourier.hpp"
#include "radwave/radial_field.hpp"

namespace radwave {

/// Symbol m(lambda) acting as m(sqrt(-Delta)) in distorted-Fourier variables.
template <typename Scalar>
struct Multiplier {
  std::function<Scalar(Scalar)> symbol;

  /// m evaluated on the grid spectrum; throws if any value is not finite.
  Vector<Scalar> tabulate(const RadialGrid<Scalar>& grid) const {
    Vector<Scalar> m(grid.size());
    for (Index k = 0; k < grid.size(); ++k) {
      m[k] = symbol(grid.frequency(k));
      if (!std::isfinite(static_cast<double>(m[k])))
        throw ConfigError("multiplier symbol is not finite at lambda = " +
                          std::to_string(static_cast<double>(grid.frequency(k))));
    }
    return m;
  }
};

template <typename Scalar>
SpectralField<Scalar> apply_symbol(const Vector<Scalar>& weights,
                                   SpectralField<Scalar> s) {
  s.coefficients().array() *= weights.array();
  return s;
}

/// F^{-1}(m * F f) for a tabulated symbol.
template <typename Scalar>
RadialField<Scalar> apply_symbol(const Vector<Scalar>& weights,
                                 const RadialField<Scalar>& f) {
  return inverse(apply_symbol(weights, forward(f)));
}

template <typename Scalar>
RadialField<Scalar> apply_multiplier(const Multiplier<Scalar>& m,
                                     const RadialField<Scalar>& f) {
  return apply_symbol(m.tabulate(*f.grid()), f);
}

/**
 * Smooth dyadic cutoffs.
 *
 * phi is 1 on [0, 1], 0 on [2, inf), and on (1, 2) the C-infinity blend
 * B(2 - x) / (B(2 - x) + B(x - 1)) with B(x) = exp(-1/x). From it,
 * phi_N(x) = phi(x / N) and psi_N = phi_N - phi_{N/2}, which lives on
 * [N/2, 2N].
 */
struct DyadicCutoff {
  template <typename Scalar>
  static Scalar phi(Scalar x) {
    if (x <= Scalar(1)) return Scalar(1);
    if (x >= Scalar(2)) return Scalar(0);
    const Scalar a = std::exp(Scalar(-1) / (Scalar(2) - x));
    const Scalar b = std::exp(Scalar(-1) / (x - Scalar(1)));
    return a / (a + b);
  }

  template <typename Scalar>
  static Scalar phi(Scalar dyadic, Scalar lambda) {
    return phi(lambda / dyadic);
  }

  template <typename Scalar>
  static Scalar psi(Scalar dyadic, Scalar lambda) {
    return phi(lambda / dyadic) - phi(Scalar(2) * lambda / dyadic);
  }

  template <typename Scalar>
  static Vector<Scalar> low(const RadialGrid<Scalar>& grid, Scalar dyadic) {
    return grid.frequencies().unaryExpr(
        [dyadic](Scalar l) { return phi(dyadic, l); });
  }

  template <typename Scalar>
  static Vector<Scalar> band(const RadialGrid<Scalar>& grid, Scalar dyadic) {
    return grid.frequencies().unaryExpr(
        [dyadic](Scalar l) { return psi(dyadic, l); });
  }
};

/// Resolvable dyadic frequencies 2^lowest .. 2^highest of a grid.
struct DyadicBand {
  int lowest;
  int highest;

  template <typename Scalar>
  std::vector<Scalar> frequencies() const {
    std::vector<Scalar> out;
    for (int j = lowest; j <= highest; ++j)
      out.push_back(std::ldexp(Scalar(1), j));
    return out;
  }
};

/**
 * Band of dyadic N with 2 Delta-lambda <= N <= lambda_max. Below it a
 * projection would see fewer than two modes; above it psi_N straddles the
 * grid cutoff and the reconstruction identity breaks.
 */
template <typename Scalar>
DyadicBand dyadic_band(const RadialGrid<Scalar>& grid) {
  const Scalar lo = Scalar(2) * grid.spectral_spacing();
  const Scalar hi = grid.max_frequency();
  int jlo = static_cast<int>(std::ceil(std::log2(static_cast<double>(lo))));
  while (std::ldexp(Scalar(1), jlo) < lo) ++jlo;
  while (std::ldexp(Scalar(1), jlo - 1) >= lo) --jlo;
  int jhi = static_cast<int>(std::floor(std::log2(static_cast<double>(hi))));
  while (std::ldexp(Scalar(1), jhi) > hi) --jhi;
  while (std::ldexp(Scalar(1), jhi + 1) <= hi) ++jhi;
  if (jlo > jhi)
    throw BandError("grid resolves no dyadic frequency band (L = " +
                    std::to_string(static_cast<double>(grid.length())) +
                    ", N = " + std::to_string(grid.size()) + ")");
  return {jlo, jhi};
}

/// Exponent j with N = 2^j; throws unless N is an exact power of two.
template <typename Scalar>
int dyadic_exponent(Scalar dyadic) {
  int e = 0;
  const Scalar mant = std::frexp(dyadic, &e);
  if (!(dyadic > Scalar(0)) || mant != Scalar(0.5))
    throw ConfigError("frequency " + std::to_string(static_cast<double>(dyadic)) +
                      " is not a power of two");
  return e - 1;
}

namespace detail {

template <typename Scalar>
void require_in_band(const RadialGrid<Scalar>& grid, Scalar dyadic,
                     int slack_below) {
  const int j = dyadic_exponent(dyadic);
  const DyadicBand band = dyadic_band(grid);
  if (j < band.lowest - slack_below || j > band.highest)
    throw BandError("dyadic frequency 2^" + std::to_string(j) +
                    " is outside the resolvable band [2^" +
                    std::to_string(band.lowest - slack_below) + ", 2^" +
                    std::to_string(band.highest) + "] (lambda_max = " +
                    std::to_string(static_cast<double>(grid.max_frequency())) +
                    ")");
}

}  // namespace detail

/// P_N f = psi_N(sqrt(-Delta)) f.
template <typename Scalar>
RadialField<Scalar> lp_project(const RadialField<Scalar>& f, Scalar dyadic) {
  detail::require_in_band(*f.grid(), dyadic, 0);
  return apply_symbol(DyadicCutoff::band(*f.grid(), dyadic), f);
}

/// P_{<=N} f = phi_N(sqrt(-Delta)) f. N may go one octave below the band,
/// which is the tail completing the dyadic decomposition.
template <typename Scalar>
RadialField<Scalar> lp_low(const RadialField<Scalar>& f, Scalar dyadic) {
  detail::require_in_band(*f.grid(), dyadic, 1);
  return apply_symbol(DyadicCutoff::low(*f.grid(), dyadic), f);
}

/// P_{>N} f = f - P_{<=N} f, computed with the complementary symbol.
template <typename Scalar>
RadialField<Scalar> lp_high(const RadialField<Scalar>& f, Scalar dyadic) {
  detail::require_in_band(*f.grid(), dyadic, 1);
  Vector<Scalar> w = DyadicCutoff::low(*f.grid(), dyadic);
  w = (Scalar(1) - w.array()).matrix();
  return apply_symbol(w, f);
}

template <typename Scalar>
Scalar sobolev_norm(const SpectralField<Scalar>& s, Scalar sigma) {
  const auto& grid = *s.grid();
  const Scalar sum = (grid.frequencies().array().pow(Scalar(2) * sigma) *
                      s.coefficients().array().square())
                         .sum();
  return std::sqrt(grid.spectral_spacing() * sum);
}

/// Homogeneous Sobolev norm (sum_k lambda_k^{2 sigma} c_k^2 Delta-lambda)^{1/2}.
template <typename Scalar>
Scalar sobolev_norm(const RadialField<Scalar>& f, Scalar sigma) {
  return sobolev_norm(forward(f), sigma);
}

namespace detail {

template <typename Scalar, typename BlockNorm>
Scalar besov_sum(const RadialGrid<Scalar>& grid, Scalar sigma, Scalar q,
                 Scalar rho, BlockNorm&& block_norm) {
  if (!(q >= Scalar(1)))
    throw ConfigError("Besov spatial exponent must be in [1, inf]");
  if (!(rho >= Scalar(1)) || std::isinf(static_cast<double>(rho)))
    throw ConfigError("Besov summation exponent must be in [1, inf)");
  Scalar sum = 0;
  for (Scalar n : dyadic_band(grid).template frequencies<Scalar>())
    sum += std::pow(n, sigma * rho) * std::pow(block_norm(n), rho);
  return std::pow(sum, Scalar(1) / rho);
}

}  // namespace detail

/// (sum_N N^{sigma rho} |P_N f|_{L^q}^rho)^{1/rho} over the resolvable band.
template <typename Scalar>
Scalar besov_norm(const RadialField<Scalar>& f, Scalar sigma, Scalar q,
                  Scalar rho) {
  const auto& grid = *f.grid();
  const SpectralField<Scalar> s = forward(f);
  return detail::besov_sum(grid, sigma, q, rho, [&](Scalar n) {
    return lp_norm(inverse(apply_symbol(DyadicCutoff::band(grid, n), s)), q);
  });
}

/// Besov norm of the complex field re + i im, with L^q taken of the modulus.
template <typename Scalar>
Scalar besov_norm(const RadialField<Scalar>& re, const RadialField<Scalar>& im,
                  Scalar sigma, Scalar q, Scalar rho) {
  const auto& grid = *re.grid();
  const SpectralField<Scalar> sr = forward(re), si = forward(im);
  return detail::besov_sum(grid, sigma, q, rho, [&](Scalar n) {
    const Vector<Scalar> w = DyadicCutoff::band(grid, n);
    const RadialField<Scalar> a = inverse(apply_symbol(w, sr));
    const RadialField<Scalar> b = inverse(apply_symbol(w, si));
    Vector<Scalar> mod =
        (a.values().array().square() + b.values().array().square()).sqrt();
    return lp_norm(RadialField<Scalar>(re.grid(), std::move(mod)), q);
  });
}

/// h sum_j |u_j|^{p+1} r_j^2, i.e. |u|_{L^{p+1}}^{p+1}.
template <typename Scalar>
Scalar potential_integral(const RadialField<Scalar>& u, Scalar p) {
  const auto& grid = *u.grid();
  return grid.spacing() *
         (u.physical().array().abs().pow(p + Scalar(1)) *
          grid.radii().array().square())
             .sum();
}

/**
 * NLW energy  1/2 |u_t|_2^2 + 1/2 |u|_{H^1}^2 + |u|_{p+1}^{p+1} / (p+1).
 * The gradient term is taken spectrally: with Dirichlet zeros at both ends
 * int u_r^2 r^2 dr equals int (d_t g)^2 dt, which is lambda^2-weighted
 * Plancherel.
 */
template <typename Scalar>
Scalar energy(const WaveState<Scalar>& st, Scalar p) {
  if (!(p >= Scalar(1))) throw ConfigError("energy needs power p >= 1");
  const Scalar kinetic = st.grid()->spacing() * st.ut.values().squaredNorm();
  const Scalar gradient = sobolev_norm(st.u, Scalar(1));
  return Scalar(0.5) * kinetic + Scalar(0.5) * gradient * gradient +
         potential_integral(st.u, p) / (p + Scalar(1));
}

}  // namespace radwave

#endif  // RADWAVE_SPECTRAL_CALCULUS_HPP
