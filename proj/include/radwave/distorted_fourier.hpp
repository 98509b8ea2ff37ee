#ifndef RADWAVE_DISTORTED_FOURIER_HPP
#define RADWAVE_DISTORTED_FOURIER_HPP

#include <cmath>
#include <numbers>

#include "radwave/radial_field.hpp"
#include "radwave/sine_transform.hpp"

namespace radwave {

/// Distorted-Fourier coefficients c_k at lambda_k = k pi / L.
template <typename Scalar>
class SpectralField {
 public:
  SpectralField() = default;

  SpectralField(GridPtr<Scalar> grid, Vector<Scalar> coefficients)
      : grid_(std::move(grid)), coefficients_(std::move(coefficients)) {
    if (!grid_) throw ConfigError("spectral field needs a grid");
    if (coefficients_.size() != grid_->size())
      throw ConfigError("spectral field size does not match its grid");
  }

  static SpectralField zero(GridPtr<Scalar> grid) {
    const Index n = grid->size();
    return SpectralField(std::move(grid), Vector<Scalar>::Zero(n));
  }

  const GridPtr<Scalar>& grid() const { return grid_; }
  Index size() const { return coefficients_.size(); }
  const Vector<Scalar>& coefficients() const { return coefficients_; }
  Vector<Scalar>& coefficients() { return coefficients_; }

 private:
  GridPtr<Scalar> grid_;
  Vector<Scalar> coefficients_;
};

namespace detail {

// sqrt(2/pi) times the quadrature weight of the sum being discretized.
template <typename Scalar>
Scalar forward_scale(const RadialGrid<Scalar>& grid) {
  return std::sqrt(Scalar(2) / std::numbers::pi_v<Scalar>) * grid.spacing();
}

template <typename Scalar>
Scalar inverse_scale(const RadialGrid<Scalar>& grid) {
  return std::sqrt(Scalar(2) / std::numbers::pi_v<Scalar>) *
         grid.spectral_spacing();
}

}  // namespace detail

/**
 * Discrete distorted Fourier transform
 *
 *   c_k = sqrt(2/pi) h sum_j sin(k j pi / (N + 1)) g_j,
 *
 * the rectangle-rule image of  sqrt(2/pi) int sin(lambda (s - 1)) u(s) s ds
 * at lambda = lambda_k. With this scaling inverse() is its exact inverse and
 * Delta-lambda |c|^2 = h |g|^2.
 */
template <typename Scalar>
SpectralField<Scalar> forward(const RadialField<Scalar>& f) {
  const auto& grid = *f.grid();
  auto plan = SineTransform<Scalar>::cached(grid.size());
  Vector<Scalar> c = plan->apply(f.values());
  c *= detail::forward_scale(grid);
  return SpectralField<Scalar>(f.grid(), std::move(c));
}

/// g_j = sqrt(2/pi) Delta-lambda sum_k sin(k j pi / (N + 1)) c_k.
template <typename Scalar>
RadialField<Scalar> inverse(const SpectralField<Scalar>& s) {
  const auto& grid = *s.grid();
  auto plan = SineTransform<Scalar>::cached(grid.size());
  Vector<Scalar> g = plan->apply(s.coefficients());
  g *= detail::inverse_scale(grid);
  return RadialField<Scalar>(s.grid(), std::move(g));
}

/// |Delta-lambda |c|^2 - h |g|^2| / (h |g|^2). Throws for the zero field.
template <typename Scalar>
Scalar plancherel_defect(const RadialField<Scalar>& f) {
  const Scalar physical = f.grid()->spacing() * f.values().squaredNorm();
  if (physical == Scalar(0))
    throw InputError("Plancherel defect is undefined for the zero field");
  const Scalar spectral = f.grid()->spectral_spacing() *
                          forward(f).coefficients().squaredNorm();
  return std::abs(spectral - physical) / physical;
}

}  // namespace radwave

#endif  // RADWAVE_DISTORTED_FOURIER_HPP
