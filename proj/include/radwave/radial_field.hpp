#ifndef RADWAVE_RADIAL_FIELD_HPP
#define RADWAVE_RADIAL_FIELD_HPP

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>

#include <Eigen/Core>

#include "radwave/errors.hpp"

namespace radwave {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/**
 * Uniform grid on the radial interval [1, 1 + L] outside the unit ball.
 *
 * Interior nodes sit at t_j = j h (j = 1..N) in the shifted variable
 * t = r - 1, with h = L / (N + 1). Both endpoints carry an implicit
 * Dirichlet zero: r = 1 is the obstacle, r = 1 + L the truncation wall.
 * The matching spectrum is lambda_k = k pi / L, k = 1..N.
 *
 * Indices used by the accessors are zero-based: node(0) is t_1.
 */
template <typename Scalar>
class RadialGrid {
 public:
  RadialGrid(Scalar length, Index nodes) : length_(length), size_(nodes) {
    if (!(length > Scalar(0)) || !std::isfinite(static_cast<double>(length)))
      throw ConfigError("grid length L must be positive and finite, got " +
                        std::to_string(static_cast<double>(length)));
    if (nodes < 1)
      throw ConfigError("grid node count N must be at least 1, got " +
                        std::to_string(nodes));
    spacing_ = length_ / Scalar(size_ + 1);
    spectral_spacing_ = std::numbers::pi_v<Scalar> / length_;
    radii_.resize(size_);
    frequencies_.resize(size_);
    for (Index j = 0; j < size_; ++j) {
      radii_[j] = Scalar(1) + Scalar(j + 1) * spacing_;
      frequencies_[j] = Scalar(j + 1) * spectral_spacing_;
    }
  }

  Scalar length() const { return length_; }
  Index size() const { return size_; }
  Scalar spacing() const { return spacing_; }
  Scalar spectral_spacing() const { return spectral_spacing_; }

  Scalar node(Index j) const { return radii_[j] - Scalar(1); }
  Scalar radius(Index j) const { return radii_[j]; }
  Scalar frequency(Index k) const { return frequencies_[k]; }
  Scalar max_frequency() const { return frequencies_[size_ - 1]; }

  const Vector<Scalar>& radii() const { return radii_; }
  const Vector<Scalar>& frequencies() const { return frequencies_; }

  bool operator==(const RadialGrid& other) const {
    return length_ == other.length_ && size_ == other.size_;
  }

 private:
  Scalar length_;
  Index size_;
  Scalar spacing_;
  Scalar spectral_spacing_;
  Vector<Scalar> radii_;
  Vector<Scalar> frequencies_;
};

template <typename Scalar>
using GridPtr = std::shared_ptr<const RadialGrid<Scalar>>;

template <typename Scalar = double>
GridPtr<Scalar> make_grid(Scalar length, Index nodes) {
  return std::make_shared<const RadialGrid<Scalar>>(length, nodes);
}

template <typename Scalar>
bool same_grid(const GridPtr<Scalar>& a, const GridPtr<Scalar>& b) {
  return a == b || (a && b && *a == *b);
}

/**
 * Radial function stored as g_j = r_j u(r_j) at the interior nodes.
 *
 * This is the representation in which the Dirichlet Laplacian outside the
 * ball becomes the one-dimensional second derivative, so every transform
 * and propagator works directly on g.
 */
template <typename Scalar>
class RadialField {
 public:
  RadialField() = default;

  RadialField(GridPtr<Scalar> grid, Vector<Scalar> values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw ConfigError("radial field needs a grid");
    if (values_.size() != grid_->size())
      throw ConfigError("radial field has " + std::to_string(values_.size()) +
                        " samples for a grid of " +
                        std::to_string(grid_->size()) + " nodes");
  }

  static RadialField zero(GridPtr<Scalar> grid) {
    const Index n = grid->size();
    return RadialField(std::move(grid), Vector<Scalar>::Zero(n));
  }

  /// Build from physical values u(r_j).
  static RadialField from_physical(GridPtr<Scalar> grid,
                                   const Vector<Scalar>& u) {
    Vector<Scalar> g = u.cwiseProduct(grid->radii());
    return RadialField(std::move(grid), std::move(g));
  }

  const GridPtr<Scalar>& grid() const { return grid_; }
  Index size() const { return values_.size(); }

  /// The stored samples g_j = r_j u(r_j).
  const Vector<Scalar>& values() const { return values_; }
  Vector<Scalar>& values() { return values_; }

  /// Physical values u(r_j) = g_j / r_j.
  Vector<Scalar> physical() const {
    return values_.cwiseQuotient(grid_->radii());
  }

  bool is_finite() const { return values_.allFinite(); }

  RadialField& operator+=(const RadialField& other) {
    values_ += other.values_;
    return *this;
  }
  RadialField& operator-=(const RadialField& other) {
    values_ -= other.values_;
    return *this;
  }
  RadialField& operator*=(Scalar c) {
    values_ *= c;
    return *this;
  }

 private:
  GridPtr<Scalar> grid_;
  Vector<Scalar> values_;
};

template <typename Scalar>
RadialField<Scalar> operator+(RadialField<Scalar> a,
                              const RadialField<Scalar>& b) {
  return a += b;
}
template <typename Scalar>
RadialField<Scalar> operator-(RadialField<Scalar> a,
                              const RadialField<Scalar>& b) {
  return a -= b;
}
template <typename Scalar>
RadialField<Scalar> operator*(Scalar c, RadialField<Scalar> a) {
  return a *= c;
}
template <typename Scalar>
RadialField<Scalar> operator-(RadialField<Scalar> a) {
  return a *= Scalar(-1);
}

/// (u, u_t) at time t. Both components share one grid.
template <typename Scalar>
struct WaveState {
  RadialField<Scalar> u;
  RadialField<Scalar> ut;
  Scalar t = Scalar(0);

  WaveState() = default;
  WaveState(RadialField<Scalar> u_, RadialField<Scalar> ut_, Scalar t_ = 0)
      : u(std::move(u_)), ut(std::move(ut_)), t(t_) {
    if (!same_grid(u.grid(), ut.grid()))
      throw ConfigError("wave state components live on different grids");
  }

  const GridPtr<Scalar>& grid() const { return u.grid(); }
};

/// g_j = r_j profile(r_j).
template <typename Scalar, typename Profile>
RadialField<Scalar> sample(Profile&& profile, const GridPtr<Scalar>& grid) {
  Vector<Scalar> g(grid->size());
  for (Index j = 0; j < grid->size(); ++j) {
    const Scalar r = grid->radius(j);
    const Scalar u = static_cast<Scalar>(profile(r));
    if (!std::isfinite(static_cast<double>(u)))
      throw InputError("profile is not finite at r = " +
                       std::to_string(static_cast<double>(r)));
    g[j] = r * u;
  }
  return RadialField<Scalar>(grid, std::move(g));
}

/**
 * L^p norm with measure r^2 dr on [1, 1 + L] (no angular 4 pi), by the
 * rectangle rule over interior nodes. p = infinity gives max |u(r_j)|.
 */
template <typename Scalar>
Scalar lp_norm(const RadialField<Scalar>& f, Scalar p) {
  if (!(p >= Scalar(1)))
    throw ConfigError("L^p exponent must be >= 1, got " +
                      std::to_string(static_cast<double>(p)));
  const auto& r = f.grid()->radii();
  const Vector<Scalar> u = f.physical().cwiseAbs();
  if (std::isinf(static_cast<double>(p))) return u.size() ? u.maxCoeff() : 0;
  const Scalar h = f.grid()->spacing();
  if (p == Scalar(2)) return std::sqrt(h * f.values().squaredNorm());
  // Scale by the max to keep |u|^p representable for large p.
  const Scalar peak = u.maxCoeff();
  if (peak == Scalar(0)) return Scalar(0);
  const Scalar sum =
      ((u / peak).array().pow(p) * r.array().square()).sum();
  return peak * std::pow(h * sum, Scalar(1) / p);
}

/// max_j r_j^alpha |u(r_j)|.
template <typename Scalar>
Scalar weighted_sup(const RadialField<Scalar>& f, Scalar alpha) {
  const auto& r = f.grid()->radii();
  return (r.array().pow(alpha - Scalar(1)) * f.values().array().abs())
      .maxCoeff();
}

/// Distance t = r - 1 of the outermost node where |g| exceeds
/// rel_tol * max |g|; zero for the zero field.
template <typename Scalar>
Scalar support_extent(const RadialField<Scalar>& f,
                      Scalar rel_tol = Scalar(1e-14)) {
  const Vector<Scalar> a = f.values().cwiseAbs();
  const Scalar peak = a.size() ? a.maxCoeff() : Scalar(0);
  if (peak == Scalar(0)) return Scalar(0);
  for (Index j = a.size() - 1; j >= 0; --j)
    if (a[j] > rel_tol * peak) return f.grid()->node(j);
  return Scalar(0);
}

/// L^2 norm over the outer tenth of the grid divided by the full L^2 norm.
template <typename Scalar>
Scalar boundary_tail_fraction(const RadialField<Scalar>& f) {
  const Index n = f.size();
  const Scalar total = f.values().squaredNorm();
  if (total == Scalar(0)) return Scalar(0);
  const Index tail = std::max<Index>(1, n / 10);
  return std::sqrt(f.values().tail(tail).squaredNorm() / total);
}

}  // namespace radwave

#endif  // RADWAVE_RADIAL_FIELD_HPP
