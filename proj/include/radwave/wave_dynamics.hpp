#ifndef RADWAVE_WAVE_DYNAMICS_HPP
#define RADWAVE_WAVE_DYNAMICS_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "radwave/distorted_fourier.hpp"
#include "radwave/parameters.hpp"
#include "radwave/radial_field.hpp"
#include "radwave/spectral_calculus.hpp"

namespace radwave {

template <typename Scalar>
struct StepperConfig {
  Scalar dt = Scalar(2e-3);
  bool nan_guard = true;
  /// Largest allowed L^2 fraction of u in the outer tenth of the grid.
  Scalar boundary_tolerance = Scalar(1e-6);
  /// Extra distance kept between the light cone of the data and the wall.
  Scalar guard_margin = Scalar(1);
  /// Data count as supported where |r u| exceeds this fraction of its peak.
  Scalar support_tolerance = Scalar(1e-14);

  void validate() const {
    if (!(dt > Scalar(0)) || !std::isfinite(static_cast<double>(dt)))
      throw ConfigError("time step dt must be positive and finite");
    if (!(boundary_tolerance > Scalar(0)))
      throw ConfigError("boundary_tolerance must be positive");
    if (!(guard_margin >= Scalar(0)))
      throw ConfigError("guard_margin must be non-negative");
    if (!(support_tolerance > Scalar(0) && support_tolerance < Scalar(1)))
      throw ConfigError("support_tolerance must lie in (0, 1)");
  }
};

/// sin(x)/x, with its Taylor series where direct evaluation loses digits.
template <typename Scalar>
Scalar sinc(Scalar x) {
  const Scalar x2 = x * x;
  if (std::abs(x) < Scalar(1e-3))
    return Scalar(1) - x2 / Scalar(6) * (Scalar(1) - x2 / Scalar(20));
  return std::sin(x) / x;
}

/**
 * Exact solution operator of u_tt - Delta u = 0 over a fixed time t,
 * tabulated on the grid spectrum:
 *
 *   c(t)   = cos(t l) c(0) + t sinc(t l) c_t(0)
 *   c_t(t) = -l sin(t l) c(0) + cos(t l) c_t(0).
 */
template <typename Scalar>
class LinearPropagator {
 public:
  LinearPropagator(const RadialGrid<Scalar>& grid, Scalar t) : t_(t) {
    const auto& l = grid.frequencies();
    cos_ = (t * l.array()).cos().matrix();
    sin_over_l_ = l.unaryExpr([t](Scalar x) { return t * sinc(t * x); });
    l_sin_ = (l.array() * (t * l.array()).sin()).matrix();
  }

  Scalar time() const { return t_; }

  void apply(SpectralField<Scalar>& c, SpectralField<Scalar>& ct) const {
    auto& a = c.coefficients();
    auto& b = ct.coefficients();
    const Vector<Scalar> a0 = a;
    a = cos_.cwiseProduct(a0) + sin_over_l_.cwiseProduct(b);
    b = cos_.cwiseProduct(b) - l_sin_.cwiseProduct(a0);
  }

 private:
  Scalar t_;
  Vector<Scalar> cos_, sin_over_l_, l_sin_;
};

/// (u(t), u_t(t)) for the free wave equation from data (u0, u1) at time 0.
template <typename Scalar>
WaveState<Scalar> linear_flow(const RadialField<Scalar>& u0,
                              const RadialField<Scalar>& u1, Scalar t) {
  if (!same_grid(u0.grid(), u1.grid()))
    throw ConfigError("linear_flow data live on different grids");
  SpectralField<Scalar> c = forward(u0), ct = forward(u1);
  LinearPropagator<Scalar>(*u0.grid(), t).apply(c, ct);
  return WaveState<Scalar>(inverse(c), inverse(ct), t);
}

template <typename Scalar>
WaveState<Scalar> linear_flow(const WaveState<Scalar>& st, Scalar t) {
  WaveState<Scalar> out = linear_flow(st.u, st.ut, t);
  out.t = st.t + t;
  return out;
}

/// U(t) f = exp(i t sqrt(-Delta)) f split into real and imaginary fields.
template <typename Scalar>
struct HalfWave {
  RadialField<Scalar> re;
  RadialField<Scalar> im;
};

template <typename Scalar>
HalfWave<Scalar> half_wave(const RadialField<Scalar>& f, Scalar t) {
  const auto& grid = *f.grid();
  const SpectralField<Scalar> c = forward(f);
  const Vector<Scalar> cs = (t * grid.frequencies().array()).cos().matrix();
  const Vector<Scalar> sn = (t * grid.frequencies().array()).sin().matrix();
  return {inverse(apply_symbol(cs, c)), inverse(apply_symbol(sn, c))};
}

/// -|u|^{p-1} u, returned in g-coordinates: -|g|^{p-1} g / r^{p-1}.
template <typename Scalar>
RadialField<Scalar> nonlinearity(const RadialField<Scalar>& u, Scalar p) {
  if (!(p >= Scalar(1))) throw ConfigError("nonlinearity needs p >= 1");
  const auto& r = u.grid()->radii();
  const auto g = u.values().array();
  Vector<Scalar> out =
      (-(g.abs() / r.array()).pow(p - Scalar(1)) * g).matrix();
  if (u.is_finite() && !out.allFinite())
    throw NumericalError("nonlinearity overflowed");
  return RadialField<Scalar>(u.grid(), std::move(out));
}

/**
 * F(v, w) = |v + w|^{p-1}(v + w) - |w|^{p-1} w in g-coordinates. The
 * low-frequency part obeys v_tt - Delta v = -F(v, w).
 */
template <typename Scalar>
RadialField<Scalar> difference_force(const RadialField<Scalar>& v,
                                     const RadialField<Scalar>& w, Scalar p) {
  if (!same_grid(v.grid(), w.grid()))
    throw ConfigError("difference_force arguments live on different grids");
  if (!(p >= Scalar(1))) throw ConfigError("difference_force needs p >= 1");
  const auto& r = v.grid()->radii();
  const auto pw = [p](const auto& x) {
    return x.abs().pow(p - Scalar(1)) * x;
  };
  const auto sum = ((v.values() + w.values()).array() / r.array()).eval();
  const auto wu = (w.values().array() / r.array()).eval();
  Vector<Scalar> out = ((pw(sum) - pw(wu)) * r.array()).matrix();
  if (v.is_finite() && w.is_finite() && !out.allFinite())
    throw NumericalError("difference force overflowed");
  return RadialField<Scalar>(v.grid(), std::move(out));
}

namespace detail {

// The tail is measured against the state's own L^2 norm, or against
// reference when that is positive (a field that is itself rounding noise
// would otherwise always look contaminated).
template <typename Scalar>
void check_state(const WaveState<Scalar>& st, const StepperConfig<Scalar>& cfg,
                 Scalar reference = Scalar(0)) {
  const double t = static_cast<double>(st.t);
  if (cfg.nan_guard && !(st.u.is_finite() && st.ut.is_finite()))
    throw NumericalError(
        "non-finite values at t = " + std::to_string(t), t);
  Scalar tail = boundary_tail_fraction(st.u);
  if (reference > Scalar(0)) tail *= lp_norm(st.u, Scalar(2)) / reference;
  if (tail > cfg.boundary_tolerance)
    throw BoundaryContaminationError(
        "outer-boundary L2 fraction " + std::to_string(static_cast<double>(tail)) +
            " exceeds tolerance at t = " + std::to_string(t),
        t);
}

}  // namespace detail

/**
 * Strang splitting for u_tt - Delta u + |u|^{p-1} u = 0: half kick with the
 * nonlinearity, exact linear flow over dt, half kick. A stepper caches the
 * propagator tables for its nominal step and for one odd-sized final step.
 */
template <typename Scalar>
class NlwStepper {
 public:
  NlwStepper(GridPtr<Scalar> grid, Scalar p, StepperConfig<Scalar> cfg)
      : grid_(std::move(grid)), p_(p), cfg_(cfg),
        nominal_(*grid_, cfg_.dt) {
    cfg_.validate();
    if (!(p >= Scalar(1))) throw ConfigError("power p must be >= 1");
  }

  const StepperConfig<Scalar>& config() const { return cfg_; }
  Scalar power() const { return p_; }

  /// Measure boundary contamination against this L^2 norm instead of the
  /// state's own.
  void set_reference_norm(Scalar norm) { reference_ = norm; }

  void kick(WaveState<Scalar>& st, Scalar tau) const {
    st.ut.values() += tau * nonlinearity(st.u, p_).values();
  }

  /// Advance st by dt (defaults to the nominal step). Guards are applied to
  /// the new state.
  void step(WaveState<Scalar>& st, std::optional<Scalar> dt = {}) {
    const Scalar h = dt.value_or(cfg_.dt);
    try {
      kick(st, h / Scalar(2));
      flow(st, h);
      kick(st, h / Scalar(2));
    } catch (const NumericalError& e) {
      // The force evaluation does not know the time; attach the step end.
      throw NumericalError(e.what(), static_cast<double>(st.t + h));
    }
    st.t += h;
    detail::check_state(st, cfg_, reference_);
  }

  /// Exact free evolution of (u, u_t) over h; leaves st.t alone.
  void flow(WaveState<Scalar>& st, Scalar h) {
    SpectralField<Scalar> c = forward(st.u), ct = forward(st.ut);
    propagator(h).apply(c, ct);
    st.u = inverse(c);
    st.ut = inverse(ct);
  }

 private:
  const LinearPropagator<Scalar>& propagator(Scalar h) {
    // Step sizes recovered as t_{n+1} - t_n differ from dt in the last bits.
    if (std::abs(h - cfg_.dt) <= Scalar(1e-9) * cfg_.dt) return nominal_;
    if (!odd_ || odd_->time() != h) odd_.emplace(*grid_, h);
    return *odd_;
  }

  GridPtr<Scalar> grid_;
  Scalar p_;
  StepperConfig<Scalar> cfg_;
  LinearPropagator<Scalar> nominal_;
  std::optional<LinearPropagator<Scalar>> odd_;
  Scalar reference_ = 0;
};

/// One Strang step of size cfg.dt.
template <typename Scalar>
WaveState<Scalar> step(WaveState<Scalar> st, Scalar p,
                       const StepperConfig<Scalar>& cfg) {
  NlwStepper<Scalar> stepper(st.grid(), p, cfg);
  stepper.step(st);
  return st;
}

/// Step sizes covering [t0, T]: nominal steps, then one shorter final step
/// if T is not a multiple of dt. Times are t0 + n dt, not accumulated sums.
template <typename Scalar>
std::vector<Scalar> step_times(Scalar t0, Scalar horizon, Scalar dt) {
  std::vector<Scalar> times{t0};
  const Scalar span = horizon - t0;
  if (span <= Scalar(0)) return times;
  const Scalar ratio = span / dt;
  Index full = static_cast<Index>(std::floor(ratio));
  if (ratio - Scalar(full) > Scalar(1) - Scalar(1e-9)) ++full;
  for (Index n = 1; n <= full; ++n) times.push_back(t0 + Scalar(n) * dt);
  if (horizon - times.back() > Scalar(1e-9) * dt)
    times.push_back(horizon);
  else
    times.back() = std::min(times.back(), horizon);
  return times;
}

/// Requires extent(data) + T + margin <= L so the wall stays causally
/// invisible for the whole run.
template <typename Scalar>
void check_domain_of_dependence(const RadialField<Scalar>& u0,
                                const RadialField<Scalar>& u1, Scalar horizon,
                                const StepperConfig<Scalar>& cfg) {
  const Scalar extent = std::max(support_extent(u0, cfg.support_tolerance),
                                 support_extent(u1, cfg.support_tolerance));
  const Scalar length = u0.grid()->length();
  if (extent + horizon + cfg.guard_margin > length)
    throw DomainOfDependenceError(
        "data extent " + std::to_string(static_cast<double>(extent)) +
        " + horizon " + std::to_string(static_cast<double>(horizon)) +
        " + margin " + std::to_string(static_cast<double>(cfg.guard_margin)) +
        " exceeds L = " + std::to_string(static_cast<double>(length)));
}

/// Snapshots of a run at every stride-th step plus the final state.
template <typename Scalar>
struct Trajectory {
  Index stride = 1;
  std::vector<WaveState<Scalar>> snapshots;

  std::vector<Scalar> times() const {
    std::vector<Scalar> t;
    for (const auto& s : snapshots) t.push_back(s.t);
    return t;
  }
  bool empty() const { return snapshots.empty(); }
};

/// Solve the defocusing NLW on [0, T].
template <typename Scalar>
Trajectory<Scalar> solve_nlw(const RadialField<Scalar>& u0,
                             const RadialField<Scalar>& u1, Scalar p,
                             Scalar horizon, const StepperConfig<Scalar>& cfg,
                             Index stride = 1) {
  cfg.validate();
  if (stride < 1) throw ConfigError("sampling stride must be >= 1");
  check_domain_of_dependence(u0, u1, horizon, cfg);
  NlwStepper<Scalar> stepper(u0.grid(), p, cfg);
  WaveState<Scalar> st(u0, u1, Scalar(0));
  detail::check_state(st, cfg);
  const std::vector<Scalar> times = step_times(Scalar(0), horizon, cfg.dt);
  Trajectory<Scalar> traj;
  traj.stride = stride;
  traj.snapshots.push_back(st);
  for (std::size_t n = 1; n < times.size(); ++n) {
    stepper.step(st, times[n] - times[n - 1]);
    st.t = times[n];
    if (n % static_cast<std::size_t>(stride) == 0 || n + 1 == times.size())
      traj.snapshots.push_back(st);
  }
  return traj;
}

/**
 * Direct integration of v_tt - Delta v = -F(v, w) against a stored w, with
 * the same Strang splitting: the kicks use w at the two ends of each step.
 * w_history[n] must be w at times[n].
 */
template <typename Scalar>
Trajectory<Scalar> solve_difference(
    const RadialField<Scalar>& v0, const RadialField<Scalar>& v1,
    const std::vector<RadialField<Scalar>>& w_history,
    const std::vector<Scalar>& times, Scalar p,
    const StepperConfig<Scalar>& cfg, Index stride = 1) {
  if (w_history.size() != times.size() || times.empty())
    throw ConfigError("w history and time grid differ in length");
  NlwStepper<Scalar> flows(v0.grid(), p, cfg);
  WaveState<Scalar> st(v0, v1, times.front());
  Trajectory<Scalar> traj;
  traj.stride = stride;
  traj.snapshots.push_back(st);
  for (std::size_t n = 1; n < times.size(); ++n) {
    const Scalar h = times[n] - times[n - 1];
    st.ut.values() -=
        (h / Scalar(2)) * difference_force(st.u, w_history[n - 1], p).values();
    flows.flow(st, h);
    st.ut.values() -=
        (h / Scalar(2)) * difference_force(st.u, w_history[n], p).values();
    st.t = times[n];
    detail::check_state(st, cfg);
    if (n % static_cast<std::size_t>(stride) == 0 || n + 1 == times.size())
      traj.snapshots.push_back(st);
  }
  return traj;
}

}  // namespace radwave

#endif  // RADWAVE_WAVE_DYNAMICS_HPP
