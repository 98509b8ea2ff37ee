#ifndef RADWAVE_COUPLED_RUN_HPP
#define RADWAVE_COUPLED_RUN_HPP

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "radwave/spectral_calculus.hpp"
#include "radwave/wave_dynamics.hpp"

namespace radwave {

/**
 * Running value of the mixed norm (int |f(t)|_{L^r}^q dt)^{1/q} by the
 * trapezoid rule over the times it is fed. q = infinity keeps the sup.
 */
template <typename Scalar>
class MixedNormAccumulator {
 public:
  MixedNormAccumulator() = default;
  MixedNormAccumulator(Scalar time_exponent, Scalar space_exponent)
      : q_(time_exponent), r_(space_exponent) {
    if (!(q_ >= Scalar(1)) || !(r_ >= Scalar(1)))
      throw ConfigError("mixed-norm exponents must be >= 1");
  }

  void add(Scalar t, const RadialField<Scalar>& f) {
    add_value(t, lp_norm(f, r_));
  }

  /// Feed a precomputed spatial norm |f(t)|_{L^r}.
  void add_value(Scalar t, Scalar spatial_norm) {
    if (std::isinf(static_cast<double>(q_))) {
      sum_ = std::max(sum_, spatial_norm);
    } else {
      const Scalar v = std::pow(spatial_norm, q_);
      if (count_ > 0) sum_ += Scalar(0.5) * (last_ + v) * (t - last_t_);
      last_ = v;
    }
    last_t_ = t;
    ++count_;
  }

  Scalar value() const {
    if (std::isinf(static_cast<double>(q_))) return sum_;
    return std::pow(sum_, Scalar(1) / q_);
  }

  Scalar time_exponent() const { return q_; }
  Scalar space_exponent() const { return r_; }
  Index count() const { return count_; }

  struct State {
    Scalar sum, last, last_t;
    Index count;
  };
  State state() const { return {sum_, last_, last_t_, count_}; }
  void restore(const State& s) {
    sum_ = s.sum;
    last_ = s.last;
    last_t_ = s.last_t;
    count_ = s.count;
  }

 private:
  Scalar q_ = Scalar(2), r_ = Scalar(2);
  Scalar sum_ = 0, last_ = 0, last_t_ = 0;
  Index count_ = 0;
};

/// One row of the time-series output.
template <typename Scalar>
struct CoupledSample {
  Scalar t;
  Scalar energy_v;
  Scalar hs_u;
  Scalar hsc_w;
  Scalar lpp1_u;
  Scalar linf_u;
  Scalar boundary_tail_l2;
};

template <typename Scalar>
struct CoupledSummary {
  Scalar energy_v0 = 0;
  Scalar energy_window_max = 0;  // E_T
  Scalar hs_u0 = 0, sup_hs_u = 0;
  Scalar hsc_w0 = 0, sup_hsc_w = 0;
  /// |w|_{L^2_t L^{3/(1-s_c)}_x} over the window.
  Scalar strichartz_l2 = 0;
  /// |w|_{L^{2p/(1+s_c)}_t L^{2p/(2-s_c)}_x}.
  Scalar strichartz_wellposedness = 0;
  /// |w|_{L^{p-1}_t L^{3(p-1)}_x}.
  Scalar strichartz_power = 0;
  /// 2^{2J(1-s)}, the size predicted for E(v)(0).
  Scalar initial_energy_scale = 0;
  Scalar initial_energy_ratio = 0;
  /// 2^{J(s_c - s)}, the predicted smallness of w in H^{s_c}.
  Scalar smallness_scale = 0;
};

template <typename Scalar>
struct CoupledOptions {
  Index stride = 1;
  /// Keep w at every step time, for the direct difference-equation check.
  bool keep_w_history = false;
};

/// Everything needed to continue a coupled run bit-for-bit up to transform
/// rounding: states in spectral form plus the running diagnostics.
template <typename Scalar>
struct CoupledCheckpoint {
  Scalar length = 0;
  Index nodes = 0;
  Scalar t = 0;
  Index step = 0;
  Vector<Scalar> u, ut, w, wt;
  /// |u_0|_{L^2}, the scale for boundary checks on w.
  Scalar u0_norm = 0;
  Scalar energy_v0 = 0, energy_window_max = 0;
  Scalar hs_u0 = 0, sup_hs_u = 0, hsc_w0 = 0, sup_hsc_w = 0;
  std::vector<typename MixedNormAccumulator<Scalar>::State> accumulators;
  std::vector<CoupledSample<Scalar>> samples;
};

template <typename Scalar>
struct CoupledReport {
  ParameterSet params;
  Scalar horizon = 0;
  std::vector<CoupledSample<Scalar>> samples;
  CoupledSummary<Scalar> summary;
  std::vector<Scalar> step_times;
  std::vector<RadialField<Scalar>> w_history;
};

/**
 * Fourier-truncation run. Data are split at 2^J into
 *   w_i = P_{>2^{J-1}} u_i   (support above 2^{J-1}, all of it above 2^J)
 *   v_i = u_i - w_i          (support below 2^J),
 * then the full equation is solved for u and for w with the same stepper
 * and time grid. v is defined as u - w at every time, so u = v + w holds
 * identically.
 */
template <typename Scalar>
class CoupledRun {
 public:
  CoupledRun(const RadialField<Scalar>& u0, const RadialField<Scalar>& u1,
             const ParameterSet& ps, Scalar horizon,
             const StepperConfig<Scalar>& cfg,
             const CoupledOptions<Scalar>& opts = {})
      : grid_(u0.grid()), ps_(ps), horizon_(horizon), cfg_(cfg), opts_(opts),
        u_stepper_(u0.grid(), Scalar(ps.p), cfg),
        w_stepper_(u0.grid(), Scalar(ps.p), cfg) {
    validate(u0, u1);
    const Scalar split = std::ldexp(Scalar(1), ps_.J - 1);
    u_ = WaveState<Scalar>(u0, u1, Scalar(0));
    w_ = WaveState<Scalar>(lp_high(u0, split), lp_high(u1, split), Scalar(0));
    u0_norm_ = lp_norm(u0, Scalar(2));
    w_stepper_.set_reference_norm(u0_norm_);
    times_ = step_times(Scalar(0), horizon_, cfg_.dt);
    init_accumulators();
    observe(true);
  }

  static CoupledRun resume(const CoupledCheckpoint<Scalar>& ck,
                           const ParameterSet& ps, Scalar horizon,
                           const StepperConfig<Scalar>& cfg,
                           const CoupledOptions<Scalar>& opts = {}) {
    auto grid = make_grid<Scalar>(ck.length, ck.nodes);
    auto field = [&](const Vector<Scalar>& c) {
      return inverse(SpectralField<Scalar>(grid, c));
    };
    CoupledRun run(grid, ps, horizon, cfg, opts);
    run.u_ = WaveState<Scalar>(field(ck.u), field(ck.ut), ck.t);
    run.w_ = WaveState<Scalar>(field(ck.w), field(ck.wt), ck.t);
    run.u0_norm_ = ck.u0_norm;
    run.w_stepper_.set_reference_norm(ck.u0_norm);
    run.step_ = ck.step;
    run.times_ = step_times(Scalar(0), horizon, cfg.dt);
    if (ck.step >= static_cast<Index>(run.times_.size()))
      throw ConfigError("checkpoint step lies beyond the run horizon");
    run.init_accumulators();
    if (ck.accumulators.size() != run.accumulators_.size())
      throw ConfigError("checkpoint accumulator count mismatch");
    for (std::size_t i = 0; i < ck.accumulators.size(); ++i)
      run.accumulators_[i].restore(ck.accumulators[i]);
    auto& s = run.report_.summary;
    s.energy_v0 = ck.energy_v0;
    s.energy_window_max = ck.energy_window_max;
    s.hs_u0 = ck.hs_u0;
    s.sup_hs_u = ck.sup_hs_u;
    s.hsc_w0 = ck.hsc_w0;
    s.sup_hsc_w = ck.sup_hsc_w;
    run.report_.samples = ck.samples;
    run.finish_summary();
    return run;
  }

  bool done() const { return step_ + 1 >= static_cast<Index>(times_.size()); }
  Index step_index() const { return step_; }
  Index total_steps() const { return static_cast<Index>(times_.size()) - 1; }

  /// Take up to max_steps steps; returns the number taken.
  Index advance(Index max_steps) {
    Index taken = 0;
    while (!done() && taken < max_steps) {
      const Scalar t0 = times_[step_], t1 = times_[step_ + 1];
      u_stepper_.step(u_, t1 - t0);
      w_stepper_.step(w_, t1 - t0);
      ++step_;
      u_.t = w_.t = t1;
      observe(false);
      ++taken;
    }
    finish_summary();
    return taken;
  }

  const CoupledReport<Scalar>& run() {
    advance(std::numeric_limits<Index>::max());
    return report_;
  }

  const CoupledReport<Scalar>& report() const { return report_; }
  const WaveState<Scalar>& u_state() const { return u_; }
  const WaveState<Scalar>& w_state() const { return w_; }

  WaveState<Scalar> v_state() const {
    return WaveState<Scalar>(u_.u - w_.u, u_.ut - w_.ut, u_.t);
  }

  CoupledCheckpoint<Scalar> checkpoint() const {
    CoupledCheckpoint<Scalar> ck;
    ck.length = grid_->length();
    ck.nodes = grid_->size();
    ck.t = u_.t;
    ck.step = step_;
    ck.u = forward(u_.u).coefficients();
    ck.ut = forward(u_.ut).coefficients();
    ck.w = forward(w_.u).coefficients();
    ck.wt = forward(w_.ut).coefficients();
    ck.u0_norm = u0_norm_;
    const auto& s = report_.summary;
    ck.energy_v0 = s.energy_v0;
    ck.energy_window_max = s.energy_window_max;
    ck.hs_u0 = s.hs_u0;
    ck.sup_hs_u = s.sup_hs_u;
    ck.hsc_w0 = s.hsc_w0;
    ck.sup_hsc_w = s.sup_hsc_w;
    for (const auto& a : accumulators_) ck.accumulators.push_back(a.state());
    ck.samples = report_.samples;
    return ck;
  }

 private:
  // Shell used by resume(): validated parameters, no data yet.
  CoupledRun(GridPtr<Scalar> grid, const ParameterSet& ps, Scalar horizon,
             const StepperConfig<Scalar>& cfg,
             const CoupledOptions<Scalar>& opts)
      : grid_(std::move(grid)), ps_(ps), horizon_(horizon), cfg_(cfg),
        opts_(opts), u_stepper_(grid_, Scalar(ps.p), cfg),
        w_stepper_(grid_, Scalar(ps.p), cfg) {
    ps_.require_launchable();
    check_band();
    report_.params = ps_;
    report_.horizon = horizon_;
  }

  void check_band() const {
    detail::require_in_band(*grid_, std::ldexp(Scalar(1), ps_.J), 0);
  }

  void validate(const RadialField<Scalar>& u0, const RadialField<Scalar>& u1) {
    cfg_.validate();
    ps_.require_launchable();
    if (!same_grid(u0.grid(), u1.grid()))
      throw ConfigError("coupled run data live on different grids");
    if (opts_.stride < 1) throw ConfigError("sampling stride must be >= 1");
    check_band();
    check_domain_of_dependence(u0, u1, horizon_, cfg_);
    report_.params = ps_;
    report_.horizon = horizon_;
  }

  void init_accumulators() {
    const Scalar p = Scalar(ps_.p), sc = Scalar(ps_.critical());
    accumulators_ = {
        MixedNormAccumulator<Scalar>(Scalar(2), Scalar(3) / (Scalar(1) - sc)),
        MixedNormAccumulator<Scalar>(Scalar(2) * p / (Scalar(1) + sc),
                                     Scalar(2) * p / (Scalar(2) - sc)),
        MixedNormAccumulator<Scalar>(p - Scalar(1), Scalar(3) * (p - Scalar(1)))};
  }

  void observe(bool initial) {
    const Scalar p = Scalar(ps_.p);
    const WaveState<Scalar> v = v_state();
    const Scalar ev = energy(v, p);
    const Scalar hs_u = sobolev_norm(u_.u, Scalar(ps_.s));
    const Scalar hsc_w = sobolev_norm(w_.u, Scalar(ps_.critical()));
    auto& s = report_.summary;
    if (initial) {
      s.energy_v0 = ev;
      s.hs_u0 = hs_u;
      s.hsc_w0 = hsc_w;
      s.energy_window_max = ev;
      s.sup_hs_u = hs_u;
      s.sup_hsc_w = hsc_w;
    } else {
      s.energy_window_max = std::max(s.energy_window_max, ev);
      s.sup_hs_u = std::max(s.sup_hs_u, hs_u);
      s.sup_hsc_w = std::max(s.sup_hsc_w, hsc_w);
    }
    for (auto& a : accumulators_) a.add(u_.t, w_.u);
    if (opts_.keep_w_history) {
      report_.step_times.push_back(u_.t);
      report_.w_history.push_back(w_.u);
    }
    const bool last = done();
    if (initial || step_ % opts_.stride == 0 || last) {
      if (report_.samples.empty() || report_.samples.back().t < u_.t)
        report_.samples.push_back(
            {u_.t, ev, hs_u, hsc_w, lp_norm(u_.u, p + Scalar(1)),
             lp_norm(u_.u, std::numeric_limits<Scalar>::infinity()),
             boundary_tail_fraction(u_.u)});
    }
  }

  void finish_summary() {
    auto& s = report_.summary;
    s.strichartz_l2 = accumulators_[0].value();
    s.strichartz_wellposedness = accumulators_[1].value();
    s.strichartz_power = accumulators_[2].value();
    s.initial_energy_scale =
        std::exp2(Scalar(2) * Scalar(ps_.J) * (Scalar(1) - Scalar(ps_.s)));
    s.initial_energy_ratio = s.energy_v0 / s.initial_energy_scale;
    s.smallness_scale =
        std::exp2(Scalar(ps_.J) * Scalar(ps_.critical() - ps_.s));
  }

  GridPtr<Scalar> grid_;
  ParameterSet ps_;
  Scalar horizon_;
  StepperConfig<Scalar> cfg_;
  CoupledOptions<Scalar> opts_;
  NlwStepper<Scalar> u_stepper_, w_stepper_;
  WaveState<Scalar> u_, w_;
  std::vector<Scalar> times_;
  Index step_ = 0;
  Scalar u0_norm_ = 0;
  std::vector<MixedNormAccumulator<Scalar>> accumulators_;
  CoupledReport<Scalar> report_;
};

/// Run the coupled truncation evolution over [0, T].
template <typename Scalar>
CoupledReport<Scalar> solve_coupled(const RadialField<Scalar>& u0,
                                    const RadialField<Scalar>& u1,
                                    const ParameterSet& ps, Scalar horizon,
                                    const StepperConfig<Scalar>& cfg,
                                    const CoupledOptions<Scalar>& opts = {}) {
  CoupledRun<Scalar> run(u0, u1, ps, horizon, cfg, opts);
  return run.run();
}

}  // namespace radwave

#endif  // RADWAVE_COUPLED_RUN_HPP
