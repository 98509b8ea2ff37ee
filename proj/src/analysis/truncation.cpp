#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "radwave/analysis.hpp"

namespace radwave {

namespace {

TruncationRow run_one(const ParameterSet& ps, const TruncationSetup& setup) {
  auto grid = make_grid(setup.length, setup.nodes);
  const auto [u0, u1] = make_data(grid, setup.data, ps.s);
  const double horizon = setup.horizon > 0 ? setup.horizon : t_window(ps);
  CoupledOptions<double> opts;
  opts.stride = setup.stride;
  return truncation_row(solve_coupled(u0, u1, ps, horizon, setup.stepper, opts));
}

double slope_or_nan(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 3) return std::numeric_limits<double>::quiet_NaN();
  return fit_power_law(x, y).slope;
}

}  // namespace

TruncationRow truncation_row(const CoupledReport<double>& rep) {
  const auto& s = rep.summary;
  TruncationRow row;
  row.J = rep.params.J;
  row.T = rep.horizon;
  row.E0_v = s.energy_v0;
  row.E_T = s.energy_window_max;
  row.hs_u0 = s.hs_u0;
  row.sup_hs_u = s.sup_hs_u;
  row.hsc_w0 = s.hsc_w0;
  row.sup_hsc_w = s.sup_hsc_w;
  row.st_w_L2Lq = s.strichartz_l2;
  row.st_w_wellposedness = s.strichartz_wellposedness;
  row.st_w_power = s.strichartz_power;
  row.initial_energy_ratio = s.initial_energy_ratio;
  row.smallness_scale = s.smallness_scale;
  row.samples = rep.samples;
  return row;
}

void fit_truncation_table(TruncationTable& table) {
  if (table.rows.empty()) throw ConfigError("truncation table has no rows");
  std::vector<double> x, et, e0, t, hs;
  for (const auto& r : table.rows) {
    x.push_back(std::ldexp(1.0, r.J));
    et.push_back(r.E_T);
    e0.push_back(r.E0_v);
    t.push_back(r.T);
    hs.push_back(r.sup_hs_u);
  }
  // log2 E against J is log E against log 2^J.
  table.fitted_ET_slope = slope_or_nan(x, et);
  table.fitted_E0_slope = slope_or_nan(x, e0);
  table.fitted_hs_slope = slope_or_nan(t, hs);
}

TruncationTable truncation_experiment(const std::vector<ParameterSet>& sets,
                                      const TruncationSetup& setup) {
  if (sets.empty()) throw ConfigError("truncation experiment needs a J list");
  setup.stepper.validate();
  // Everything that can be rejected is rejected before any run starts.
  auto grid = make_grid(setup.length, setup.nodes);
  for (const auto& ps : sets) {
    ps.require_launchable();
    detail::require_in_band(*grid, std::ldexp(1.0, ps.J), 0);
  }

  TruncationTable table;
  table.predicted = derived_exponents(sets.front());
  table.rows.resize(sets.size());
  std::vector<std::exception_ptr> errors(sets.size());
  const auto work = [&](std::size_t i) {
    try {
      table.rows[i] = run_one(sets[i], setup);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(setup.workers, sets.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < sets.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < sets.size(); i += workers) work(i);
      });
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  fit_truncation_table(table);
  return table;
}

}  // namespace radwave
