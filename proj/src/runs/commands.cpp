#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "radwave/runs.hpp"

namespace radwave::runs {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// NaN and infinities are not JSON; they go out as null.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string summary_text(const json& j) { return j.dump(2) + "\n"; }

Vector<double> gaussian(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  Vector<double> v(n);
  for (Index i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

// ---- selftest -------------------------------------------------------------

double linear_energy(const WaveState<double>& st) {
  const double a = lp_norm(st.ut, 2.0), b = sobolev_norm(st.u, 1.0);
  return 0.5 * a * a + 0.5 * b * b;
}

int selftest(const RunConfig& cfg, RunDirectory& dir) {
  json checks = json::array();
  bool ok = true;
  auto check = [&](const std::string& name, double value, double tol,
                   json extra = json::object()) {
    const bool pass = value <= tol;
    ok = ok && pass;
    extra["name"] = name;
    extra["value"] = num(value);
    extra["tolerance"] = tol;
    extra["pass"] = pass;
    checks.push_back(extra);
  };

  for (Index n : {Index(255), Index(4095), Index(65535)}) {
    auto g = make_grid(cfg.length, n);
    const Vector<double> c = gaussian(n, 11 + static_cast<std::uint64_t>(n));
    const auto t0 = std::chrono::steady_clock::now();
    const Vector<double> back =
        forward(inverse(SpectralField<double>(g, c))).coefficients();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    check("round_trip", (back - c).norm() / c.norm(), 1e-12,
          {{"N", n}, {"seconds", secs}});
  }

  auto g = make_grid(cfg.length, Index(4095));
  double plancherel = 0;
  for (int trial = 0; trial < 100; ++trial)
    plancherel = std::max(
        plancherel,
        plancherel_defect(RadialField<double>(g, gaussian(g->size(), 500 + trial))));
  check("plancherel", plancherel, 1e-12, {{"N", g->size()}, {"fields", 100}});

  // One sine mode is a harmonic oscillator in time.
  const Index k = 7;
  const double lambda = g->frequency(k - 1);
  Vector<double> mode(g->size());
  for (Index j = 0; j < g->size(); ++j) mode[j] = std::sin(lambda * g->node(j));
  const RadialField<double> u0(g, mode), zero = RadialField<double>::zero(g);
  std::vector<std::vector<double>> rows;
  double flow_err = 0;
  for (int i = 0; i <= 20; ++i) {
    const double t = 0.5 * i;
    const auto st = linear_flow(u0, zero, t);
    const double eu =
        (st.u.values() - std::cos(lambda * t) * mode).cwiseAbs().maxCoeff();
    const double eut =
        (st.ut.values() + lambda * std::sin(lambda * t) * mode).cwiseAbs().maxCoeff();
    rows.push_back({t, eu, eut});
    flow_err = std::max({flow_err, eu, eut});
  }
  check("linear_flow_mode", flow_err, 1e-10, {{"mode", k}, {"t_max", 10.0}});

  const WaveState<double> st(RadialField<double>(g, gaussian(g->size(), 71)),
                             RadialField<double>(g, gaussian(g->size(), 72)),
                             0.0);
  const double e0 = linear_energy(st);
  check("linear_energy", std::abs(linear_energy(linear_flow(st, 10.0)) - e0) / e0,
        1e-12, {{"t", 10.0}});

  dir.write("linear_flow.csv", csv_text({"t", "err_u", "err_ut"}, rows));
  dir.write("summary.json",
            summary_text({{"command", "selftest"}, {"pass", ok}, {"checks", checks}}));
  if (!ok) {
    dir.fail("numerical", "selftest check out of tolerance");
    return kNumericalFailure;
  }
  dir.finish();
  return kSuccess;
}

// ---- simulate -------------------------------------------------------------

// Without a split w = 0 and v = u.
CoupledSample<double> plain_sample(const WaveState<double>& st, double p,
                                   double s) {
  return {st.t,
          energy(st, p),
          sobolev_norm(st.u, s),
          0.0,
          lp_norm(st.u, p + 1),
          lp_norm(st.u, kInf),
          boundary_tail_fraction(st.u)};
}

int simulate(const RunConfig& cfg, RunDirectory& dir) {
  const ParameterSet ps = cfg.params;
  const double horizon = cfg.horizon_for(ps.J);
  auto grid = cfg.grid();
  auto [u0, u1] = make_data(grid, cfg.data, ps.s);
  const auto stepper_cfg = cfg.stepper();
  check_domain_of_dependence(u0, u1, horizon, stepper_cfg);
  NlwStepper<double> stepper(grid, ps.p, stepper_cfg);
  WaveState<double> st(u0, u1, 0.0);
  const auto times = step_times(0.0, horizon, cfg.dt);
  std::vector<CoupledSample<double>> samples;
  auto record = [&] { samples.push_back(plain_sample(st, ps.p, ps.s)); };
  record();
  try {
    for (std::size_t n = 1; n < times.size(); ++n) {
      stepper.step(st, times[n] - times[n - 1]);
      st.t = times[n];
      if (n % static_cast<std::size_t>(cfg.stride) == 0 || n + 1 == times.size())
        record();
    }
  } catch (const NumericalError&) {
    dir.write("timeseries.csv", timeseries_csv(samples));
    throw;
  }
  dir.write("timeseries.csv", timeseries_csv(samples));
  const auto& first = samples.front();
  const auto& last = samples.back();
  dir.write("summary.json",
            summary_text({{"command", "simulate"},
                          {"T", horizon},
                          {"steps", times.size() - 1},
                          {"energy_0", num(first.energy_v)},
                          {"energy_T", num(last.energy_v)},
                          {"relative_energy_drift",
                           num(std::abs(last.energy_v - first.energy_v) /
                               first.energy_v)},
                          {"hs_u_0", num(first.hs_u)},
                          {"hs_u_T", num(last.hs_u)}}));
  dir.finish();
  return kSuccess;
}

// ---- truncation -----------------------------------------------------------

struct JOutcome {
  bool stopped = false;
  CoupledReport<double> report;
};

JOutcome run_level(const RunConfig& cfg, int J, RunDirectory& dir,
                   const RunOptions& opts) {
  const ParameterSet ps = cfg.params_for(J);
  const double horizon = cfg.horizon_for(J);
  const auto stepper_cfg = cfg.stepper();
  CoupledOptions<double> copts;
  copts.stride = cfg.stride;
  const CheckpointTag tag{ps.p, ps.s, J, horizon, cfg.dt};
  const std::string ck_name = "checkpoint_J" + std::to_string(J) + ".bin";
  const auto ck_path = dir.file(ck_name);

  std::optional<CoupledRun<double>> run;
  if (opts.resume && std::filesystem::exists(ck_path)) {
    CheckpointTag stored;
    const auto ck = read_checkpoint(ck_path, &stored);
    if (stored.p != tag.p || stored.s != tag.s || stored.J != tag.J ||
        stored.horizon != tag.horizon || stored.dt != tag.dt ||
        ck.length != cfg.length || ck.nodes != cfg.nodes)
      throw ConfigError(ck_name + ": checkpoint was written for another config");
    run.emplace(CoupledRun<double>::resume(ck, ps, horizon, stepper_cfg, copts));
  } else {
    auto grid = cfg.grid();
    const auto [u0, u1] = make_data(grid, cfg.data, ps.s);
    run.emplace(u0, u1, ps, horizon, stepper_cfg, copts);
  }

  const Index chunk = cfg.checkpoint_every > 0
                          ? cfg.checkpoint_every
                          : std::numeric_limits<Index>::max();
  Index budget = opts.stop_after > 0 ? opts.stop_after
                                     : std::numeric_limits<Index>::max();
  const bool keep = cfg.checkpoint_every > 0 || opts.stop_after > 0;
  while (!run->done() && budget > 0) {
    budget -= run->advance(std::min(chunk, budget));
    if (keep) write_checkpoint(ck_path, run->checkpoint(), tag);
  }
  return {!run->done(), run->report()};
}

json row_json(const TruncationRow& r) {
  return {{"J", r.J},
          {"T", r.T},
          {"E0_v", num(r.E0_v)},
          {"E_T", num(r.E_T)},
          {"hs_u0", num(r.hs_u0)},
          {"sup_hs_u", num(r.sup_hs_u)},
          {"hsc_w0", num(r.hsc_w0)},
          {"sup_hsc_w", num(r.sup_hsc_w)},
          {"st_w_L2Lq", num(r.st_w_L2Lq)},
          {"st_w_wellposedness", num(r.st_w_wellposedness)},
          {"st_w_power", num(r.st_w_power)},
          {"initial_energy_ratio", num(r.initial_energy_ratio)},
          {"smallness_scale", num(r.smallness_scale)},
          {"smallness_ratio", num(r.sup_hsc_w / r.hsc_w0)}};
}

int truncation(const RunConfig& cfg, RunDirectory& dir, const RunOptions& opts) {
  const std::size_t n = cfg.js.size();
  std::vector<JOutcome> outcomes(n);
  std::vector<std::exception_ptr> errors(n);
  auto work = [&](std::size_t i) {
    try {
      outcomes[i] = run_level(cfg, cfg.js[i], dir, opts);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(cfg.workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) work(i);
      });
    for (auto& t : pool) t.join();
  }
  // Manifest bookkeeping stays on this thread, in J-list order.
  for (std::size_t i = 0; i < n; ++i) {
    const std::string ck = "checkpoint_J" + std::to_string(cfg.js[i]) + ".bin";
    if (std::filesystem::exists(dir.file(ck))) dir.record(ck);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  bool stopped = false;
  TruncationTable table;
  table.predicted = derived_exponents(cfg.params);
  for (std::size_t i = 0; i < n; ++i) {
    stopped = stopped || outcomes[i].stopped;
    table.rows.push_back(truncation_row(outcomes[i].report));
    dir.write("timeseries_J" + std::to_string(cfg.js[i]) + ".csv",
              timeseries_csv(outcomes[i].report.samples));
  }
  if (stopped) {
    dir.stop();
    return kSuccess;
  }
  fit_truncation_table(table);
  dir.write("truncation.csv", truncation_csv(table));

  json rows = json::array();
  double worst_smallness = 0;
  for (const auto& r : table.rows) {
    rows.push_back(row_json(r));
    worst_smallness = std::max(worst_smallness, r.sup_hsc_w / r.hsc_w0);
  }
  const double s = cfg.params.s;
  const auto& e = table.predicted;
  json consistency = {
      {"smallness_ratio_max", num(worst_smallness)},
      {"smallness_ratio_bound", 2.0},
      {"energy_slope", num(table.fitted_ET_slope)},
      {"energy_slope_bound", 2 * (1 - s) + 0.3},
      {"initial_energy_slope", num(table.fitted_E0_slope)},
      {"initial_energy_slope_bound", 2 * (1 - s) + 0.1},
      {"growth_slope", num(table.fitted_hs_slope)},
      {"growth_slope_bound", e.theorem_growth + 0.3}};
  dir.write("summary.json",
            summary_text({{"command", "truncation"},
                          {"predicted",
                           {{"s_c", e.critical},
                            {"s_min", e.threshold},
                            {"energy_growth", e.energy_growth},
                            {"theorem_growth", e.theorem_growth}}},
                          {"fitted_ET_slope", num(table.fitted_ET_slope)},
                          {"fitted_E0_slope", num(table.fitted_E0_slope)},
                          {"fitted_hs_slope", num(table.fitted_hs_slope)},
                          {"consistency", consistency},
                          {"rows", rows}}));
  dir.finish();
  return kSuccess;
}

// ---- inequalities ---------------------------------------------------------

int inequalities(const RunConfig& cfg, RunDirectory& dir) {
  auto grid = cfg.grid();
  std::vector<std::vector<double>> sob_rows;
  json sob = json::array();
  for (double p : {2.0, 4.0}) {
    const auto rep = verify_radial_sobolev(p, cfg.trials, cfg.seed, grid);
    for (const auto& w : rep.per_width)
      sob_rows.push_back({p, w.width, w.max_ratio, w.min_ratio,
                          static_cast<double>(w.count)});
    sob.push_back({{"p", p},
                   {"max_ratio", num(rep.max_ratio)},
                   {"width_spread", num(rep.width_spread())},
                   {"skipped", rep.skipped}});
  }
  dir.write("radial_sobolev.csv",
            csv_text({"p", "width", "max_ratio", "min_ratio", "count"}, sob_rows));

  const std::vector<double> dyadics{4, 8, 16, 32, 64, 128, 256};
  std::vector<std::vector<double>> bern_rows;
  json bern = json::array();
  for (double q : {kInf, 6.0}) {
    const auto fit = verify_bernstein(2.0, q, dyadics, 8, cfg.seed, grid);
    const double predicted = bernstein_exponent(2.0, q);
    bern_rows.push_back({2.0, q, fit.slope, predicted, fit.residual});
    bern.push_back({{"q_from", 2.0},
                    {"q_to", num(q)},
                    {"slope", num(fit.slope)},
                    {"predicted", predicted},
                    {"residual", num(fit.residual)}});
  }
  dir.write("bernstein.csv",
            csv_text({"q_from", "q_to", "slope", "predicted", "residual"},
                     bern_rows));
  dir.write("summary.json",
            summary_text({{"command", "inequalities"},
                          {"radial_sobolev", sob},
                          {"bernstein", bern}}));
  dir.finish();
  return kSuccess;
}

// ---- decay ----------------------------------------------------------------

int decay(const RunConfig& cfg, RunDirectory& dir) {
  auto grid = cfg.grid();
  const auto u0 = make_data(grid, cfg.data, cfg.params.s).first;
  std::vector<double> times = cfg.decay_times;
  if (times.empty())
    for (double t = 4; t <= 30; t += 2) times.push_back(t);
  std::vector<std::vector<double>> rows;
  json fits = json::array();
  for (double rx : {kInf, 4.0, 2.0}) {
    const auto m = measure_dispersive_decay(u0, StrichartzPair{2.0, rx}, times);
    for (std::size_t i = 0; i < m.times.size(); ++i)
      rows.push_back({rx, m.times[i], m.norms[i]});
    fits.push_back({{"rx", num(rx)},
                    {"slope", num(m.fit.slope)},
                    {"predicted", m.predicted_slope},
                    {"residual", num(m.fit.residual)}});
  }
  dir.write("decay.csv", csv_text({"rx", "t", "norm"}, rows));
  dir.write("summary.json",
            summary_text({{"command", "decay"}, {"fits", fits}}));
  dir.finish();
  return kSuccess;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"selftest", "simulate", "truncation",
                                              "inequalities", "decay"};
  return names;
}

int run_command(const std::string& command, const RunConfig& cfg,
                const RunOptions& opts) {
  if (std::find(command_names().begin(), command_names().end(), command) ==
      command_names().end()) {
    std::cerr << "error: unknown command '" << command << "'\n";
    return kConfigError;
  }
  std::optional<RunDirectory> dir;
  try {
    dir.emplace(cfg.out, command, cfg, opts.force, opts.resume);
    if (command == "selftest") return selftest(cfg, *dir);
    if (command == "simulate") return simulate(cfg, *dir);
    if (command == "truncation") return truncation(cfg, *dir, opts);
    if (command == "inequalities") return inequalities(cfg, *dir);
    return decay(cfg, *dir);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure at t = " << e.time() << ": " << e.what()
              << '\n';
    if (dir) dir->fail("numerical", e.what(), e.time());
    return kNumericalFailure;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    if (dir) dir->fail("config", e.what());
    return kConfigError;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    if (dir) dir->fail("input", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    if (dir) dir->fail("internal", e.what());
    return kInternalError;
  }
}

}  // namespace radwave::runs
