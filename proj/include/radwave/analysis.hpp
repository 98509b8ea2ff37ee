#ifndef RADWAVE_ANALYSIS_HPP
#define RADWAVE_ANALYSIS_HPP

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "radwave/coupled_run.hpp"
#include "radwave/wave_dynamics.hpp"

namespace radwave {

// ---- Fits -----------------------------------------------------------------

struct FitResult {
  double slope = 0;
  double intercept = 0;  // natural log of the prefactor
  double residual = 0;   // RMS of the log residuals
  Index count = 0;
};

/// Least squares of log y against log x. Needs at least three points, all
/// positive.
FitResult fit_power_law(const std::vector<double>& x,
                        const std::vector<double>& y);

// ---- Test fields ----------------------------------------------------------

struct Bump {
  double center = 5.0;
  double width = 1.0;
  double amplitude = 1.0;
};

/// u(r) = A exp(1 - 1/(1 - x^2)), x = (r - center)/width, zero for |x| >= 1.
double bump_profile(const Bump& b, double r);
RadialField<double> bump_field(const GridPtr<double>& grid, const Bump& b);
RadialField<double> bump_field(const GridPtr<double>& grid,
                               const std::vector<Bump>& bumps);

/// Ranges for random bump superpositions.
struct BumpFamily {
  int min_count = 1, max_count = 5;
  double width_lo = 0.2, width_hi = 2.0;
  double amplitude_lo = 0.2, amplitude_hi = 1.0;  // sign drawn separately
  double center_lo = 2.0, center_hi = 12.0;
};

/// Draws one superposition. Every bump lies inside (1, 1 + L).
std::vector<Bump> random_bumps(const RadialGrid<double>& grid,
                               const BumpFamily& family, std::mt19937_64& rng);

/**
 * Rough spectral family: c_k = a lambda_k^{-s-1/2} (1 + lambda_k)^{-delta}
 * xi_k with seeded signs xi_k = +-1, so the field sits in H^sigma exactly
 * for sigma < s + delta. The physical field is multiplied by the window
 * phi(2 t / taper) (t = r - 1), which keeps it compact without touching
 * its local regularity; taper <= 0 skips the window.
 */
struct RoughSpec {
  double s = 0.96;
  double delta = 0.01;
  double amplitude = 1.0;
  std::uint64_t seed = 0;
  double taper = 20.0;
};

RadialField<double> rough_field(const GridPtr<double>& grid,
                                const RoughSpec& spec);

/// Window phi(2 t / taper) applied pointwise.
RadialField<double> taper_field(const RadialField<double>& f, double taper);

/// Flat-amplitude coefficients with seeded signs, no window.
RadialField<double> white_field(const GridPtr<double>& grid,
                                std::uint64_t seed);

/// Initial data description shared by the experiments and the CLI.
struct DataSpec {
  enum class Kind { bump, mode, rough };
  Kind kind = Kind::rough;
  double amplitude = 1.0;
  std::uint64_t seed = 0;
  Bump bump{5.0, 1.0, 1.0};  // amplitude taken from `amplitude`
  Index mode = 1;            // one-based
  double delta = 0.01;
  double taper = 0;          // 0: rough data use L/2, others no window
  double velocity = 0;       // u_1 = velocity * u_0
};

std::string to_string(DataSpec::Kind kind);
DataSpec::Kind data_kind(const std::string& name);

/// (u_0, u_1) on the grid. s is the regularity used by rough data.
std::pair<RadialField<double>, RadialField<double>> make_data(
    const GridPtr<double>& grid, const DataSpec& spec, double s);

// ---- Inequalities ---------------------------------------------------------

struct WidthRatios {
  double width = 0;
  double max_ratio = 0;
  double min_ratio = 0;
  Index count = 0;
};

struct RadialSobolevReport {
  double exponent = 0;
  double max_ratio = 0;
  std::vector<WidthRatios> per_width;
  Index skipped = 0;
  /// Largest per-width maximum over the smallest.
  double width_spread() const;
};

/// r^{4/(p+2)} |u(r)| / (|u|_{L^p}^{p/(p+2)} |u|_{H^1}^{2/(p+2)}); zero
/// fields give NaN.
double radial_sobolev_ratio(const RadialField<double>& f, double p);

const std::vector<double>& sobolev_widths();  // {0.1, 0.2, 0.5, 1, 2}

/// `trials` random superpositions of width-sigma bumps for each sigma in
/// sobolev_widths().
RadialSobolevReport verify_radial_sobolev(double p, Index trials,
                                          std::uint64_t seed,
                                          GridPtr<double> grid = nullptr);

/// Slope of log(|P_N f|_{q_to} / |P_N f|_{q_from}) against log N, using the
/// largest ratio over `trials` white-spectrum fields at each N (one with
/// aligned phases, the others with seeded signs). The 3D prediction is
/// 3 (1/q_from - 1/q_to).
FitResult verify_bernstein(double q_from, double q_to,
                           const std::vector<double>& dyadics, Index trials,
                           std::uint64_t seed, GridPtr<double> grid = nullptr);

double bernstein_exponent(double q_from, double q_to);

// ---- Dispersive and Strichartz --------------------------------------------

struct StrichartzPair {
  double q = 2;   // time exponent
  double rx = 2;  // space exponent

  double beta() const;   // 1 - 2/rx
  double gamma() const;  // 1 - 2/rx
  /// rho + 3(1/2 - 1/rx) - 1/q - mu; zero on admissible triples.
  double admissibility_defect(double rho, double mu) const;
  bool is_endpoint() const { return q == 2 && rx > 4; }

  /// q = 2 pair with mu = 1 - 3/rx, rx > 4.
  static StrichartzPair endpoint(double rx);
  double endpoint_regularity() const;  // 1 - 3/rx
};

struct DecayMeasurement {
  std::vector<double> times;
  std::vector<double> norms;
  FitResult fit;
  double predicted_slope = 0;  // -gamma
};

/**
 * |U(t) f0| over the given times, U(t) = exp(i t sqrt(-Delta)). rx = inf
 * uses the grid sup of the modulus as a stand-in for the L^inf endpoint;
 * finite rx uses the Besov norm B^{-beta}_{rx,2}.
 */
DecayMeasurement measure_dispersive_decay(const RadialField<double>& f0,
                                          const StrichartzPair& pair,
                                          const std::vector<double>& times);

/// (int |u(t)|_{L^rx}^q dt)^{1/q} by the trapezoid rule over the snapshots.
double strichartz_norm(const Trajectory<double>& traj,
                       const StrichartzPair& pair);

// ---- Truncation experiment ------------------------------------------------

struct TruncationRow {
  int J = 0;
  double T = 0;
  double E0_v = 0;
  double E_T = 0;
  double hs_u0 = 0;
  double sup_hs_u = 0;
  double hsc_w0 = 0;
  double sup_hsc_w = 0;
  double st_w_L2Lq = 0;
  double st_w_wellposedness = 0;
  double st_w_power = 0;
  double initial_energy_ratio = 0;
  double smallness_scale = 0;
  std::vector<CoupledSample<double>> samples;
};

struct TruncationTable {
  std::vector<TruncationRow> rows;
  GrowthExponents predicted{};
  /// Slopes of log2 E_T and log2 E(v)(0) against J; NaN below three rows.
  double fitted_ET_slope = 0;
  double fitted_E0_slope = 0;
  /// Slope of log sup |u|_{H^s} against log T.
  double fitted_hs_slope = 0;
};

struct TruncationSetup {
  double length = 40.0;
  Index nodes = 8192;
  DataSpec data;
  StepperConfig<double> stepper;
  Index stride = 1;
  /// Horizon per run; <= 0 means t_window of that run's parameters.
  double horizon = 0;
  /// Runs are independent; rows are merged in input order.
  unsigned workers = 1;
};

/// Row for one finished coupled run.
TruncationRow truncation_row(const CoupledReport<double>& report);

/// Fill the predicted exponents and fitted slopes from the rows.
void fit_truncation_table(TruncationTable& table);

TruncationTable truncation_experiment(const std::vector<ParameterSet>& sets,
                                      const TruncationSetup& setup);

}  // namespace radwave

#endif  // RADWAVE_ANALYSIS_HPP
