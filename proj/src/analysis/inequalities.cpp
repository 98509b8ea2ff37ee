#include <algorithm>
#include <cmath>
#include <limits>

#include "radwave/analysis.hpp"

namespace radwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

GridPtr<double> default_grid(GridPtr<double> grid) {
  return grid ? grid : make_grid(40.0, 8191);
}

}  // namespace

double RadialSobolevReport::width_spread() const {
  double hi = 0, lo = kInf;
  for (const auto& w : per_width) {
    if (w.count == 0) continue;
    hi = std::max(hi, w.max_ratio);
    lo = std::min(lo, w.max_ratio);
  }
  return lo > 0 && lo < kInf ? hi / lo : kInf;
}

double radial_sobolev_ratio(const RadialField<double>& f, double p) {
  const double a = 4.0 / (p + 2.0);
  const double lhs = weighted_sup(f, a);
  const double lp = lp_norm(f, p), h1 = sobolev_norm(f, 1.0);
  const double rhs = std::pow(lp, p / (p + 2)) * std::pow(h1, 2 / (p + 2));
  if (!(rhs > 0)) return std::numeric_limits<double>::quiet_NaN();
  return lhs / rhs;
}

const std::vector<double>& sobolev_widths() {
  static const std::vector<double> widths{0.1, 0.2, 0.5, 1.0, 2.0};
  return widths;
}

RadialSobolevReport verify_radial_sobolev(double p, Index trials,
                                          std::uint64_t seed,
                                          GridPtr<double> grid) {
  if (!(p >= 1)) throw ConfigError("radial Sobolev check needs p >= 1");
  if (trials < 1) throw ConfigError("radial Sobolev check needs trials >= 1");
  grid = default_grid(std::move(grid));
  RadialSobolevReport report;
  report.exponent = p;
  std::mt19937_64 rng(seed);
  for (double width : sobolev_widths()) {
    BumpFamily family;
    family.width_lo = family.width_hi = width;
    WidthRatios w;
    w.width = width;
    w.min_ratio = kInf;
    for (Index t = 0; t < trials; ++t) {
      const auto f = bump_field(grid, random_bumps(*grid, family, rng));
      const double ratio = radial_sobolev_ratio(f, p);
      if (!std::isfinite(ratio)) {
        ++report.skipped;
        continue;
      }
      w.max_ratio = std::max(w.max_ratio, ratio);
      w.min_ratio = std::min(w.min_ratio, ratio);
      ++w.count;
    }
    report.max_ratio = std::max(report.max_ratio, w.max_ratio);
    report.per_width.push_back(w);
  }
  return report;
}

double bernstein_exponent(double q_from, double q_to) {
  return 3.0 * (1.0 / q_from - 1.0 / q_to);
}

FitResult verify_bernstein(double q_from, double q_to,
                           const std::vector<double>& dyadics, Index trials,
                           std::uint64_t seed, GridPtr<double> grid) {
  if (!(q_from >= 1) || !(q_to >= q_from))
    throw ConfigError("Bernstein check needs 1 <= q_from <= q_to");
  if (trials < 1) throw ConfigError("Bernstein check needs trials >= 1");
  grid = default_grid(std::move(grid));
  for (double n : dyadics) detail::require_in_band(*grid, n, 0);
  // Trial 0 has all phases aligned, which piles the blocks up at the
  // obstacle and is the extremal case for the sup norm; the rest are signed.
  std::vector<RadialField<double>> fields{inverse(SpectralField<double>(
      grid, Vector<double>::Ones(grid->size())))};
  for (Index t = 1; t < trials; ++t)
    fields.push_back(white_field(grid, seed + static_cast<std::uint64_t>(t)));
  std::vector<double> ratios;
  for (double n : dyadics) {
    double worst = 0;
    for (const auto& f : fields) {
      const auto block = lp_project(f, n);
      worst = std::max(worst, lp_norm(block, q_to) / lp_norm(block, q_from));
    }
    ratios.push_back(worst);
  }
  return fit_power_law(dyadics, ratios);
}

}  // namespace radwave
