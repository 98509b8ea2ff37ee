#ifndef RADWAVE_PARAMETERS_HPP
#define RADWAVE_PARAMETERS_HPP

#include <cmath>
#include <sstream>
#include <string>

#include "radwave/errors.hpp"

namespace radwave {

/// Scaling-critical regularity 3/2 - 2/(p-1).
inline double critical_regularity(double p) { return 1.5 - 2.0 / (p - 1.0); }

/// Lower end of the admissible regularity range,
/// 1 - (p+3)(1 - s_c) / (4(2p - 3)).
inline double admissibility_threshold(double p) {
  return 1.0 -
         (p + 3.0) * (1.0 - critical_regularity(p)) / (4.0 * (2.0 * p - 3.0));
}

/// 4(2p-3)s - 4(2p-3) + (p+3)(1-s_c); positive exactly when s > s_min.
inline double growth_denominator(double p, double s) {
  const double a = 4.0 * (2.0 * p - 3.0);
  return a * s - a + (p + 3.0) * (1.0 - critical_regularity(p));
}

/// Best rational p/q with q <= 10000 reproducing x to 1e-12, as "p/q";
/// falls back to plain decimal.
inline std::string rational_string(double x) {
  for (long q = 1; q <= 10000; ++q) {
    const double num = std::round(x * static_cast<double>(q));
    if (std::abs(num / static_cast<double>(q) - x) < 1e-12) {
      std::ostringstream os;
      if (q == 1)
        os << static_cast<long>(num);
      else
        os << static_cast<long>(num) << '/' << q;
      return os.str();
    }
  }
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

/// Power p, regularity s and truncation level J of one experiment.
struct ParameterSet {
  double p = 4.0;
  double s = 0.96;
  int J = 5;

  double critical() const { return critical_regularity(p); }
  double threshold() const { return admissibility_threshold(p); }

  /// Inside the open range 3 < p < 5 of the growth theorem. The formulas are
  /// continuous at 3 and 5, so the endpoints are still accepted elsewhere.
  bool in_open_power_range() const { return p > 3.0 && p < 5.0; }

  void require_power() const {
    if (!(p >= 3.0 && p <= 5.0))
      throw ConfigError("power p must lie in [3, 5], got " + std::to_string(p));
  }

  /// s in (s_min, 1), required before launching a truncation run.
  void require_launchable() const {
    require_power();
    if (!(s > threshold()))
      throw AdmissibilityError("s = " + std::to_string(s) +
                               " is not admissible: s ≤ s_min = " +
                               rational_string(threshold()) + " (" +
                               std::to_string(threshold()) + ")");
    if (!(s < 1.0))
      throw AdmissibilityError("s = " + std::to_string(s) +
                               " must be below 1");
  }
};

struct GrowthExponents {
  double critical;         // s_c
  double threshold;        // s_min
  double energy_growth;    // E_T ~ T^{energy_growth}
  double theorem_growth;   // |u|_{H^s} ~ T^{theorem_growth}
};

/**
 * Exponents of the energy bound for the low-frequency part and of the
 * H^s growth bound, both as powers of the window length T:
 *
 *   energy_growth  = (p+3)(1-s) / D,
 *   theorem_growth = 2(1-s) + [7p - 3 - (6p-6)s](1-s) / (2 D),
 *
 * with D = growth_denominator(p, s). At p = 3 theorem_growth reduces to
 * 3(1-s)(2s-1)/(4s-3).
 */
inline GrowthExponents derived_exponents(const ParameterSet& ps) {
  ps.require_power();
  const double d = growth_denominator(ps.p, ps.s);
  if (!(d > 0.0))
    throw AdmissibilityError("s = " + std::to_string(ps.s) +
                             " is not above s_min = " +
                             rational_string(ps.threshold()));
  const double p = ps.p, s = ps.s;
  GrowthExponents e{};
  e.critical = ps.critical();
  e.threshold = ps.threshold();
  e.energy_growth = (p + 3.0) * (1.0 - s) / d;
  e.theorem_growth =
      2.0 * (1.0 - s) + (7.0 * p - 3.0 - (6.0 * p - 6.0) * s) * (1.0 - s) /
                            (2.0 * d);
  return e;
}

/// Time window 2^{(2J/(p+3)) D} balancing the energy estimate. Equals 1 for
/// every J at s = s_min; below s_min it is an admissibility error.
inline double t_window(const ParameterSet& ps) {
  ps.require_power();
  double d = growth_denominator(ps.p, ps.s);
  if (d < 0.0) {
    if (d > -1e-14)
      d = 0.0;
    else
      throw AdmissibilityError("time window needs s >= s_min = " +
                               rational_string(ps.threshold()) + ", got s = " +
                               std::to_string(ps.s));
  }
  return std::exp2(2.0 * ps.J / (ps.p + 3.0) * d);
}

}  // namespace radwave

#endif  // RADWAVE_PARAMETERS_HPP
