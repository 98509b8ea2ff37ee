#include <cmath>
#include <limits>

#include "radwave/analysis.hpp"

namespace radwave {

double StrichartzPair::beta() const { return 1.0 - 2.0 / rx; }
double StrichartzPair::gamma() const { return 1.0 - 2.0 / rx; }

double StrichartzPair::admissibility_defect(double rho, double mu) const {
  return rho + 3.0 * (0.5 - 1.0 / rx) - 1.0 / q - mu;
}

StrichartzPair StrichartzPair::endpoint(double rx) {
  if (!(rx > 4)) throw ConfigError("endpoint Strichartz pairs need rx > 4");
  return {2.0, rx};
}

double StrichartzPair::endpoint_regularity() const { return 1.0 - 3.0 / rx; }

DecayMeasurement measure_dispersive_decay(const RadialField<double>& f0,
                                          const StrichartzPair& pair,
                                          const std::vector<double>& times) {
  if (!(pair.rx >= 2)) throw ConfigError("dispersive decay needs rx >= 2");
  if (times.empty()) throw ConfigError("dispersive decay needs sample times");
  const double window = f0.grid()->length() - support_extent(f0);
  for (double t : times)
    if (!(t > 0) || !(t < window))
      throw ConfigError("time " + std::to_string(t) +
                        " outside the reflection-free window (0, " +
                        std::to_string(window) + ")");
  DecayMeasurement out;
  out.times = times;
  out.predicted_slope = -pair.gamma();
  for (double t : times) {
    const auto u = half_wave(f0, t);
    if (std::isinf(pair.rx)) {
      const Vector<double> mod =
          (u.re.physical().array().square() + u.im.physical().array().square())
              .sqrt()
              .matrix();
      out.norms.push_back(mod.maxCoeff());
    } else {
      out.norms.push_back(besov_norm(u.re, u.im, -pair.beta(), pair.rx, 2.0));
    }
  }
  if (times.size() >= 3) out.fit = fit_power_law(out.times, out.norms);
  return out;
}

}  // namespace radwave
