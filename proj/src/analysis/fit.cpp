#include <cmath>

#include <Eigen/QR>

#include "radwave/analysis.hpp"

namespace radwave {

FitResult fit_power_law(const std::vector<double>& x,
                        const std::vector<double>& y) {
  if (x.size() != y.size())
    throw InputError("power-law fit needs as many x as y values");
  if (x.size() < 3) throw InputError("power-law fit needs at least 3 points");
  const Index n = static_cast<Index>(x.size());
  Eigen::MatrixXd a(n, 2);
  Eigen::VectorXd b(n);
  for (Index i = 0; i < n; ++i) {
    if (!(x[i] > 0) || !(y[i] > 0) || !std::isfinite(x[i]) ||
        !std::isfinite(y[i]))
      throw InputError("power-law fit needs positive finite data, got (" +
                       std::to_string(x[i]) + ", " + std::to_string(y[i]) + ")");
    a(i, 0) = std::log(x[i]);
    a(i, 1) = 1.0;
    b[i] = std::log(y[i]);
  }
  if (a.col(0).maxCoeff() == a.col(0).minCoeff())
    throw InputError("power-law fit needs at least two distinct x values");
  const Eigen::Vector2d coef = a.colPivHouseholderQr().solve(b);
  FitResult fit;
  fit.slope = coef[0];
  fit.intercept = coef[1];
  fit.residual = std::sqrt((a * coef - b).squaredNorm() / double(n));
  fit.count = n;
  return fit;
}

}  // namespace radwave
