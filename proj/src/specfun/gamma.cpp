#include <cmath>
#include <limits>
#include <string>

#include "yule/specfun.hpp"

namespace yule::specfun {

double sin_pi(double x) {
  if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
  // Reduce to r in [-1, 1]; x - 2 round(x / 2) is exact in binary.
  double r = x - 2.0 * std::round(0.5 * x);
  double sign = 1.0;
  if (r < 0.0) {
    r = -r;
    sign = -1.0;
  }
  if (r > 0.5) r = 1.0 - r;  // sin(pi r) = sin(pi (1 - r))
  if (r == 0.0) return 0.0;
  return sign * std::sin(M_PI * r);
}

double gamma(double x) {
  if (std::isnan(x)) throw DomainError("gamma: argument is NaN");
  if (x <= 0.0 && x == std::floor(x)) {
    throw NumericalError(NumericalError::Kind::pole,
                         "gamma: pole at non-positive integer x = " + std::to_string(x));
  }
  if (x >= 0.5) return std::tgamma(x);
  // Reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x).
  return M_PI / (sin_pi(x) * std::tgamma(1.0 - x));
}

}  // namespace yule::specfun
