#pragma once

// Globally adaptive 15-point Gauss-Kronrod quadrature. Used for the
// independent integral checks of the closed-form laws.

#include <functional>

namespace yule::quad {

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;
  int intervals = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

Result integrate(const Integrand& f, double a, double b, const Options& opts = {});

/// Integral over [a, inf) through x = a + u / (1 - u).
Result integrate_to_infinity(const Integrand& f, double a, const Options& opts = {});

}  // namespace yule::quad
