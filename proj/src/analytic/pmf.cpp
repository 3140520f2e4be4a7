#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "internal.hpp"

namespace yule::analytic {

double Pmf::at(std::uint64_t k) const {
  if (k < support_start || k >= support_end()) return 0.0;
  return probs[static_cast<std::size_t>(k - support_start)];
}

double Pmf::listed_mass() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }

specfun::EvalOptions relaxed_options() {
  specfun::EvalOptions opts;
  opts.max_abs_z = 500.0;
  opts.max_terms = 20000;
  return opts;
}

namespace detail {

using yule::detail::require;

void check_time(double t) { require(t >= 0.0 && std::isfinite(t), "t must be finite and >= 0"); }

void check_fraction(double x, const char* name) {
  require(x > 0.0 && x <= 1.0, std::string(name) + " must lie in (0, 1]");
}

void check_positive(double x, const char* name) {
  require(x > 0.0 && std::isfinite(x), std::string(name) + " must be positive");
}

double prabhakar_scaled(double nu, double beta, double gamma, double z, double factor, double base, double expo,
                        double abs_tol) {
  const double log_scale = std::log(std::fabs(factor)) + expo * std::log(base);
  const double inner_tol = std::max(std::exp(std::log(abs_tol) - log_scale), 1e-300);
  const specfun::PreciseResult r = specfun::prabhakar_precise(nu, beta, gamma, z, inner_tol, relaxed_options());
  const long bits = std::max<long>(r.value.precision(), 64);
  BigFloat scale = pow(BigFloat(base, bits), BigFloat(expo, bits));
  scale *= factor;
  const double value = (r.value * scale).to_double();
  if (!std::isfinite(value)) {
    throw NumericalError(NumericalError::Kind::overflow, "pmf value overflows double");
  }
  return value;
}

double chernoff_tail(const std::function<double(double)>& log_pgf, std::uint64_t k) {
  const double kk = static_cast<double>(k) + 1.0;
  auto objective = [&](double s) {
    const double g = log_pgf(s);
    return std::isfinite(g) ? g - kk * s : std::numeric_limits<double>::infinity();
  };
  // The objective is convex in s = log u (a cumulant generating function
  // minus a linear term): coarse grid, then golden-section refinement.
  double best_s = 0.0;
  double best = 0.0;  // s = 0 gives the trivial bound 1
  double prev = 0.0;
  for (double s = 1e-3; s < 50.0; s *= 1.25) {
    const double f = objective(s);
    if (f < best) {
      best = f;
      best_s = s;
    }
    if (!std::isfinite(f) || f > prev + 1.0) break;
    prev = f;
  }
  if (best_s > 0.0) {
    double lo = best_s / 1.25, hi = best_s * 1.25;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = objective(x1), f2 = objective(x2);
    for (int i = 0; i < 40; ++i) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = objective(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = objective(x2);
      }
    }
    best = std::min({best, f1, f2});
  }
  // Slack for the relative error of the pgf evaluation.
  return std::min(1.0, std::exp(best) * (1.0 + 1e-9));
}

}  // namespace detail
}  // namespace yule::analytic
