#include <cmath>
#include <string>

#include "yule/errors.hpp"
#include "yule/samplers.hpp"

namespace yule::samplers {

using yule::detail::require;

double sample_uniform(RngStream& rng) { return rng.uniform(); }

double sample_exponential(double rate, RngStream& rng) {
  require(rate > 0.0 && std::isfinite(rate), "sample_exponential: rate must be positive");
  return -std::log(rng.uniform()) / rate;
}

namespace {

std::uint64_t poisson_inversion(double mean, RngStream& rng) {
  double u = rng.uniform();
  double p = std::exp(-mean);
  std::uint64_t k = 0;
  // The cap only matters if u lands in the rounding residue of the CDF.
  while (u > p && k < 1000) {
    u -= p;
    ++k;
    p *= mean / static_cast<double>(k);
  }
  return k;
}

// W. Hormann, "The transformed rejection method for generating Poisson
// random variables", Insurance: Mathematics and Economics 12 (1993).
std::uint64_t poisson_ptrs(double mean, RngStream& rng) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mean + k * loglam - std::lgamma(k + 1.0)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

}  // namespace

std::uint64_t sample_poisson(double mean, RngStream& rng) {
  require(mean >= 0.0 && std::isfinite(mean), "sample_poisson: mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  if (mean < 10.0) return poisson_inversion(mean, rng);
  return poisson_ptrs(mean, rng);
}

double sample_stable_subordinator_unit(double alpha, RngStream& rng) {
  require(alpha > 0.0 && alpha < 1.0, "sample_stable_subordinator_unit: alpha must lie in (0, 1)");
  // Kanter's representation: D = (A(U) / E)^{(1 - alpha) / alpha} with
  // A(u) = [sin(alpha pi u)^alpha sin((1 - alpha) pi u)^{1 - alpha} / sin(pi u)]^{1 / (1 - alpha)}.
  const double u = rng.uniform();
  const double e = -std::log(rng.uniform());
  const double log_a = (alpha * std::log(std::sin(alpha * M_PI * u)) +
                        (1.0 - alpha) * std::log(std::sin((1.0 - alpha) * M_PI * u)) -
                        std::log(std::sin(M_PI * u))) /
                       (1.0 - alpha);
  return std::exp((1.0 - alpha) / alpha * (log_a - std::log(e)));
}

double sample_inverse_stable(double alpha, double t, RngStream& rng) {
  require(alpha > 0.0 && alpha <= 1.0, "sample_inverse_stable: alpha must lie in (0, 1]");
  require(t > 0.0 && std::isfinite(t), "sample_inverse_stable: t must be positive");
  if (alpha == 1.0) return t;
  const double d = sample_stable_subordinator_unit(alpha, rng);
  return std::pow(t / d, alpha);
}

double sample_mixing_w(double nu, RngStream& rng) {
  require(nu > 0.0 && nu <= 1.0, "sample_mixing_w: nu must lie in (0, 1]");
  if (nu == 1.0) return 1.0;
  return std::tgamma(1.0 + nu) * sample_inverse_stable(nu, 1.0, rng);
}

double sample_ml_waiting_time(double alpha, double lambda, RngStream& rng) {
  require(alpha > 0.0 && alpha <= 1.0, "sample_ml_waiting_time: alpha must lie in (0, 1]");
  require(lambda > 0.0 && std::isfinite(lambda), "sample_ml_waiting_time: lambda must be positive");
  if (alpha == 1.0) return sample_exponential(lambda, rng);
  const double e = -std::log(rng.uniform());
  const double d = sample_stable_subordinator_unit(alpha, rng);
  return std::pow(e / lambda, 1.0 / alpha) * d;
}

double sample_genus_birth_time(double nu, double t, RngStream& rng) {
  require(nu > 0.0 && nu <= 1.0, "sample_genus_birth_time: nu must lie in (0, 1]");
  require(t > 0.0 && std::isfinite(t), "sample_genus_birth_time: t must be positive");
  return t * std::pow(rng.uniform(), 1.0 / nu);
}

}  // namespace yule::samplers
