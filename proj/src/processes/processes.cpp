#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "yule/errors.hpp"
#include "yule/processes.hpp"

namespace yule::processes {

using samplers::sample_exponential;
using yule::detail::require;

namespace {

constexpr double kCountCeiling = 1.8e19;  // below 2^64

std::uint64_t to_count(double k) {
  if (!(k < kCountCeiling)) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(k);
}

double rate_at(const SpeciesRates& rates, std::uint64_t k) {
  if (const auto* m = std::get_if<Linear>(&rates)) return m->lambda * static_cast<double>(k);
  if (const auto* m = std::get_if<Constant>(&rates)) return m->lambda;
  if (const auto* m = std::get_if<NonlinearDistinct>(&rates)) {
    if (k > m->rates.size()) {
      throw RateTableExhausted("population reached " + std::to_string(k) + " but only " +
                               std::to_string(m->rates.size()) + " birth rates are defined");
    }
    return m->rates[k - 1];
  }
  throw DomainError("pure birth simulation does not apply to the critical birth-death model");
}

// Linear: geometric with success probability exp(-lambda s), by inversion.
std::uint64_t linear_marginal(double lambda, double s, RngStream& rng) {
  const double x = lambda * s;
  if (x == 0.0) return 1;
  const double log_q = std::log(-std::expm1(-x));  // log(1 - e^{-x})
  if (log_q == 0.0) return std::numeric_limits<std::uint64_t>::max();
  return 1 + to_count(std::floor(std::log(rng.uniform()) / log_q));
}

}  // namespace

std::uint64_t simulate_pure_birth(const SpeciesRates& rates, double duration, RngStream& rng) {
  require(duration >= 0.0 && std::isfinite(duration), "duration must be finite and >= 0");
  std::uint64_t k = 1;
  double clock = 0.0;
  for (;;) {
    clock += sample_exponential(rate_at(rates, k), rng);
    if (clock > duration) return k;
    ++k;
  }
}

std::uint64_t simulate_fractional_pure_birth_marginal(const ModelParams& params, double age, RngStream& rng) {
  require(age >= 0.0 && std::isfinite(age), "age must be finite and >= 0");
  require(!is_critical(params.species), "the critical model has no pure birth marginal");
  if (age == 0.0) return 1;
  const double tau = params.beta == 1.0 ? age : samplers::sample_inverse_stable(params.beta, age, rng);
  if (const auto* m = std::get_if<Linear>(&params.species)) return linear_marginal(m->lambda, tau, rng);
  if (const auto* m = std::get_if<Constant>(&params.species)) {
    return 1 + samplers::sample_poisson(m->lambda * tau, rng);
  }
  return simulate_pure_birth(params.species, tau, rng);
}

std::uint64_t simulate_critical_bd_marginal(double lambda, double age, RngStream& rng) {
  require(lambda > 0.0 && std::isfinite(lambda), "lambda must be positive");
  require(age >= 0.0 && std::isfinite(age), "age must be finite and >= 0");
  if (age == 0.0) return 1;
  // P(X >= k + 1) = r^k / (1 + r)^{k + 1}; return the smallest k with this <= V.
  const double r = lambda * age;
  const double v = rng.uniform();
  const double k = std::ceil(std::log(v * (1.0 + r)) / -std::log1p(1.0 / r));
  return k <= 0.0 ? 0 : to_count(k);
}

MppDraw simulate_mpp_utt(const ModelParams& params, double t, RngStream& rng, GenusClock clock) {
  require(t > 0.0 && std::isfinite(t), "t must be positive");
  const double lambda_g = params.genus_intensity;
  require(lambda_g > 0.0 && std::isfinite(lambda_g), "genus_intensity must be positive");
  MppDraw out;
  if (clock == GenusClock::yule_example) {
    const double q = std::expm1(lambda_g * t);
    const double w = sample_exponential(1.0, rng);
    out.count = samplers::sample_poisson(w * q, rng);
    out.birth_times.reserve(out.count);
    for (std::uint64_t i = 0; i < out.count; ++i) {
      out.birth_times.push_back(std::log1p(rng.uniform() * q) / lambda_g);
    }
  } else {
    require(params.nu > 0.0 && params.nu <= 1.0, "nu must lie in (0, 1]");
    const double q = lambda_g * std::pow(t, params.nu) / std::tgamma(1.0 + params.nu);
    const double w = samplers::sample_mixing_w(params.nu, rng);
    out.count = samplers::sample_poisson(w * q, rng);
    out.birth_times.reserve(out.count);
    for (std::uint64_t i = 0; i < out.count; ++i) {
      out.birth_times.push_back(samplers::sample_genus_birth_time(params.nu, t, rng));
    }
  }
  std::sort(out.birth_times.begin(), out.birth_times.end());
  return out;
}

std::uint64_t simulate_tfpp_count(double lambda, double alpha, double t, RngStream& rng) {
  require(t >= 0.0 && std::isfinite(t), "t must be finite and >= 0");
  std::uint64_t n = 0;
  double clock = samplers::sample_ml_waiting_time(alpha, lambda, rng);
  while (clock <= t) {
    ++n;
    clock += samplers::sample_ml_waiting_time(alpha, lambda, rng);
  }
  return n;
}

std::uint64_t sample_tN(const ModelParams& params, double t, RngStream& rng) {
  const double birth = samplers::sample_genus_birth_time(params.nu, t, rng);
  const double age = std::max(0.0, t - birth);
  if (const auto* m = std::get_if<CriticalBD>(&params.species)) {
    return simulate_critical_bd_marginal(m->lambda, age, rng);
  }
  return simulate_fractional_pure_birth_marginal(params, age, rng);
}

SystemSnapshot simulate_system(const ModelParams& params, double t, RngStream& rng) {
  params.validate();
  MppDraw genera = simulate_mpp_utt(params, t, rng);
  SystemSnapshot snap;
  snap.t = t;
  snap.species_counts.reserve(genera.count);
  for (double birth : genera.birth_times) {
    const double age = std::max(0.0, t - birth);
    if (const auto* m = std::get_if<CriticalBD>(&params.species)) {
      snap.species_counts.push_back(simulate_critical_bd_marginal(m->lambda, age, rng));
    } else {
      snap.species_counts.push_back(simulate_fractional_pure_birth_marginal(params, age, rng));
    }
  }
  snap.genus_birth_times = std::move(genera.birth_times);
  return snap;
}

}  // namespace yule::processes
