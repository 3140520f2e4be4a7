#pragma once

// Simulators for the genus point process, the species birth processes and
// the species count of a uniformly chosen genus.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "yule/samplers.hpp"

namespace yule::processes {

using samplers::RngStream;

/// lambda_k = k lambda.
struct Linear {
  double lambda = 1.0;
};
/// lambda_k = lambda.
struct Constant {
  double lambda = 1.0;
};
/// lambda_1 .. lambda_K, pairwise distinct. A population reaching K + 1 has
/// no defined rate and raises RateTableExhausted.
struct NonlinearDistinct {
  std::vector<double> rates;
};
/// Linear birth-death with equal birth and death rate lambda.
struct CriticalBD {
  double lambda = 1.0;
};

using SpeciesRates = std::variant<Linear, Constant, NonlinearDistinct, CriticalBD>;

struct ModelParams {
  double genus_intensity = 1.0;  // lambda_g in q(t) = lambda_g t^nu / Gamma(1 + nu)
  double nu = 1.0;
  double beta = 1.0;
  SpeciesRates species = Linear{};

  /// Throws DomainError naming the offending field.
  void validate() const;
};

std::string species_model_name(const SpeciesRates& rates);
bool is_critical(const SpeciesRates& rates);

struct SystemSnapshot {
  double t = 0.0;
  std::vector<double> genus_birth_times;
  std::vector<std::uint64_t> species_counts;
};

/// Event-driven pure birth process started from one individual.
std::uint64_t simulate_pure_birth(const SpeciesRates& rates, double duration, RngStream& rng);

/// Y at time E_age: the pure birth process run on the inverse-stable clock
/// with exponent beta. Linear and Constant use their exact closed-form
/// marginals; NonlinearDistinct runs the event-driven path.
std::uint64_t simulate_fractional_pure_birth_marginal(const ModelParams& params, double age, RngStream& rng);

/// Exact inverse-CDF draw of a critical birth-death population at `age`.
std::uint64_t simulate_critical_bd_marginal(double lambda, double age, RngStream& rng);

enum class GenusClock {
  fractional,    // q(t) = lambda_g t^nu / Gamma(1 + nu), W = Gamma(1 + nu) E_1
  yule_example,  // q(t) = exp(lambda_g t) - 1, W ~ Exp(1)
};

struct MppDraw {
  std::uint64_t count = 0;
  std::vector<double> birth_times;  // sorted
};

/// M_t = N_{W q(t)}: mixed Poisson count plus order-statistics birth times.
MppDraw simulate_mpp_utt(const ModelParams& params, double t, RngStream& rng,
                         GenusClock clock = GenusClock::fractional);

/// Count of the time-fractional Poisson process at t, built as a renewal
/// process with Mittag-Leffler waiting times.
std::uint64_t simulate_tfpp_count(double lambda, double alpha, double t, RngStream& rng);

/// Species count of a genus whose birth time follows (x / t)^nu.
std::uint64_t sample_tN(const ModelParams& params, double t, RngStream& rng);

SystemSnapshot simulate_system(const ModelParams& params, double t, RngStream& rng);

}  // namespace yule::processes
