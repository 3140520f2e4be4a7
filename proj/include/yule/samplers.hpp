#pragma once

// Exact random-variate generators. Every sampler draws from an RngStream,
// a counter-based Philox4x32-10 generator keyed by the seed, with the
// stream id occupying the upper half of the counter so that distinct
// stream ids never overlap.

#include <array>
#include <cstdint>
#include <limits>

namespace yule::samplers {

/// Philox4x32 with 10 rounds.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);

class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();

  // UniformRandomBitGenerator
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
};

double sample_uniform(RngStream& rng);
double sample_exponential(double rate, RngStream& rng);
/// Inversion below mean 10, Hormann's PTRS transformed rejection above.
std::uint64_t sample_poisson(double mean, RngStream& rng);

/// D_1 of the alpha-stable subordinator, E exp(-s D_1) = exp(-s^alpha).
double sample_stable_subordinator_unit(double alpha, RngStream& rng);

/// E_t = (t / D_1)^alpha. alpha = 1 returns t.
double sample_inverse_stable(double alpha, double t, RngStream& rng);

/// W = Gamma(1 + nu) E_1, unit mean. nu = 1 returns 1.
double sample_mixing_w(double nu, RngStream& rng);

/// Waiting time with survival E_alpha(-lambda t^alpha); exponential at alpha = 1.
double sample_ml_waiting_time(double alpha, double lambda, RngStream& rng);

/// T with P(T <= x) = (x / t)^nu on [0, t].
double sample_genus_birth_time(double nu, double t, RngStream& rng);

}  // namespace yule::samplers
