#include <algorithm>
#include <cmath>
#include <functional>

#include "doctest.h"
#include "yule/errors.hpp"
#include "yule/processes.hpp"
#include "yule/specfun.hpp"

using namespace yule;
using namespace yule::processes;

namespace {

struct Estimate {
  double mean = 0.0;
  double se = 0.0;
};

Estimate average(int n, RngStream& rng, const std::function<double(RngStream&)>& f) {
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = f(rng);
    s += x;
    s2 += x * x;
  }
  const double m = s / n;
  return {m, std::sqrt((s2 / n - m * m) / n)};
}

void check_within(const Estimate& e, double exact) {
  INFO("estimate " << e.mean << " +- " << e.se << ", exact " << exact);
  CHECK(std::abs(e.mean - exact) <= 4.0 * e.se + 1e-12);
}

ModelParams model(SpeciesRates rates, double nu = 1.0, double beta = 1.0, double genus = 1.0) {
  ModelParams p;
  p.genus_intensity = genus;
  p.nu = nu;
  p.beta = beta;
  p.species = std::move(rates);
  return p;
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(model(Linear{1.0}, 0.5, 0.5).validate());
  CHECK_THROWS_AS(model(Linear{1.0}, 0.0).validate(), DomainError);
  CHECK_THROWS_AS(model(Linear{1.0}, 1.0, 1.5).validate(), DomainError);
  CHECK_THROWS_AS(model(Linear{-1.0}).validate(), DomainError);
  CHECK_THROWS_AS(model(NonlinearDistinct{{1.0, 2.0, 1.0}}).validate(), DomainError);
  CHECK_THROWS_AS(model(NonlinearDistinct{{}}).validate(), DomainError);
  CHECK_THROWS_AS(model(CriticalBD{1.0}, 0.5, 0.7).validate(), DomainError);
  CHECK_THROWS_AS(model(Linear{1.0}, 1.0, 1.0, 0.0).validate(), DomainError);
  CHECK(species_model_name(Constant{}) == "constant");
  CHECK(is_critical(CriticalBD{}));
}

TEST_CASE("classical pure birth processes") {
  RngStream rng(1, 0);
  SUBCASE("linear: geometric with mean e^{lambda t}") {
    check_within(average(50000, rng, [](RngStream& r) { return double(simulate_pure_birth(Linear{0.8}, 2.0, r)); }),
                 std::exp(1.6));
  }
  SUBCASE("constant: 1 + Poisson") {
    check_within(average(50000, rng, [](RngStream& r) { return double(simulate_pure_birth(Constant{1.5}, 2.0, r)); }),
                 4.0);
  }
  SUBCASE("finite rate table") {
    // rates 5, 6: P(Y_t = 1) = e^{-5 t}
    check_within(average(50000, rng,
                         [](RngStream& r) {
                           try {
                             return simulate_pure_birth(NonlinearDistinct{{5.0, 6.0}}, 0.1, r) == 1 ? 1.0 : 0.0;
                           } catch (const RateTableExhausted&) {
                             return 0.0;
                           }
                         }),
                 std::exp(-0.5));
    CHECK_THROWS_AS(
        [&] {
          for (int i = 0; i < 1000; ++i) simulate_pure_birth(NonlinearDistinct{{5.0, 6.0}}, 10.0, rng);
        }(),
        RateTableExhausted);
  }
  CHECK_THROWS_AS(simulate_pure_birth(CriticalBD{1.0}, 1.0, rng), DomainError);
  CHECK(simulate_pure_birth(Linear{1.0}, 0.0, rng) == 1);
}

TEST_CASE("fractional pure birth marginals") {
  RngStream rng(2, 0);
  const double beta = 0.6, age = 1.5;
  SUBCASE("linear mean E_beta(lambda t^beta)") {
    const double exact = specfun::mittag_leffler(beta, 1.0, std::pow(age, beta)).value;
    check_within(average(100000, rng,
                         [&](RngStream& r) {
                           return double(simulate_fractional_pure_birth_marginal(model(Linear{1.0}, 1.0, beta), age, r));
                         }),
                 exact);
  }
  SUBCASE("constant mean 1 + lambda t^beta / Gamma(1 + beta)") {
    check_within(average(100000, rng,
                         [&](RngStream& r) {
                           return double(simulate_fractional_pure_birth_marginal(model(Constant{2.0}, 1.0, beta), age, r));
                         }),
                 1.0 + 2.0 * std::pow(age, beta) / std::tgamma(1.0 + beta));
  }
  SUBCASE("nonlinear P(Y = 1) = E_beta(-lambda_1 t^beta)") {
    const auto p = model(NonlinearDistinct{{1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0}}, 1.0, beta);
    const double exact = specfun::mittag_leffler(beta, 1.0, -std::pow(0.3, beta)).value;
    check_within(average(50000, rng,
                         [&](RngStream& r) {
                           try {
                             return simulate_fractional_pure_birth_marginal(p, 0.3, r) == 1 ? 1.0 : 0.0;
                           } catch (const RateTableExhausted&) {  // long clock excursions
                             return 0.0;
                           }
                         }),
                 exact);
  }
}

TEST_CASE("critical birth-death marginal") {
  RngStream rng(3, 0);
  const double lambda = 0.7, s = 2.0, r = lambda * s;
  check_within(average(100000, rng, [&](RngStream& g) { return double(simulate_critical_bd_marginal(lambda, s, g)); }), 1.0);
  check_within(average(100000, rng, [&](RngStream& g) { return simulate_critical_bd_marginal(lambda, s, g) == 0 ? 1.0 : 0.0; }),
               r / (1.0 + r));
  check_within(average(100000, rng, [&](RngStream& g) { return simulate_critical_bd_marginal(lambda, s, g) == 2 ? 1.0 : 0.0; }),
               r / std::pow(1.0 + r, 3));
}

TEST_CASE("mixed Poisson genus process") {
  RngStream rng(4, 0);
  const double nu = 0.6, t = 2.0, lg = 1.3;
  const auto p = model(Linear{1.0}, nu, 1.0, lg);
  SUBCASE("fractional clock: mean lambda_g t^nu / Gamma(1 + nu)") {
    check_within(average(100000, rng, [&](RngStream& r) { return double(simulate_mpp_utt(p, t, r).count); }),
                 lg * std::pow(t, nu) / std::tgamma(1.0 + nu));
  }
  SUBCASE("Yule example: mean e^{lambda t} - 1") {
    check_within(
        average(100000, rng, [&](RngStream& r) { return double(simulate_mpp_utt(p, 1.0, r, GenusClock::yule_example).count); }),
        std::expm1(lg));
  }
  SUBCASE("birth times are sorted order statistics on [0, t]") {
    for (int i = 0; i < 200; ++i) {
      const auto d = simulate_mpp_utt(p, t, rng);
      CHECK(d.birth_times.size() == d.count);
      CHECK(std::is_sorted(d.birth_times.begin(), d.birth_times.end()));
      for (double b : d.birth_times) CHECK((b >= 0.0 && b <= t));
    }
  }
  SUBCASE("renewal tfPp has the same mean") {
    check_within(average(50000, rng, [&](RngStream& r) { return double(simulate_tfpp_count(lg, nu, t, r)); }),
                 lg * std::pow(t, nu) / std::tgamma(1.0 + nu));
  }
}

TEST_CASE("species count of a random genus") {
  RngStream rng(6, 0);
  const double nu = 0.5, beta = 0.8, t = 1.5;
  // E tN = Gamma(nu + 1) E_{beta,nu+1}(lambda t^beta) for linear rates
  const double exact = std::tgamma(nu + 1.0) * specfun::mittag_leffler(beta, nu + 1.0, std::pow(t, beta)).value;
  check_within(average(100000, rng, [&](RngStream& r) { return double(sample_tN(model(Linear{1.0}, nu, beta), t, r)); }),
               exact);
  check_within(average(100000, rng, [&](RngStream& r) { return double(sample_tN(model(CriticalBD{1.0}, nu), t, r)); }), 1.0);
}

TEST_CASE("system snapshot") {
  RngStream rng(8, 0);
  const auto snap = simulate_system(model(Constant{1.0}, 0.7, 0.9, 5.0), 2.0, rng);
  CHECK(snap.t == 2.0);
  CHECK(snap.genus_birth_times.size() == snap.species_counts.size());
  CHECK(std::is_sorted(snap.genus_birth_times.begin(), snap.genus_birth_times.end()));
  for (auto c : snap.species_counts) CHECK(c >= 1);
  RngStream again(8, 0);
  const auto snap2 = simulate_system(model(Constant{1.0}, 0.7, 0.9, 5.0), 2.0, again);
  CHECK(snap2.species_counts == snap.species_counts);
}
