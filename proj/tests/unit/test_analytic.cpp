#include <cmath>
#include <numeric>

#include "doctest.h"
#include "yule/analytic.hpp"
#include "yule/errors.hpp"
#include "yule/quadrature.hpp"

using namespace yule;
using namespace yule::analytic;
using processes::ModelParams;

namespace {

// Frozen oracles: 400-digit mpmath series for the Mittag-Leffler family,
// mpmath quadrature of the defining integral for the critical model.
constexpr double kLinear[] = {0.37965754213346995314, 0.045938985160211584851, 0.015182526476226519761};  // k = 1, 5, 10
constexpr double kConstant[] = {0.37965754213346995314, 0.26902976378204463912, 0.048560097824822254448};  // k = 1, 2, 5
constexpr double kCritical[] = {0.71801691727700406511, 0.1068319235602496605, 0.032210145046811950185,
                                0.0041362894775875202892};  // k = 0, 1, 3, 10
constexpr double kNonlinear[] = {0.44567597259325632354, 0.15411263095891812433, 0.085492876699986338417};
constexpr double kTfpp[] = {0.39961197811559938437, 0.30056192341289101057, 0.080074702796816918626};  // k = 0, 1, 3

ModelParams model(processes::SpeciesRates rates, double nu, double beta) {
  ModelParams p;
  p.nu = nu;
  p.beta = beta;
  p.species = std::move(rates);
  return p;
}

double total(const Pmf& p) { return p.listed_mass() + p.truncation_tail_bound; }

}  // namespace

TEST_CASE("Pmf accessors") {
  Pmf p;
  p.support_start = 2;
  p.probs = {0.25, 0.5};
  CHECK(p.support_end() == 4);
  CHECK(p.at(1) == 0.0);
  CHECK(p.at(3) == 0.5);
  CHECK(p.listed_mass() == 0.75);
}

TEST_CASE("time-fractional Poisson law") {
  SUBCASE("alpha = 1 is Poisson") {
    const Pmf p = tfpp_pmf(1.0, 1.0, 2.0, 15);
    double f = 1.0;
    for (int k = 0; k <= 15; ++k) {
      if (k) f *= k;
      CHECK(p.at(k) == doctest::Approx(std::exp(-2.0) * std::pow(2.0, k) / f).epsilon(1e-12));
    }
  }
  SUBCASE("frozen values") {
    const Pmf p = tfpp_pmf(1.0, 0.7, 1.0, 3);
    CHECK(p.at(0) == doctest::Approx(kTfpp[0]).epsilon(1e-12));
    CHECK(p.at(1) == doctest::Approx(kTfpp[1]).epsilon(1e-12));
    CHECK(p.at(3) == doctest::Approx(kTfpp[2]).epsilon(1e-12));
  }
  SUBCASE("moments agree with the pmf") {
    const Pmf p = tfpp_law(1.3, 0.6, 2.0, {1e-14, 400});
    CHECK(total(p) == doctest::Approx(1.0).epsilon(1e-12));
    double m1 = 0, m2 = 0;
    for (std::uint64_t k = 0; k < p.support_end(); ++k) {
      m1 += k * p.at(k);
      m2 += double(k) * k * p.at(k);
    }
    CHECK(tfpp_mean(1.3, 0.6, 2.0) == doctest::Approx(m1).epsilon(1e-10));
    CHECK(tfpp_variance(1.3, 0.6, 2.0) == doctest::Approx(m2 - m1 * m1).epsilon(1e-9));
  }
  SUBCASE("pgf at u = 1 and u = 0") {
    CHECK(tfpp_pgf(1.0, 0.6, 2.0, 1.0) == doctest::Approx(1.0));
    CHECK(tfpp_pgf(1.0, 0.6, 2.0, 0.0) == doctest::Approx(tfpp_pmf(1.0, 0.6, 2.0, 0).at(0)).epsilon(1e-12));
  }
  SUBCASE("waiting time density integrates to the distribution function") {
    const auto r = quad::integrate([](double x) { return tfpp_interarrival_density(1.0, 0.6, x); }, 0.0, 2.0);
    CHECK(r.value == doctest::Approx(1.0 - tfpp_interarrival_survival(1.0, 0.6, 2.0)).epsilon(1e-8));
  }
  SUBCASE("survival far beyond the series budget") {
    // E_{1/2}(-60) = e^{3600} erfc(60); E_{0.7}(-80) by 400-digit series
    CHECK(tfpp_interarrival_survival(60.0, 0.5, 1.0) == doctest::Approx(0.0094018542751763885888).epsilon(1e-10));
    CHECK(tfpp_interarrival_survival(80.0, 0.7, 1.0) == doctest::Approx(0.004220571527873940851).epsilon(1e-10));
    CHECK(tfpp_interarrival_survival(2.0, 1.0, 40.0) == doctest::Approx(std::exp(-80.0)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(tfpp_pmf(1.0, 1.2, 1.0, 3), DomainError);
  CHECK_THROWS_AS(tfpp_pmf(1.0, 0.5, -1.0, 3), DomainError);
}

TEST_CASE("Yule marginal is geometric") {
  const Pmf p = yule_marginal_law(1.0, 1.0, {1e-12, 500});
  CHECK(total(p) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.at(0) == doctest::Approx(std::exp(-1.0)));
  CHECK(p.at(3) == doctest::Approx(std::exp(-1.0) * std::pow(1 - std::exp(-1.0), 3)).epsilon(1e-14));
}

TEST_CASE("random clock laws") {
  CHECK(genus_time_cdf(0.25, 2.0, 0.5) == doctest::Approx(std::pow(0.25, 0.25)));
  CHECK(genus_time_pdf(1.0, 2.0, 0.5) == doctest::Approx(0.5));
  SUBCASE("inverse stable density integrates to its cdf") {
    for (double alpha : {0.3, 0.7}) {
      const auto r = quad::integrate([&](double x) { return inverse_stable_pdf(alpha, 1.5, x); }, 0.0, 1.2);
      CHECK(r.value == doctest::Approx(inverse_stable_cdf(alpha, 1.5, 1.2)).epsilon(1e-9));
    }
  }
  SUBCASE("mixing variable has unit mass and mean") {
    // nu = 1/2: half-normal, negligible beyond w = 10
    quad::Options o{1e-10, 1e-10, 4000};
    auto pdf = [](double w) { return mixing_w_pdf(0.5, w); };
    CHECK(pdf(1.0) == doctest::Approx(std::exp(-1.0 / (4.0 * 0.25 * M_PI)) / (std::sqrt(M_PI) * std::tgamma(1.5))).epsilon(1e-12));
    CHECK(quad::integrate(pdf, 0.0, 10.0, o).value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(quad::integrate([&](double w) { return w * pdf(w); }, 0.0, 10.0, o).value == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("species count, linear rates") {
  const double beta = 0.7, nu = 0.5, t = 2.0;
  CHECK(tn_pmf_linear(1.0, beta, nu, t, 1) == doctest::Approx(kLinear[0]).epsilon(1e-12));
  CHECK(tn_pmf_linear(1.0, beta, nu, t, 5) == doctest::Approx(kLinear[1]).epsilon(1e-12));
  CHECK(tn_pmf_linear(1.0, beta, nu, t, 10) == doctest::Approx(kLinear[2]).epsilon(1e-12));
  const Pmf p = tn_pmf(model(processes::Linear{1.0}, nu, beta), t, 10);
  CHECK(p.at(5) == doctest::Approx(kLinear[1]).epsilon(1e-12));
  CHECK(p.at(0) == 0.0);
  SUBCASE("moments match the law when the tail is negligible") {
    const Pmf q = tn_pmf(model(processes::Linear{1.0}, 0.6, 1.0), 1.0, 150);
    CHECK(q.truncation_tail_bound < 1e-12);
    double m1 = 0, m2 = 0;
    for (std::uint64_t k = 1; k < q.support_end(); ++k) {
      m1 += k * q.at(k);
      m2 += double(k) * k * q.at(k);
    }
    const Moments m = tn_moments_linear(1.0, 1.0, 0.6, 1.0);
    CHECK(m.mean == doctest::Approx(m1).epsilon(1e-10));
    CHECK(m.second_moment == doctest::Approx(m2).epsilon(1e-9));
    CHECK(m.variance == doctest::Approx(m2 - m1 * m1).epsilon(1e-9));
  }
}

TEST_CASE("species count, constant rates") {
  const double beta = 0.7, nu = 0.5, t = 2.0;
  CHECK(tn_pmf_constant(1.0, beta, nu, t, 1) == doctest::Approx(kConstant[0]).epsilon(1e-12));
  CHECK(tn_pmf_constant(1.0, beta, nu, t, 2) == doctest::Approx(kConstant[1]).epsilon(1e-12));
  CHECK(tn_pmf_constant(1.0, beta, nu, t, 5) == doctest::Approx(kConstant[2]).epsilon(1e-12));
  const Pmf law = tn_law(model(processes::Constant{1.0}, nu, beta), t, {1e-13, 200});
  double m1 = 0, m2 = 0;
  for (std::uint64_t k = 1; k < law.support_end(); ++k) {
    m1 += k * law.at(k);
    m2 += double(k) * k * law.at(k);
  }
  const Moments m = tn_moments_constant(1.0, beta, nu, t);
  CHECK(m.mean == doctest::Approx(m1).epsilon(1e-9));
  CHECK(m.variance == doctest::Approx(m2 - m1 * m1).epsilon(1e-8));
}

TEST_CASE("species count, distinct nonlinear rates") {
  const std::vector<double> rates{1.0, 2.5, 4.0};
  for (std::uint64_t k = 1; k <= 3; ++k)
    CHECK(tn_pmf_nonlinear(rates, 0.8, 0.6, 1.5, k) == doctest::Approx(kNonlinear[k - 1]).epsilon(1e-12));
  SUBCASE("rates k lambda reduce to the linear formula") {
    const std::vector<double> lin{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    for (std::uint64_t k = 1; k <= 6; ++k)
      CHECK(tn_pmf_nonlinear(lin, 0.7, 0.5, 2.0, k) == doctest::Approx(tn_pmf_linear(1.0, 0.7, 0.5, 2.0, k)).epsilon(1e-11));
  }
  SUBCASE("species process with beta = 1, rates k: geometric") {
    const std::vector<double> lin{1.0, 2.0, 3.0, 4.0, 5.0};
    const double q = 1.0 - std::exp(-0.7);
    for (std::uint64_t k = 1; k <= 5; ++k)
      CHECK(species_pmf_nonlinear(lin, 1.0, 0.7, k) == doctest::Approx(std::exp(-0.7) * std::pow(q, k - 1.0)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(tn_pmf_nonlinear(rates, 0.8, 0.6, 1.5, 4), DomainError);
}

TEST_CASE("species count, critical birth-death") {
  CHECK(tn_pmf_critical(1.0, 0.5, 5.0, 0) == doctest::Approx(kCritical[0]).epsilon(1e-12));
  CHECK(tn_pmf_critical(1.0, 0.5, 5.0, 1) == doctest::Approx(kCritical[1]).epsilon(1e-12));
  CHECK(tn_pmf_critical(1.0, 0.5, 5.0, 3) == doctest::Approx(kCritical[2]).epsilon(1e-12));
  CHECK(tn_pmf_critical(1.0, 0.5, 5.0, 10) == doctest::Approx(kCritical[3]).epsilon(1e-12));
  const Moments m = tn_moments_critical(1.0, 1.0, 3.0);
  CHECK(m.mean == 1.0);
  CHECK(m.variance == doctest::Approx(3.0));
  SUBCASE("survival matches one minus the listed mass") {
    const Pmf p = tn_pmf(model(processes::CriticalBD{1.0}, 0.5, 1.0), 5.0, 30);
    CHECK(p.support_start == 0);
    CHECK(p.truncation_tail_bound == doctest::Approx(1.0 - p.listed_mass()).epsilon(1e-9));
  }
  SUBCASE("transient law of one population") {
    const Pmf p = critical_bd_marginal_law(1.0, 2.0, {1e-12, 1000});
    CHECK(total(p) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.at(0) == doctest::Approx(2.0 / 3.0));
    CHECK(p.at(2) == doctest::Approx(2.0 / 27.0));
  }
}

TEST_CASE("laws are normalized including their tail bound") {
  const PmfOptions opts{1e-8, 400};
  for (const auto& p : {model(processes::Linear{1.0}, 0.4, 1.0), model(processes::Linear{1.0}, 0.5, 0.7),
                        model(processes::Constant{2.0}, 0.5, 0.7), model(processes::CriticalBD{1.0}, 0.5, 1.0)}) {
    const Pmf law = tn_law(p, 2.0, opts);
    CHECK(std::abs(total(law) - 1.0) <= 1e-6);
  }
}

TEST_CASE("survival function") {
  const auto p = model(processes::Linear{1.0}, 0.5, 1.0);
  const Pmf law = tn_pmf(p, 1.0, 20);
  CHECK(tn_survival(p, 1.0, 20) == doctest::Approx(1.0 - law.listed_mass()).epsilon(1e-9));
  // constant rates: a Chernoff bound, valid but not tight
  const auto c = model(processes::Constant{1.0}, 0.5, 0.7);
  double head = 0.0;
  for (std::uint64_t k = 1; k <= 5; ++k) head += tn_pmf_constant(1.0, 0.7, 0.5, 2.0, k);
  const double bound = tn_survival(c, 2.0, 5);
  CHECK(bound >= 1.0 - head - 1e-12);
  CHECK(bound <= 1.0);
}

TEST_CASE("large-t term for constant rates") {
  const AsymptoticTerm a = tn_asymptotic_constant(1.0, 0.7, 0.5, 100.0, 2);
  CHECK(a.gamma_neg_beta_k == doctest::Approx(2.6592718728800305).epsilon(1e-12));  // Gamma(0.6) / 0.56
  CHECK(a.sign == 1);
  CHECK(a.value == doctest::Approx(std::tgamma(1.5) / (std::pow(100.0, 0.7) * 2.6592718728800305)).epsilon(1e-12));
  CHECK_THROWS_AS(tn_asymptotic_constant(1.0, 0.5, 0.5, 10.0, 2), DomainError);
}
