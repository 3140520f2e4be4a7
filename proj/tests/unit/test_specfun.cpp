#include <cmath>

#include "doctest.h"
#include "yule/errors.hpp"
#include "yule/quadrature.hpp"
#include "yule/specfun.hpp"

using namespace yule;
using namespace yule::specfun;

namespace {

// Reference values were computed once with 400-digit series in mpmath and
// frozen here.
constexpr double kE = 2.718281828459045235;
constexpr double kSqrtPi = 1.772453850905516027;

void check_bound(const SeriesResult& r, double exact) {
  CHECK(std::abs(r.value - exact) <= r.abs_error_bound + 4e-16 * std::abs(exact));
}

}  // namespace

TEST_CASE("gamma on both half-lines") {
  CHECK(specfun::gamma(0.5) == doctest::Approx(kSqrtPi).epsilon(1e-15));
  CHECK(specfun::gamma(5.0) == doctest::Approx(24.0).epsilon(1e-15));
  CHECK(specfun::gamma(-1.5) == doctest::Approx(4.0 * kSqrtPi / 3.0).epsilon(1e-14));
  CHECK(specfun::gamma(-0.5) == doctest::Approx(-2.0 * kSqrtPi).epsilon(1e-14));
  CHECK_THROWS_AS(specfun::gamma(0.0), NumericalError);
  CHECK_THROWS_AS(specfun::gamma(-3.0), NumericalError);
}

TEST_CASE("sin_pi is exact at integers") {
  CHECK(sin_pi(3.0) == 0.0);
  CHECK(sin_pi(-2.0) == 0.0);
  CHECK(sin_pi(0.5) == 1.0);
}

TEST_CASE("Mittag-Leffler reductions and frozen values") {
  SUBCASE("exponential") {
    const auto r = mittag_leffler(1.0, 1.0, 1.0);
    CHECK(r.value == doctest::Approx(kE).epsilon(1e-12));
    check_bound(r, kE);
  }
  SUBCASE("alpha 1/2 is e^{z^2} erfc(-z)") {
    const double exact = kE * std::erfc(1.0);
    const auto r = mittag_leffler(0.5, 1.0, -1.0);
    CHECK(r.value == doctest::Approx(exact).epsilon(1e-12));
    check_bound(r, exact);
    const auto s = mittag_leffler(0.5, 1.0, -10.0);
    CHECK(s.value == doctest::Approx(0.056140992743822585858).epsilon(1e-12));
  }
  SUBCASE("two-parameter") {
    CHECK(mittag_leffler(0.7, 1.3, -5.0).value == doctest::Approx(0.13592283992138555121).epsilon(1e-12));
    CHECK(mittag_leffler(0.9, 0.8, 3.0).value == doctest::Approx(42.084351931864519025).epsilon(1e-12));
  }
  SUBCASE("E_{1,2}(z) = (e^z - 1) / z far out") {
    EvalOptions o;
    o.max_abs_z = 2000.0;
    o.max_terms = 20000;
    const auto r = mittag_leffler(1.0, 2.0, -1000.0, o);
    CHECK(r.value == doctest::Approx(1e-3).epsilon(1e-10));
  }
  SUBCASE("z = 0") { CHECK(mittag_leffler(0.4, 2.0, 0.0).value == doctest::Approx(1.0)); }
}

TEST_CASE("Mittag-Leffler validation") {
  CHECK_THROWS_AS(mittag_leffler(1.5, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(mittag_leffler(0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(mittag_leffler(0.5, 1.0, std::nan("")), DomainError);
}

TEST_CASE("Prabhakar") {
  SUBCASE("gamma = 1 is Mittag-Leffler") {
    CHECK(prabhakar(0.7, 1.3, 1.0, -5.0).value == doctest::Approx(0.13592283992138555121).epsilon(1e-12));
  }
  SUBCASE("z = 0 gives 1 / Gamma(beta)") {
    CHECK(prabhakar(0.7, 1.5, 3.0, 0.0).value == doctest::Approx(1.1283791670955126).epsilon(1e-15));
  }
  SUBCASE("frozen value with sign change") {
    CHECK(prabhakar(0.6, 1.2, 2.5, -3.0).value == doctest::Approx(-0.0012674668888961853937).epsilon(1e-10));
  }
  SUBCASE("Poisson reduction x^k E^{k+1}_{1,k+1}(-x) = e^{-x} x^k / k!") {
    const double x = 2.5;
    double fact = 1.0;
    for (int k = 0; k <= 8; ++k) {
      if (k) fact *= k;
      const double lhs = std::pow(x, k) * prabhakar(1.0, k + 1.0, k + 1.0, -x).value;
      CHECK(lhs == doctest::Approx(std::exp(-x) * std::pow(x, k) / fact).epsilon(1e-12));
    }
  }
  SUBCASE("precise variant agrees") {
    const auto p = prabhakar_precise(0.6, 1.2, 2.5, -3.0, 1e-25);
    CHECK(p.value.to_double() == doctest::Approx(-0.0012674668888961853937).epsilon(1e-15));
    CHECK(p.abs_error_bound <= 1e-24);
  }
}

TEST_CASE("Wright function") {
  SUBCASE("phi(-1/2, 1/2; -1) = e^{-1/4} / sqrt(pi)") {
    const double exact = std::exp(-0.25) / kSqrtPi;
    const auto r = wright_phi(-0.5, 0.5, -1.0);
    CHECK(r.value == doctest::Approx(exact).epsilon(1e-12));
    check_bound(r, exact);
  }
  CHECK(wright_phi(-0.3, 0.7, -2.0).value == doctest::Approx(0.16840030622678312198).epsilon(1e-12));
  CHECK_THROWS_AS(wright_phi(-1.5, 0.5, -1.0), DomainError);
}

TEST_CASE("Gauss 2F1") {
  CHECK(gauss_2f1(1.0, 1.0, 2.0, -1.0).value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(gauss_2f1(3.0, 2.0, 2.5, -10.0).value == doctest::Approx(0.00407611576228064782874).epsilon(1e-12));
  CHECK(gauss_2f1(21.0, 20.0, 20.5, -10.0).value == doctest::Approx(4.96267070977145e-22).epsilon(1e-10));
  SUBCASE("scaled form") {
    const auto s = gauss_2f1_scaled(21.0, 20.0, 20.5, -10.0);
    CHECK(std::exp(s.log_prefactor) * s.series.value == doctest::Approx(4.96267070977145e-22).epsilon(1e-10));
  }
  SUBCASE("z = 0") { CHECK(gauss_2f1(2.0, 3.0, 4.0, 0.0).value == 1.0); }
}

TEST_CASE("batch evaluation matches single calls, including exact argument products") {
  MittagLefflerBatch batch(0.7, 1.5);
  for (int j = 1; j <= 6; ++j) {
    const double single = mittag_leffler(0.7, 1.5, -1.3 * j).value;
    CHECK(batch(-1.3, j, 1e-20).value.to_double() == doctest::Approx(single).epsilon(1e-11));
  }
  CHECK(batch(-2.0, 1e-20).value.to_double() == doctest::Approx(mittag_leffler(0.7, 1.5, -2.0).value).epsilon(1e-11));
}

TEST_CASE("quadrature") {
  SUBCASE("endpoint singularity") {
    const auto r = quad::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-10));
  }
  SUBCASE("half line") {
    const auto r = quad::integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("Mittag-Leffler Laplace transform, int e^{-x} E_a(-x^a) dx = 1/2") {
    const auto r = quad::integrate_to_infinity(
        [](double x) {
          // e^{-x} < 1e-200 beyond this point
          return x > 500.0 ? 0.0 : std::exp(-x) * mittag_leffler(0.6, 1.0, -std::pow(x, 0.6)).value;
        }, 0.0,
        {1e-11, 1e-11, 4000});
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-9));
  }
}
