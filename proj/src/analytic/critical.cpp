#include <algorithm>
#include <cmath>

#include "internal.hpp"

namespace yule::analytic {

using detail::check_fraction;
using detail::check_positive;
using detail::check_time;

namespace {

specfun::EvalOptions tight_options() {
  specfun::EvalOptions opts;
  opts.tol = 1e-15;
  return opts;
}

// exp(log_factor) * 2F1(a, b; c; z)
double scaled_2f1(double log_factor, double a, double b, double c, double z) {
  const specfun::ScaledSeries s = specfun::gauss_2f1_scaled(a, b, c, z, tight_options());
  const double v = std::exp(log_factor + s.log_prefactor) * s.series.value;
  if (!std::isfinite(v)) throw NumericalError(NumericalError::Kind::overflow, "critical pmf overflows double");
  return v;
}

}  // namespace

double tn_pmf_critical(double lambda, double nu, double t, std::uint64_t k) {
  check_positive(lambda, "lambda");
  check_fraction(nu, "nu");
  check_time(t);
  if (t == 0.0) return k == 1 ? 1.0 : 0.0;
  const double x = lambda * t;
  if (k == 0) {
    // (x / (nu + 1)) 2F1(1, 2; nu + 2; -x)
    return std::max(0.0, scaled_2f1(std::log(x / (nu + 1.0)), 1.0, 2.0, nu + 2.0, -x));
  }
  // x^{k-1} Gamma(k) Gamma(nu + 1) / Gamma(nu + k) 2F1(k + 1, k; nu + k; -x)
  const double kk = static_cast<double>(k);
  const double log_factor =
      (kk - 1.0) * std::log(x) + std::lgamma(kk) + std::lgamma(nu + 1.0) - std::lgamma(nu + kk);
  return std::max(0.0, scaled_2f1(log_factor, kk + 1.0, kk, nu + kk, -x));
}

Moments tn_moments_critical(double lambda, double nu, double t) {
  check_positive(lambda, "lambda");
  check_fraction(nu, "nu");
  check_time(t);
  Moments m;
  m.mean = 1.0;
  m.variance = 2.0 * lambda * t / (nu + 1.0);
  m.second_moment = m.variance + 1.0;
  return m;
}

Pmf critical_bd_marginal_law(double lambda, double s, const PmfOptions& opts) {
  check_positive(lambda, "lambda");
  check_time(s);
  Pmf out;
  if (s == 0.0) {
    out.probs = {0.0, 1.0};
    return out;
  }
  // P(0) = r / (1 + r), P(k) = r^{k-1} / (1 + r)^{k+1}, P(X > k) = r^k / (1 + r)^{k+1}
  const double r = lambda * s;
  const double q = r / (1.0 + r);
  out.probs.push_back(q);
  double tail = 1.0 / (1.0 + r);  // P(X > 0)
  for (std::uint64_t k = 1; k <= opts.k_ceiling; ++k) {
    out.probs.push_back(tail / (1.0 + r));
    tail *= q;
    if (tail <= opts.tol) break;
  }
  out.truncation_tail_bound = tail;
  return out;
}

namespace detail {

double critical_survival(double lambda, double nu, double t, std::uint64_t k) {
  check_positive(lambda, "lambda");
  check_fraction(nu, "nu");
  check_time(t);
  if (t == 0.0) return k == 0 ? 1.0 : 0.0;
  // P(X_s > k) = r^k / (1 + r)^{k+1}, r = lambda s, integrated against the
  // genus age law: x^k Gamma(k+1) Gamma(nu+1) / Gamma(k+nu+1) 2F1(k+1, k+1; k+nu+1; -x).
  const double x = lambda * t;
  const double kk = static_cast<double>(k);
  const double log_factor =
      kk * std::log(x) + std::lgamma(kk + 1.0) + std::lgamma(nu + 1.0) - std::lgamma(kk + nu + 1.0);
  return std::clamp(scaled_2f1(log_factor, kk + 1.0, kk + 1.0, kk + nu + 1.0, -x), 0.0, 1.0);
}

}  // namespace detail
}  // namespace yule::analytic
