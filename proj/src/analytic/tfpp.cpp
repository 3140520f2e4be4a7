#include <algorithm>
#include <cmath>
#include <limits>

#include "internal.hpp"
#include "yule/quadrature.hpp"

namespace yule::analytic {

using detail::check_fraction;
using detail::check_positive;
using detail::check_time;
using yule::detail::require;

namespace {

double log_ml_positive(double alpha, double beta, double z) {
  try {
    const double v = specfun::mittag_leffler(alpha, beta, z).value;
    return v > 0.0 ? std::log(v) : std::numeric_limits<double>::infinity();
  } catch (const NumericalError&) {
    return std::numeric_limits<double>::infinity();
  }
}

double tfpp_tail(double x, double alpha, std::uint64_t k) {
  return detail::chernoff_tail([&](double s) { return log_ml_positive(alpha, 1.0, x * std::expm1(s)); }, k);
}

double tfpp_term(double x, double alpha, std::uint64_t k) {
  const double kk = static_cast<double>(k);
  const double p =
      detail::prabhakar_scaled(alpha, alpha * kk + 1.0, kk + 1.0, -x, 1.0, x, kk, detail::kPmfAbsTol);
  return std::max(0.0, p);
}

void check_tfpp(double lambda, double alpha, double t) {
  check_positive(lambda, "lambda");
  check_fraction(alpha, "alpha");
  check_time(t);
}

}  // namespace

Pmf tfpp_pmf(double lambda, double alpha, double t, std::uint64_t k_max) {
  check_tfpp(lambda, alpha, t);
  Pmf out;
  out.probs.assign(k_max + 1, 0.0);
  if (t == 0.0) {
    out.probs[0] = 1.0;
    return out;
  }
  const double x = lambda * std::pow(t, alpha);
  for (std::uint64_t k = 0; k <= k_max; ++k) out.probs[k] = tfpp_term(x, alpha, k);
  out.truncation_tail_bound = tfpp_tail(x, alpha, k_max);
  return out;
}

Pmf tfpp_law(double lambda, double alpha, double t, const PmfOptions& opts) {
  check_tfpp(lambda, alpha, t);
  if (t == 0.0) return tfpp_pmf(lambda, alpha, t, 0);
  const double x = lambda * std::pow(t, alpha);
  Pmf out;
  double mass = 0.0;
  for (std::uint64_t k = 0; k <= opts.k_ceiling; ++k) {
    out.probs.push_back(tfpp_term(x, alpha, k));
    mass += out.probs.back();
    if (mass >= 1.0 - 1e-3 * opts.tol || k == opts.k_ceiling) {
      out.truncation_tail_bound = tfpp_tail(x, alpha, k);
      if (out.truncation_tail_bound <= opts.tol) break;
    }
  }
  return out;
}

double tfpp_mean(double lambda, double alpha, double t) {
  check_tfpp(lambda, alpha, t);
  return lambda * std::pow(t, alpha) / std::tgamma(alpha + 1.0);
}

double tfpp_variance(double lambda, double alpha, double t) {
  const double mean = tfpp_mean(lambda, alpha, t);
  const double x = lambda * std::pow(t, alpha);
  const double ga = std::tgamma(alpha);
  return mean + x * x / alpha * (1.0 / std::tgamma(2.0 * alpha) - 1.0 / (alpha * ga * ga));
}

double tfpp_pgf(double lambda, double alpha, double t, double u) {
  check_tfpp(lambda, alpha, t);
  require(u >= -1.0 && u <= 1.0, "u must lie in [-1, 1]");
  return specfun::mittag_leffler(alpha, 1.0, lambda * (u - 1.0) * std::pow(t, alpha), relaxed_options()).value;
}

double tfpp_interarrival_density(double lambda, double alpha, double t) {
  check_positive(lambda, "lambda");
  check_fraction(alpha, "alpha");
  check_positive(t, "t");
  const double x = lambda * std::pow(t, alpha);
  return lambda * std::pow(t, alpha - 1.0) * specfun::mittag_leffler(alpha, alpha, -x, relaxed_options()).value;
}

double tfpp_interarrival_survival(double lambda, double alpha, double t) {
  check_positive(lambda, "lambda");
  check_fraction(alpha, "alpha");
  check_time(t);
  const double x = lambda * std::pow(t, alpha);
  if (alpha == 1.0) return std::exp(-x);
  if (x <= specfun::EvalOptions{}.max_abs_z) return specfun::mittag_leffler(alpha, 1.0, -x).value;
  // E_alpha(-s^alpha) = int_0^inf e^{-r s} K(r) dr with the spectral density
  // K(r) = sin(alpha pi) r^{alpha-1} / (pi (r^{2 alpha} + 2 r^alpha cos(alpha pi) + 1));
  // r = u^{1/alpha} removes the endpoint singularity.
  const double s = std::pow(x, 1.0 / alpha);
  const double c = std::cos(alpha * M_PI);
  auto f = [&](double u) { return std::exp(-std::pow(u, 1.0 / alpha) * s) / (u * u + 2.0 * u * c + 1.0); };
  quad::Options qo;
  qo.abs_tol = 1e-15;
  qo.rel_tol = 1e-12;
  const quad::Result r = quad::integrate_to_infinity(f, 0.0, qo);
  return std::sin(alpha * M_PI) / (alpha * M_PI) * r.value;
}

Pmf yule_marginal_pmf(double lambda, double t, std::uint64_t k_max) {
  check_positive(lambda, "lambda");
  check_time(t);
  const double p = std::exp(-lambda * t);
  const double q = -std::expm1(-lambda * t);  // 1 - p
  Pmf out;
  out.probs.reserve(k_max + 1);
  double qk = 1.0;
  for (std::uint64_t k = 0; k <= k_max; ++k) {
    out.probs.push_back(p * qk);
    qk *= q;
  }
  out.truncation_tail_bound = qk;  // (1 - p)^{k_max + 1}
  return out;
}

Pmf yule_marginal_law(double lambda, double t, const PmfOptions& opts) {
  check_positive(lambda, "lambda");
  check_time(t);
  const double q = -std::expm1(-lambda * t);
  std::uint64_t k_max = 0;
  if (q > 0.0) {
    // smallest K with q^{K+1} <= tol
    const double k = std::ceil(std::log(opts.tol) / std::log(q)) - 1.0;
    k_max = static_cast<std::uint64_t>(std::clamp(k, 0.0, static_cast<double>(opts.k_ceiling)));
  }
  return yule_marginal_pmf(lambda, t, k_max);
}

double genus_time_cdf(double nu, double t, double x) {
  check_fraction(nu, "nu");
  check_positive(t, "t");
  require(x >= 0.0 && x <= t, "x must lie in [0, t]");
  return std::pow(x / t, nu);
}

double genus_time_pdf(double nu, double t, double x) {
  check_fraction(nu, "nu");
  check_positive(t, "t");
  require(x >= 0.0 && x <= t, "x must lie in [0, t]");
  if (x == 0.0) return nu == 1.0 ? 1.0 / t : std::numeric_limits<double>::infinity();
  return nu * std::pow(x, nu - 1.0) / std::pow(t, nu);
}

double inverse_stable_pdf(double alpha, double t, double xi) {
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  check_positive(t, "t");
  require(xi >= 0.0 && std::isfinite(xi), "xi must be finite and >= 0");
  const double s = std::pow(t, -alpha);
  return s * specfun::wright_phi(-alpha, 1.0 - alpha, -xi * s).value;
}

double inverse_stable_cdf(double alpha, double t, double xi) {
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  check_positive(t, "t");
  require(xi >= 0.0 && std::isfinite(xi), "xi must be finite and >= 0");
  return 1.0 - specfun::wright_phi(-alpha, 1.0, -xi * std::pow(t, -alpha)).value;
}

double mixing_w_pdf(double nu, double w) {
  require(nu > 0.0 && nu < 1.0, "nu must lie in (0, 1)");
  require(w >= 0.0 && std::isfinite(w), "w must be finite and >= 0");
  const double g = std::tgamma(1.0 + nu);
  return specfun::wright_phi(-nu, 1.0 - nu, -w / g).value / g;
}

}  // namespace yule::analytic
