#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "internal.hpp"

namespace yule::analytic {

using detail::check_fraction;
using detail::check_positive;
using detail::check_time;
using processes::Constant;
using processes::CriticalBD;
using processes::Linear;
using processes::NonlinearDistinct;
using specfun::MittagLefflerBatch;
using specfun::PreciseResult;
using yule::detail::require;

namespace {

void check_species(double beta, double nu, double t) {
  check_fraction(beta, "beta");
  check_fraction(nu, "nu");
  check_time(t);
}

double finish(const BigFloat& v) {
  const double d = v.to_double();
  if (!std::isfinite(d)) throw NumericalError(NumericalError::Kind::overflow, "pmf value overflows double");
  return d;
}

// E_j = E_{beta,b}(-lambda j t^beta), j = 0..n, for the alternating binomial
// sums of the linear model. Every entry is accurate to abs_tol.
class LinearTable {
 public:
  LinearTable(double lambda, double beta, double nu, double t, std::uint64_t n) : nu_(nu), n_(n) {
    // |sum_j C(n, j) e_j| <= 2^n max |e_j|; keep the combined error below kPmfAbsTol.
    const double tol = std::ldexp(detail::kPmfAbsTol / std::tgamma(nu + 1.0), -static_cast<int>(n) - 1);
    MittagLefflerBatch ml(beta, nu + 1.0, relaxed_options());
    const double x = lambda * std::pow(t, beta);
    values_.reserve(n + 1);
    for (std::uint64_t j = 0; j <= n; ++j) {
      PreciseResult r = ml(-x, static_cast<double>(j), tol);
      bits_ = std::max(bits_, r.value.precision());
      values_.push_back(std::move(r.value));
    }
    bits_ += static_cast<long>(n) + 32;
  }

  // Gamma(nu + 1) sum_{j=0}^{m} C(m, j) (-1)^j E_{j + shift}
  double binomial_sum(std::uint64_t m, std::uint64_t shift) const {
    require(m + shift <= n_, "linear table too short");
    BigFloat sum(bits_);
    BigFloat c(1.0, bits_);
    for (std::uint64_t j = 0; j <= m; ++j) {
      BigFloat term = c * values_[j + shift];
      if (j % 2 == 0) {
        sum += term;
      } else {
        sum -= term;
      }
      c *= static_cast<double>(m - j);
      c /= static_cast<double>(j + 1);
    }
    sum *= tgamma(BigFloat(nu_ + 1.0, bits_));
    return finish(sum);
  }

  // P(tN = k), k >= 1
  double pmf(std::uint64_t k) const { return binomial_sum(k - 1, 1); }
  // P(tN > k)
  double survival(std::uint64_t k) const { return binomial_sum(k, 0); }

 private:
  double nu_;
  std::uint64_t n_;
  long bits_ = 64;
  std::vector<BigFloat> values_;
};

// Sum over m <= k of c_m E_{beta,b}(-lambda_m t^beta) with the divided-difference
// weights of the distinct-rates pure birth process. With survival = true the
// weights are prod_{l != m, l <= k} lambda_l / (lambda_l - lambda_m), giving
// P(X <= k); otherwise prod_{j < k} lambda_j / prod_{l != m}(lambda_l - lambda_m),
// giving P(X = k).
double divided_difference(const std::vector<double>& rates, double beta, double b, double t, std::uint64_t k,
                          bool survival) {
  const std::size_t n = static_cast<std::size_t>(k);
  // Size the working precision from the weights' magnitudes.
  std::vector<double> log_w(n, 0.0);
  double log_wsum = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < n; ++m) {
    double lw = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      if (l == m) continue;
      lw -= std::log(std::fabs(rates[l] - rates[m]));
      if (survival) lw += std::log(rates[l]);
    }
    if (!survival) {
      for (std::size_t j = 0; j + 1 < n; ++j) lw += std::log(rates[j]);
    }
    log_w[m] = lw;
    log_wsum = std::max(log_wsum, lw) + std::log1p(std::exp(std::min(log_wsum, lw) - std::max(log_wsum, lw)));
  }
  const double scale = std::tgamma(b);  // Gamma(nu + 1), or 1 for the species marginal
  const double tol = detail::kPmfAbsTol / (scale * std::exp(log_wsum) * 2.0);
  const long bits = std::max<long>(64, static_cast<long>(std::ceil(log_wsum / std::log(2.0))) + 96);

  MittagLefflerBatch ml(beta, b, relaxed_options());
  const double tb = std::pow(t, beta);
  BigFloat sum(bits);
  for (std::size_t m = 0; m < n; ++m) {
    const PreciseResult e = ml(-rates[m], tb, std::max(tol, 1e-300));
    const long wb = std::max(bits, e.value.precision());
    BigFloat w(1.0, wb);
    for (std::size_t l = 0; l < n; ++l) {
      if (l == m) continue;
      BigFloat d(rates[l], wb);
      d -= rates[m];
      w /= d;
      if (survival) w *= rates[l];
    }
    if (!survival) {
      for (std::size_t j = 0; j + 1 < n; ++j) w *= rates[j];
    }
    sum += w * e.value;
  }
  sum *= scale;
  return finish(sum);
}

void check_rates(const std::vector<double>& rates, std::uint64_t k) {
  require(k >= 1, "k must be >= 1");
  require(k <= rates.size(), "k exceeds the number of defined rates");
  processes::ModelParams probe;
  probe.species = NonlinearDistinct{std::vector<double>(rates.begin(), rates.begin() + static_cast<long>(k))};
  probe.validate();
}

double log_ml_positive(double alpha, double beta, double z) {
  try {
    const double v = specfun::mittag_leffler(alpha, beta, z).value;
    return v > 0.0 ? std::log(v) : std::numeric_limits<double>::infinity();
  } catch (const NumericalError&) {
    return std::numeric_limits<double>::infinity();
  }
}

double constant_survival(double lambda, double beta, double nu, double t, std::uint64_t k) {
  if (t == 0.0) return k >= 1 ? 0.0 : 1.0;
  // E u^{tN} = u Gamma(nu + 1) E_{beta,nu+1}(lambda (u - 1) t^beta)
  const double x = lambda * std::pow(t, beta);
  const double lg = std::lgamma(nu + 1.0);
  return detail::chernoff_tail(
      [&](double s) { return s + lg + log_ml_positive(beta, nu + 1.0, x * std::expm1(s)); }, k);
}

// Grows K by doubling until the tail is below tol or K hits the ceiling.
template <class Build>
Pmf grow_law(std::uint64_t first, std::uint64_t start_k, const PmfOptions& opts, Build build) {
  std::uint64_t k = std::min<std::uint64_t>(start_k, opts.k_ceiling);
  for (;;) {
    Pmf pmf = build(k);
    pmf.support_start = first;
    if (pmf.truncation_tail_bound <= opts.tol || k >= opts.k_ceiling) return pmf;
    k = std::min<std::uint64_t>(2 * k, opts.k_ceiling);
  }
}

}  // namespace

double tn_pmf_nonlinear(const std::vector<double>& rates, double beta, double nu, double t, std::uint64_t k) {
  check_species(beta, nu, t);
  check_rates(rates, k);
  if (t == 0.0) return k == 1 ? 1.0 : 0.0;
  return divided_difference(rates, beta, nu + 1.0, t, k, false);
}

double species_pmf_nonlinear(const std::vector<double>& rates, double beta, double t, std::uint64_t k) {
  check_fraction(beta, "beta");
  check_time(t);
  check_rates(rates, k);
  if (t == 0.0) return k == 1 ? 1.0 : 0.0;
  return divided_difference(rates, beta, 1.0, t, k, false);
}

double tn_pmf_linear(double lambda, double beta, double nu, double t, std::uint64_t k) {
  check_positive(lambda, "lambda");
  check_species(beta, nu, t);
  require(k >= 1, "k must be >= 1");
  if (t == 0.0) return k == 1 ? 1.0 : 0.0;
  return LinearTable(lambda, beta, nu, t, k).pmf(k);
}

Moments tn_moments_linear(double lambda, double beta, double nu, double t) {
  check_positive(lambda, "lambda");
  check_species(beta, nu, t);
  const double x = lambda * std::pow(t, beta);
  if (x > 30.0) {
    throw NumericalError(NumericalError::Kind::overflow,
                         "moments: lambda t^beta = " + std::to_string(x) + " exceeds the cap 30");
  }
  const double g = std::tgamma(nu + 1.0);
  Moments m;
  m.mean = g * specfun::mittag_leffler(beta, nu + 1.0, x).value;
  m.second_moment = 2.0 * g * specfun::mittag_leffler(beta, nu + 1.0, 2.0 * x).value - m.mean;
  m.variance = m.second_moment - m.mean * m.mean;
  return m;
}

Moments tn_moments_constant(double lambda, double beta, double nu, double t) {
  check_positive(lambda, "lambda");
  check_species(beta, nu, t);
  const double x = lambda * std::pow(t, beta);
  const double g = std::tgamma(nu + 1.0);
  const double d1 = x * g / std::tgamma(beta + nu + 1.0);            // x M'(0)
  const double d2 = 2.0 * x * x * g / std::tgamma(2.0 * beta + nu + 1.0);  // x^2 M''(0)
  Moments m;
  m.mean = 1.0 + d1;                      // G'(1)
  m.second_moment = 2.0 * d1 + d2 + m.mean;  // G''(1) + G'(1)
  m.variance = m.second_moment - m.mean * m.mean;
  return m;
}

double tn_pmf_constant(double lambda, double beta, double nu, double t, std::uint64_t k) {
  check_positive(lambda, "lambda");
  check_species(beta, nu, t);
  require(k >= 1, "k must be >= 1");
  if (t == 0.0) return k == 1 ? 1.0 : 0.0;
  const double kk = static_cast<double>(k);
  const double x = lambda * std::pow(t, beta);
  const double p = detail::prabhakar_scaled(beta, beta * kk - beta + nu + 1.0, kk, -x, std::tgamma(nu + 1.0), x,
                                            kk - 1.0, detail::kPmfAbsTol);
  return std::max(0.0, p);
}

AsymptoticTerm tn_asymptotic_constant(double lambda, double beta, double nu, double t, std::uint64_t k) {
  check_positive(lambda, "lambda");
  check_species(beta, nu, t);
  check_positive(t, "t");
  require(k >= 1, "k must be >= 1");
  const double bk = beta * static_cast<double>(k);
  require(bk != std::floor(bk), "beta k must not be an integer");
  AsymptoticTerm a;
  a.gamma_neg_beta_k = specfun::gamma(-bk);
  a.value = std::tgamma(nu + 1.0) / (lambda * std::pow(t, beta) * a.gamma_neg_beta_k);
  a.sign = a.value > 0.0 ? 1 : (a.value < 0.0 ? -1 : 0);
  return a;
}

double tn_survival(const ModelParams& params, double t, std::uint64_t k) {
  params.validate();
  check_time(t);
  const double nu = params.nu, beta = params.beta;
  if (const auto* m = std::get_if<Linear>(&params.species)) {
    if (t == 0.0) return k >= 1 ? 0.0 : 1.0;
    return std::clamp(LinearTable(m->lambda, beta, nu, t, k).survival(k), 0.0, 1.0);
  }
  if (const auto* m = std::get_if<Constant>(&params.species)) return constant_survival(m->lambda, beta, nu, t, k);
  if (const auto* m = std::get_if<NonlinearDistinct>(&params.species)) {
    if (k == 0) return 1.0;
    require(k <= m->rates.size(), "k exceeds the number of defined rates");
    if (t == 0.0) return 0.0;
    return std::clamp(1.0 - divided_difference(m->rates, beta, nu + 1.0, t, k, true), 0.0, 1.0);
  }
  const auto& c = std::get<CriticalBD>(params.species);
  return detail::critical_survival(c.lambda, nu, t, k);
}

Pmf tn_pmf(const ModelParams& params, double t, std::uint64_t k_max) {
  params.validate();
  check_time(t);
  const double nu = params.nu, beta = params.beta;
  Pmf out;
  if (const auto* m = std::get_if<CriticalBD>(&params.species)) {
    out.support_start = 0;
    for (std::uint64_t k = 0; k <= k_max; ++k) out.probs.push_back(tn_pmf_critical(m->lambda, nu, t, k));
    out.truncation_tail_bound = detail::critical_survival(m->lambda, nu, t, k_max);
    return out;
  }
  require(k_max >= 1, "k_max must be >= 1");
  out.support_start = 1;
  if (t == 0.0) {
    out.probs.assign(k_max, 0.0);
    out.probs[0] = 1.0;
    return out;
  }
  if (const auto* m = std::get_if<Linear>(&params.species)) {
    const LinearTable table(m->lambda, beta, nu, t, k_max);
    for (std::uint64_t k = 1; k <= k_max; ++k) out.probs.push_back(std::max(0.0, table.pmf(k)));
    out.truncation_tail_bound = std::clamp(table.survival(k_max), 0.0, 1.0);
  } else if (const auto* m = std::get_if<Constant>(&params.species)) {
    for (std::uint64_t k = 1; k <= k_max; ++k) out.probs.push_back(tn_pmf_constant(m->lambda, beta, nu, t, k));
    out.truncation_tail_bound = constant_survival(m->lambda, beta, nu, t, k_max);
  } else {
    const auto& rates = std::get<NonlinearDistinct>(params.species).rates;
    for (std::uint64_t k = 1; k <= k_max; ++k) out.probs.push_back(std::max(0.0, tn_pmf_nonlinear(rates, beta, nu, t, k)));
    out.truncation_tail_bound = tn_survival(params, t, k_max);
  }
  return out;
}

Pmf tn_law(const ModelParams& params, double t, const PmfOptions& opts) {
  params.validate();
  check_time(t);
  if (const auto* m = std::get_if<NonlinearDistinct>(&params.species)) {
    const std::uint64_t k_max = std::min<std::uint64_t>(m->rates.size(), opts.k_ceiling);
    return tn_pmf(params, t, k_max);
  }
  PmfOptions capped = opts;
  if (const auto* m = std::get_if<Linear>(&params.species); m && params.beta < 1.0 && t > 0.0) {
    // The alternating sum needs E_{beta,nu+1}(-lambda j t^beta) for j <= K;
    // its largest series term grows like exp(|z|^{1/beta}), so keep |z|^{1/beta}
    // near the default budget and leave the rest to the tail bound.
    const double x = m->lambda * std::pow(t, params.beta);
    const double budget = std::min(specfun::EvalOptions{}.max_abs_z, std::pow(250.0, params.beta));
    capped.k_ceiling = std::min<std::uint64_t>(opts.k_ceiling, static_cast<std::uint64_t>(std::max(1.0, budget / x)));
  }
  const std::uint64_t first = processes::is_critical(params.species) ? 0 : 1;
  return grow_law(first, 16, capped, [&](std::uint64_t k) { return tn_pmf(params, t, std::max<std::uint64_t>(k, 1)); });
}

}  // namespace yule::analytic
