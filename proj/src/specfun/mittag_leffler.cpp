#include <cmath>
#include <string>
#include <vector>

#include "series.hpp"
#include "yule/specfun.hpp"

namespace yule::specfun {

using detail::HypergeometricSeries;
using detail::kLn2;
using detail::PlanRequest;
using detail::PochhammerSeries;
using detail::WrightSeries;

namespace {

constexpr double kDoubleUlp = 1.1102230246251565e-16;  // 2^-53
constexpr double kKummerThreshold = 5.0;

PlanRequest make_request(const EvalOptions& opts, double tol, bool relative) {
  PlanRequest req;
  req.tol = tol;
  req.relative = relative;
  req.max_terms = opts.max_terms;
  req.max_working_bits = opts.max_working_bits;
  req.extra_bits = opts.extra_bits;
  return req;
}

void check_options(const EvalOptions& opts) {
  yule::detail::require(opts.tol > 0.0 && std::isfinite(opts.tol), "tolerance must be positive");
  yule::detail::require(opts.max_terms > 0, "max_terms must be positive");
}

long bits_for(double abs_tol, const EvalOptions& opts) {
  return std::max<long>(64, static_cast<long>(std::ceil(-std::log2(abs_tol))) + 16) + opts.extra_bits;
}

// 1/Gamma(b) as a precise constant term (z = 0).
PreciseResult constant_term(double b, double abs_tol, const EvalOptions& opts) {
  const long bits = bits_for(abs_tol, opts);
  BigFloat v = rgamma(BigFloat(b, bits));
  const double bound = std::fabs(v.to_double()) * 4.0 * std::ldexp(1.0, static_cast<int>(-bits));
  return {std::move(v), bound, 1};
}

// E^gamma_{1,b}(z) = e^z / Gamma(b) * 1F1(b - gamma; b; -z) for z < 0.
// The argument is z * z_factor, formed exactly.
PreciseResult kummer_prabhakar(double b, double poch, double z, double tol, const EvalOptions& opts,
                               const char* what, double z_factor = 1.0) {
  HypergeometricSeries series(b - poch, 0.0, false, b, -z, HypergeometricSeries::Argument::direct, z_factor);
  PlanRequest req = make_request(opts, tol, false);
  req.log_scale = z * z_factor - std::lgamma(b);
  const detail::SeriesPlan plan = detail::plan_series(series, req, what);
  detail::MpSum s = detail::sum_series(series, plan);
  BigFloat scale = exp(detail::exact_product(z, z_factor, plan.bits + 64));
  scale *= rgamma(BigFloat(b, plan.bits));
  BigFloat value = s.sum * scale;
  const double bound = std::exp(req.log_scale + s.log_error_bound) +
                       std::fabs(value.to_double()) * 8.0 * std::ldexp(1.0, static_cast<int>(-plan.bits));
  return {std::move(value), bound, plan.terms};
}

PreciseResult prabhakar_core(double nu, double beta, double poch, double z, double tol, bool relative,
                             const EvalOptions& opts, const char* what) {
  if (z == 0.0) return constant_term(beta, tol, opts);
  if (nu == 1.0 && z < -kKummerThreshold) return kummer_prabhakar(beta, poch, z, tol, opts, what);
  if (z < 0.0 && -z > opts.max_abs_z) {
    throw NumericalError(NumericalError::Kind::precision_loss,
                         std::string(what) + ": |z| = " + std::to_string(-z) +
                             " exceeds the working-precision budget " + std::to_string(opts.max_abs_z));
  }
  PochhammerSeries series(nu, beta, poch, z);
  const detail::SeriesPlan plan = detail::plan_series(series, make_request(opts, tol, relative), what);
  detail::MpSum s = detail::sum_series(series, plan);
  return {std::move(s.sum), s.error_bound, plan.terms};
}

SeriesResult to_double(const PreciseResult& r, const char* what) {
  SeriesResult out;
  out.value = r.value.to_double();
  if (!std::isfinite(out.value)) {
    throw NumericalError(NumericalError::Kind::overflow, std::string(what) + ": value overflows double");
  }
  out.abs_error_bound = r.abs_error_bound + std::fabs(out.value) * kDoubleUlp;
  out.terms_used = r.terms_used;
  return out;
}

void check_ml_params(double alpha, double beta, const char* what) {
  yule::detail::require(alpha > 0.0 && alpha <= 1.0, std::string(what) + ": alpha must lie in (0, 1]");
  yule::detail::require(beta > 0.0 && std::isfinite(beta), std::string(what) + ": beta must be positive");
}

}  // namespace

SeriesResult mittag_leffler(double alpha, double beta, double z, const EvalOptions& opts) {
  check_ml_params(alpha, beta, "mittag_leffler");
  check_options(opts);
  yule::detail::require(std::isfinite(z), "mittag_leffler: z must be finite");
  const PreciseResult r = prabhakar_core(alpha, beta, 1.0, z, opts.tol, z > 0.0, opts, "mittag_leffler");
  return to_double(r, "mittag_leffler");
}

SeriesResult prabhakar(double nu, double beta, double gamma, double z, const EvalOptions& opts) {
  check_ml_params(nu, beta, "prabhakar");
  check_options(opts);
  yule::detail::require(gamma > 0.0 && std::isfinite(gamma), "prabhakar: gamma must be positive");
  yule::detail::require(std::isfinite(z), "prabhakar: z must be finite");
  const PreciseResult r = prabhakar_core(nu, beta, gamma, z, opts.tol, z > 0.0, opts, "prabhakar");
  return to_double(r, "prabhakar");
}

PreciseResult prabhakar_precise(double nu, double beta, double gamma, double z, double abs_tol,
                                const EvalOptions& opts) {
  check_ml_params(nu, beta, "prabhakar");
  yule::detail::require(gamma > 0.0 && std::isfinite(gamma), "prabhakar: gamma must be positive");
  yule::detail::require(abs_tol > 0.0, "prabhakar: tolerance must be positive");
  return prabhakar_core(nu, beta, gamma, z, abs_tol, false, opts, "prabhakar");
}

SeriesResult wright_phi(double alpha, double beta, double z, const EvalOptions& opts) {
  yule::detail::require(alpha > -1.0 && alpha < 0.0, "wright_phi: alpha must lie in (-1, 0)");
  yule::detail::require(std::isfinite(beta), "wright_phi: beta must be finite");
  yule::detail::require(z <= 0.0 && std::isfinite(z), "wright_phi: z must be finite and <= 0");
  check_options(opts);
  if (z == 0.0) {
    if (detail::is_nonpositive_integer(beta)) return {0.0, 0.0, 1};
    return to_double(constant_term(beta, opts.tol, opts), "wright_phi");
  }
  WrightSeries series(alpha, beta, z);
  const detail::SeriesPlan plan = detail::plan_series(series, make_request(opts, opts.tol, false), "wright_phi");
  detail::MpSum s = detail::sum_series(series, plan);
  return to_double(PreciseResult{std::move(s.sum), s.error_bound, plan.terms}, "wright_phi");
}

// ---------------------------------------------------------------------------

struct MittagLefflerBatch::Impl {
  double alpha;
  double beta;
  EvalOptions opts;
  long table_bits = 0;
  std::vector<BigFloat> reciprocal_gamma;  // 1 / Gamma(alpha r + beta)

  void ensure(int count, long bits) {
    if (bits > table_bits) {
      reciprocal_gamma.clear();
      table_bits = bits;
    }
    const long arg_bits = std::max<long>(table_bits, 192);
    const BigFloat a(alpha, arg_bits);
    for (int r = static_cast<int>(reciprocal_gamma.size()); r < count; ++r) {
      BigFloat x = a * static_cast<double>(r);
      x += beta;
      BigFloat g = rgamma(x);
      mpfr_prec_round(g.raw(), table_bits, MPFR_RNDN);
      reciprocal_gamma.push_back(std::move(g));
    }
  }
};

MittagLefflerBatch::MittagLefflerBatch(double alpha, double beta, EvalOptions opts)
    : impl_(std::make_unique<Impl>(Impl{alpha, beta, opts, 0, {}})) {
  check_ml_params(alpha, beta, "mittag_leffler");
}

MittagLefflerBatch::~MittagLefflerBatch() = default;
MittagLefflerBatch::MittagLefflerBatch(MittagLefflerBatch&&) noexcept = default;
MittagLefflerBatch& MittagLefflerBatch::operator=(MittagLefflerBatch&&) noexcept = default;

PreciseResult MittagLefflerBatch::operator()(double z, double abs_tol) { return (*this)(z, 1.0, abs_tol); }

PreciseResult MittagLefflerBatch::operator()(double base, double factor, double abs_tol) {
  Impl& s = *impl_;
  yule::detail::require(abs_tol > 0.0, "mittag_leffler: tolerance must be positive");
  const double z = base * factor;
  if (z == 0.0) return constant_term(s.beta, abs_tol, s.opts);
  if (s.alpha == 1.0 && z < -kKummerThreshold) {
    return kummer_prabhakar(s.beta, 1.0, base, abs_tol, s.opts, "mittag_leffler", factor);
  }
  if (z < 0.0 && -z > s.opts.max_abs_z) {
    throw NumericalError(NumericalError::Kind::precision_loss,
                         "mittag_leffler: |z| = " + std::to_string(-z) +
                             " exceeds the working-precision budget " + std::to_string(s.opts.max_abs_z));
  }
  PochhammerSeries series(s.alpha, s.beta, 1.0, base, factor);
  const detail::SeriesPlan plan =
      detail::plan_series(series, make_request(s.opts, abs_tol, false), "mittag_leffler");
  s.ensure(plan.terms, plan.bits);

  const BigFloat zz = series.exact_z(s.table_bits);
  BigFloat power(1.0, s.table_bits);
  BigFloat sum(s.table_bits);
  double log_abs = detail::kNegInf;
  for (int r = 0; r < plan.terms; ++r) {
    if (r > 0) power *= zz;
    BigFloat t = power * s.reciprocal_gamma[static_cast<std::size_t>(r)];
    if (!t.is_zero()) log_abs = detail::log_add(log_abs, t.log_abs());
    sum += t;
  }
  const double rounding =
      std::exp(log_abs + std::log(8.0 * plan.terms + 8.0) - static_cast<double>(plan.bits) * kLn2);
  return {std::move(sum), plan.tail_bound + 1.01 * rounding, plan.terms};
}

}  // namespace yule::specfun
