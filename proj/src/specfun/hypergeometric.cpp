#include <cmath>
#include <string>

#include "series.hpp"
#include "yule/specfun.hpp"

namespace yule::specfun {

using detail::HypergeometricSeries;

namespace {
constexpr double kDoubleUlp = 1.1102230246251565e-16;
constexpr double kPfaffThreshold = -0.5;
}  // namespace

ScaledSeries gauss_2f1_scaled(double a, double b, double c, double z, const EvalOptions& opts) {
  yule::detail::require(std::isfinite(a) && std::isfinite(b) && std::isfinite(c), "gauss_2f1: parameters must be finite");
  yule::detail::require(b > 0.0, "gauss_2f1: requires b > 0");
  yule::detail::require(c > b, "gauss_2f1: requires c > b");
  yule::detail::require(z <= 0.0 && std::isfinite(z), "gauss_2f1: z must be finite and <= 0");
  yule::detail::require(opts.tol > 0.0, "gauss_2f1: tolerance must be positive");

  ScaledSeries out;
  if (z == 0.0) {
    out.series = {1.0, 0.0, 1};
    return out;
  }

  double p = a, q = b;
  HypergeometricSeries::Argument arg = HypergeometricSeries::Argument::direct;
  if (z < kPfaffThreshold) {
    // Pfaff: 2F1(p, q; c; z) = (1 - z)^{-p} 2F1(p, c - q; c; z / (z - 1)), with
    // the smaller numerator parameter kept in front so the transformed series
    // decays like r^{p - q - 1} near w = 1.
    if (q < p) std::swap(p, q);
    out.log_prefactor = -p * std::log1p(-z);
    q = c - q;
    arg = HypergeometricSeries::Argument::pfaff;
  }
  HypergeometricSeries series(p, q, true, c, z, arg);
  detail::PlanRequest req;
  req.tol = opts.tol;
  req.relative = arg == HypergeometricSeries::Argument::pfaff && p > 0.0 && q > 0.0;
  req.max_terms = opts.max_terms;
  req.max_working_bits = opts.max_working_bits;
  req.extra_bits = opts.extra_bits;
  const detail::SeriesPlan plan = detail::plan_series(series, req, "gauss_2f1");
  const detail::MpSum s = detail::sum_series(series, plan);
  out.series.value = s.sum.to_double();
  out.series.abs_error_bound = s.error_bound + std::fabs(out.series.value) * kDoubleUlp;
  out.series.terms_used = plan.terms;
  return out;
}

SeriesResult gauss_2f1(double a, double b, double c, double z, const EvalOptions& opts) {
  const ScaledSeries s = gauss_2f1_scaled(a, b, c, z, opts);
  const double prefactor = std::exp(s.log_prefactor);
  SeriesResult out;
  out.value = prefactor * s.series.value;
  if (!std::isfinite(out.value)) {
    throw NumericalError(NumericalError::Kind::overflow, "gauss_2f1: value overflows double");
  }
  out.abs_error_bound = prefactor * s.series.abs_error_bound +
                        std::fabs(out.value) * (std::fabs(s.log_prefactor) + 4.0) * kDoubleUlp;
  out.terms_used = s.series.terms_used;
  return out;
}

}  // namespace yule::specfun
