#pragma once

// Error-controlled evaluation of the special functions used by the
// generalized Yule model formulas: Gamma, two- and three-parameter
// Mittag-Leffler (Prabhakar), Wright and Gauss hypergeometric.
//
// Every series is summed twice: a cheap double-precision pass that sizes
// the number of terms, the geometric tail majorant and the largest term,
// then an MPFR pass at a working precision chosen so that cancellation
// among alternating terms cannot eat into the requested tolerance.
//
// Usable domain (defaults): Prabhakar for |z| <= 50 on the negative axis,
// any function whose cancellation needs more than 8192 working bits or
// 10000 terms reports NumericalError::precision_loss / non_convergence.
// Mittag-Leffler with alpha = 1 on the negative axis goes through Kummer's
// transformation and is free of cancellation for any |z|.

#include <cstdint>
#include <memory>

#include "yule/bigfloat.hpp"
#include "yule/errors.hpp"

namespace yule::specfun {

struct SeriesResult {
  double value = 0.0;
  double abs_error_bound = 0.0;
  int terms_used = 0;
};

struct EvalOptions {
  /// Target error; absolute, or relative to |value| when the series has no
  /// sign changes and |value| > 1.
  double tol = 1e-12;
  int max_terms = 10000;
  /// Budget on |z| for negative-argument Prabhakar and Mittag-Leffler series.
  double max_abs_z = 50.0;
  long max_working_bits = 8192;
  /// Additional working bits; used to cross-check error bounds.
  long extra_bits = 0;
};

/// Gamma function for real x, signed on the negative axis.
/// Throws NumericalError(pole) at non-positive integers.
double gamma(double x);

/// sin(pi x) with exact zeros at the integers.
double sin_pi(double x);

/// E_{alpha,beta}(z) = sum_r z^r / Gamma(alpha r + beta).
SeriesResult mittag_leffler(double alpha, double beta, double z, const EvalOptions& opts = {});

/// E^gamma_{nu,beta}(z) = sum_r (gamma)_r z^r / (r! Gamma(nu r + beta)).
SeriesResult prabhakar(double nu, double beta, double gamma, double z, const EvalOptions& opts = {});

/// Wright function phi(alpha, beta; z) = sum_r z^r / (r! Gamma(alpha r + beta)),
/// alpha in (-1, 0), z <= 0.
SeriesResult wright_phi(double alpha, double beta, double z, const EvalOptions& opts = {});

/// 2F1(a, b; c; z) for z <= 0 and c > b > 0.
SeriesResult gauss_2f1(double a, double b, double c, double z, const EvalOptions& opts = {});

/// 2F1(a, b; c; z) = exp(log_prefactor) * series for z <= 0, returned unevaluated
/// so that callers with huge or tiny prefactors can stay in log space.
struct ScaledSeries {
  double log_prefactor = 0.0;
  SeriesResult series;  // error bound refers to the series factor
};
ScaledSeries gauss_2f1_scaled(double a, double b, double c, double z, const EvalOptions& opts = {});

// ---------------------------------------------------------------------------
// Extended-precision results for callers that combine many values with
// heavy cancellation (alternating binomial sums, divided differences).

struct PreciseResult {
  BigFloat value;
  /// Bound on |value - exact|, already including working-precision rounding.
  double abs_error_bound = 0.0;
  int terms_used = 0;
};

/// As prabhakar()/mittag_leffler() but with an explicit absolute tolerance
/// that may lie far below double epsilon.
PreciseResult prabhakar_precise(double nu, double beta, double gamma, double z, double abs_tol,
                                const EvalOptions& opts = {});

/// Evaluates E_{alpha,beta} at many arguments, sharing the reciprocal
/// Gamma table 1/Gamma(alpha r + beta) between calls. Not thread-safe.
class MittagLefflerBatch {
 public:
  MittagLefflerBatch(double alpha, double beta, EvalOptions opts = {});
  ~MittagLefflerBatch();
  MittagLefflerBatch(MittagLefflerBatch&&) noexcept;
  MittagLefflerBatch& operator=(MittagLefflerBatch&&) noexcept;

  PreciseResult operator()(double z, double abs_tol);
  /// Argument z = base * factor, formed exactly. Finite differences over
  /// z = -x j need the progression to be exact, not rounded per point.
  PreciseResult operator()(double base, double factor, double abs_tol);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace yule::specfun
