#pragma once

// Two-pass summation driver for hypergeometric-type power series.
//
// A term model supplies
//   TermInfo term(int r) const                  log|t_r| and sign, in double
//   std::optional<TailAnchor> tail_anchor(int n) const
//       when present: sum_{r>n} |t_r| <= exp(log_base) * rho / (1 - rho)
//   template <class F> void mp_terms(int count, long bits, F&& f) const
//       calls f(r, t_r) with t_r as a BigFloat of the given precision; the
//       relative error of each t_r must stay below (3r + 8) 2^-bits.
//
// The planner walks the double pass until the tail majorant is below half
// the target, then picks the working precision for the MPFR pass so the
// accumulated rounding stays below a quarter of the target.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "yule/bigfloat.hpp"
#include "yule/errors.hpp"
#include "yule/specfun.hpp"

namespace yule::specfun::detail {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kLn2 = 0.69314718055994530942;

struct TermInfo {
  double log_abs = kNegInf;
  int sign = 0;
};

struct TailAnchor {
  double log_base = kNegInf;
  double rho = 0.0;
};

inline double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

/// Sign of Gamma(x) for x not a non-positive integer.
inline int gamma_sign(double x) {
  if (x > 0.0) return 1;
  return (static_cast<long long>(std::ceil(-x)) % 2 == 0) ? 1 : -1;
}

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

/// Result value = exp(log_scale) * S, where S is the series sum.
struct PlanRequest {
  double tol = 1e-12;
  bool relative = false;
  double log_scale = 0.0;
  int max_terms = 10000;
  long max_working_bits = 8192;
  long extra_bits = 0;
};

struct SeriesPlan {
  int terms = 0;
  double tail_bound = 0.0;     // on S
  double log_tail_bound = kNegInf;
  double log_target = 0.0;     // log of the error target on S
  double log_abs_sum = kNegInf;
  double log_max_term = kNegInf;
  long bits = 64;
};

template <class Model>
SeriesPlan plan_series(const Model& model, const PlanRequest& req, const char* what) {
  SeriesPlan plan;
  double est = 0.0;  // double-precision running sum, unreliable under cancellation
  const double log_tol = std::log(req.tol);
  for (int n = 0; n < req.max_terms; ++n) {
    const TermInfo t = model.term(n);
    if (t.sign != 0) {
      plan.log_abs_sum = log_add(plan.log_abs_sum, t.log_abs);
      plan.log_max_term = std::max(plan.log_max_term, t.log_abs);
      if (t.log_abs < 700.0) est += t.sign * std::exp(t.log_abs);
    }
    double log_target = log_tol - req.log_scale;
    if (req.relative) log_target += std::max(0.0, req.log_scale + plan.log_abs_sum);

    const std::optional<TailAnchor> anchor = model.tail_anchor(n);
    if (!anchor || anchor->rho >= 1.0) continue;
    double log_tail = kNegInf;
    if (anchor->log_base != kNegInf && anchor->rho > 0.0) {
      log_tail = anchor->log_base + std::log(anchor->rho / (1.0 - anchor->rho)) + std::log(1.01);
    }
    if (log_tail > log_target - kLn2) continue;

    // Next-term test relative to the partial sum, only when the double
    // estimate is trustworthy (cancellation below ~1e12).
    const bool est_reliable = est != 0.0 && plan.log_abs_sum < 700.0 &&
                              plan.log_abs_sum - std::log(std::fabs(est)) < 28.0;
    if (est_reliable) {
      const TermInfo next = model.term(n + 1);
      if (next.sign != 0 && next.log_abs > log_tol + std::log(std::fabs(est))) continue;
    }

    plan.terms = n + 1;
    plan.tail_bound = std::exp(log_tail);
    plan.log_tail_bound = log_tail;
    plan.log_target = log_target;
    const double rounding_budget = log_target - std::log(4.0);
    const double need = (plan.log_abs_sum - rounding_budget) / kLn2 +
                        std::log2(8.0 * plan.terms + 8.0) + 8.0;
    plan.bits = std::max<long>(64, static_cast<long>(std::ceil(need))) + req.extra_bits;
    if (plan.bits > req.max_working_bits + req.extra_bits) {
      throw NumericalError(NumericalError::Kind::precision_loss,
                           std::string(what) + ": cancellation needs " + std::to_string(plan.bits) +
                               " working bits, budget is " + std::to_string(req.max_working_bits));
    }
    return plan;
  }
  throw NumericalError(NumericalError::Kind::non_convergence,
                       std::string(what) + ": tolerance not reached within " +
                           std::to_string(req.max_terms) + " terms");
}

struct MpSum {
  BigFloat sum;
  double error_bound = 0.0;  // on S: tail + rounding
  double log_error_bound = kNegInf;
};

template <class Model>
MpSum sum_series(const Model& model, const SeriesPlan& plan) {
  MpSum out{BigFloat(plan.bits), 0.0, kNegInf};
  double log_abs = kNegInf;
  model.mp_terms(plan.terms, plan.bits, [&](int, const BigFloat& t) {
    out.sum += t;
    if (!t.is_zero()) log_abs = log_add(log_abs, t.log_abs());
  });
  const double log_rounding =
      log_abs + std::log(8.0 * plan.terms + 8.0) - static_cast<double>(plan.bits) * kLn2;
  out.log_error_bound = log_add(plan.log_tail_bound, log_rounding + std::log(1.01));
  out.error_bound = std::exp(out.log_error_bound);
  return out;
}

// ---------------------------------------------------------------------------
// Term models

/// Argument z = base * factor, formed exactly in working precision. Sums
/// over arithmetic progressions of arguments (finite differences) depend on
/// the progression being exact.
inline BigFloat exact_product(double base, double factor, long bits) {
  BigFloat z(base, std::max<long>(bits, 128));
  z *= factor;
  return z;
}

/// t_r = z^r (gamma)_r / (r! Gamma(a r + b)), a > 0, b > 0, gamma > 0.
class PochhammerSeries {
 public:
  PochhammerSeries(double a, double b, double poch, double z, double z_factor = 1.0)
      : a_(a), b_(b), poch_(poch), z_(z * z_factor), z_base_(z), z_factor_(z_factor) {
    log_abs_z_ = std::log(std::fabs(z_));
  }

  TermInfo term(int r) const {
    if (r == 0) return {-std::lgamma(b_), 1};
    if (z_ == 0.0) return {};
    const double x = a_ * r + b_;
    const double log_w = std::lgamma(poch_ + r) - std::lgamma(poch_) - std::lgamma(r + 1.0);
    const int sign = (z_ < 0.0 && (r % 2 == 1)) ? -1 : 1;
    return {r * log_abs_z_ + log_w - std::lgamma(x), sign};
  }

  std::optional<TailAnchor> tail_anchor(int n) const {
    if (z_ == 0.0) return TailAnchor{kNegInf, 0.0};
    const double x = a_ * n + b_;
    const double rho = std::fabs(z_) * std::max(1.0, (poch_ + n) / (n + 1.0)) *
                       std::exp(std::lgamma(x) - std::lgamma(x + a_));
    return TailAnchor{term(n).log_abs, rho};
  }

  template <class F>
  void mp_terms(int count, long bits, F&& f) const {
    const long arg_bits = std::max<long>(bits, 192);
    BigFloat power(1.0, bits);  // z^r (gamma)_r / r!
    const BigFloat z = exact_product(z_base_, z_factor_, bits);
    const BigFloat a(a_, arg_bits);
    for (int r = 0; r < count; ++r) {
      if (r > 0) {
        BigFloat factor(poch_, arg_bits);
        factor += static_cast<double>(r - 1);
        power *= z;
        power *= factor;
        power /= static_cast<double>(r);
      }
      BigFloat x = a * static_cast<double>(r);
      x += b_;
      f(r, power * rgamma(x));
    }
  }

  BigFloat exact_z(long bits) const { return exact_product(z_base_, z_factor_, bits); }

 private:
  double a_, b_, poch_, z_;
  double z_base_, z_factor_;
  double log_abs_z_;
};

/// Wright series t_r = z^r / (r! Gamma(a r + b)) with a in (-1, 0).
class WrightSeries {
 public:
  WrightSeries(double a, double b, double z) : a_(a), b_(b), z_(z) { log_abs_z_ = std::log(std::fabs(z)); }

  TermInfo term(int r) const {
    const double x = a_ * r + b_;
    if (is_nonpositive_integer(x)) return {};
    if (r > 0 && z_ == 0.0) return {};
    const double log_num = r == 0 ? 0.0 : r * log_abs_z_;
    int sign = gamma_sign(x);
    if (z_ < 0.0 && (r % 2 == 1)) sign = -sign;
    return {log_num - std::lgamma(r + 1.0) - std::lgamma(x), sign};
  }

  std::optional<TailAnchor> tail_anchor(int n) const {
    if (z_ == 0.0) return TailAnchor{kNegInf, 0.0};
    const double abs_a = -a_;
    if (a_ * n + b_ > 0.0) return std::nullopt;
    const double y = 1.0 + abs_a * n - b_;
    if (!(abs_a * abs_a * (n + 1.0) < y)) return std::nullopt;
    // |1/Gamma(x)| <= Gamma(1 - x) / pi on x <= 0, and
    // Gamma(y + s) / Gamma(y) <= y^s for s in [0, 1].
    const double log_majorant = n * log_abs_z_ + std::lgamma(y) - std::log(M_PI) - std::lgamma(n + 1.0);
    const double rho = std::fabs(z_) * std::pow(y, abs_a) / (n + 1.0);
    return TailAnchor{log_majorant, rho};
  }

  template <class F>
  void mp_terms(int count, long bits, F&& f) const {
    const long arg_bits = std::max<long>(bits, 192);
    BigFloat power(1.0, bits);  // z^r / r!
    const BigFloat z(z_, bits);
    const BigFloat a(a_, arg_bits);
    for (int r = 0; r < count; ++r) {
      if (r > 0) {
        power *= z;
        power /= static_cast<double>(r);
      }
      BigFloat x = a * static_cast<double>(r);
      x += b_;
      f(r, power * rgamma(x));
    }
  }

 private:
  double a_, b_, z_;
  double log_abs_z_;
};

/// Generic 2F1-type series t_r = (p)_r (q)_r / ((c)_r r!) w^r.
/// With has_q = false it is the 1F1 series t_r = (p)_r / ((c)_r r!) w^r.
/// The argument is either w = z or the Pfaff image w = z / (z - 1), the
/// latter formed in working precision.
class HypergeometricSeries {
 public:
  enum class Argument { direct, pfaff };

  HypergeometricSeries(double p, double q, bool has_q, double c, double z, Argument arg, double z_factor = 1.0)
      : p_(p), q_(q), has_q_(has_q), c_(c), z_(z * z_factor), z_base_(z), z_factor_(z_factor), arg_(arg) {
    w_ = arg == Argument::pfaff ? z_ / (z_ - 1.0) : z_;
    log_abs_w_ = std::log(std::fabs(w_));
    cache_.push_back({0.0, 1});
  }

  TermInfo term(int r) const {
    while (static_cast<int>(cache_.size()) <= r) {
      const int i = static_cast<int>(cache_.size()) - 1;
      TermInfo t = cache_.back();
      const double fp = p_ + i;
      const double fq = has_q_ ? q_ + i : 1.0;
      const double fc = c_ + i;
      if (t.sign == 0 || fp == 0.0 || fq == 0.0 || w_ == 0.0) {
        cache_.push_back({});
        continue;
      }
      if (fp < 0) t.sign = -t.sign;
      if (fq < 0) t.sign = -t.sign;
      if (fc < 0) t.sign = -t.sign;
      if (w_ < 0) t.sign = -t.sign;
      t.log_abs += std::log(std::fabs(fp)) + std::log(std::fabs(fq)) - std::log(std::fabs(fc)) -
                   std::log(i + 1.0) + log_abs_w_;
      cache_.push_back(t);
    }
    return cache_[static_cast<std::size_t>(r)];
  }

  std::optional<TailAnchor> tail_anchor(int n) const {
    const TermInfo t = term(n);
    if (w_ == 0.0 || t.sign == 0) return TailAnchor{kNegInf, 0.0};
    const double fq = has_q_ ? q_ + n : 1.0;
    if (p_ + n == 0.0 || fq == 0.0) return TailAnchor{kNegInf, 0.0};  // next term vanishes
    if (!(p_ + n > 0.0 && fq > 0.0 && c_ + n > 0.0)) return std::nullopt;
    double rho = std::fabs(w_) * std::max(1.0, (p_ + n) / (c_ + n));
    if (has_q_) rho *= std::max(1.0, (q_ + n) / (n + 1.0));
    else rho /= (n + 1.0);
    return TailAnchor{t.log_abs, rho};
  }

  template <class F>
  void mp_terms(int count, long bits, F&& f) const {
    const long arg_bits = std::max<long>(bits, 192);
    BigFloat w = exact_product(z_base_, z_factor_, arg_bits);
    if (arg_ == Argument::pfaff) {
      BigFloat den = exact_product(z_base_, z_factor_, arg_bits + 64);
      den += -1.0;
      w /= den;
    }
    BigFloat t(1.0, bits);
    for (int r = 0; r < count; ++r) {
      if (r > 0) {
        const double i = r - 1.0;
        BigFloat fp(p_, arg_bits);
        fp += i;
        BigFloat fc(c_, arg_bits);
        fc += i;
        t *= fp;
        if (has_q_) {
          BigFloat fq(q_, arg_bits);
          fq += i;
          t *= fq;
        }
        t /= fc;
        t /= static_cast<double>(r);
        t *= w;
      }
      f(r, t);
    }
  }

  double w() const { return w_; }

 private:
  double p_, q_;
  bool has_q_;
  double c_;
  double z_;
  double z_base_, z_factor_;
  Argument arg_;
  double w_;
  double log_abs_w_;
  mutable std::vector<TermInfo> cache_;
};

}  // namespace yule::specfun::detail
