#pragma once

// Minimal RAII value type over an MPFR float. Binary operations produce a
// result carrying the larger of the two operand precisions; everything
// rounds to nearest.

#include <mpfr.h>

#include <compare>
#include <string>

namespace yule {

class BigFloat {
 public:
  using Precision = mpfr_prec_t;

  explicit BigFloat(Precision bits = 64);
  BigFloat(double value, Precision bits);
  BigFloat(long value, Precision bits);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  Precision precision() const { return mpfr_get_prec(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  /// Natural log of |x| as a double; -inf for zero.
  double log_abs() const;
  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_integer() const { return mpfr_integer_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  std::string to_string(int digits = 20) const;

  BigFloat& operator+=(const BigFloat& rhs);
  BigFloat& operator-=(const BigFloat& rhs);
  BigFloat& operator*=(const BigFloat& rhs);
  BigFloat& operator/=(const BigFloat& rhs);
  BigFloat& operator*=(double rhs);
  BigFloat& operator/=(double rhs);
  BigFloat& operator+=(double rhs);
  BigFloat& operator-=(double rhs);

  friend BigFloat operator+(BigFloat lhs, const BigFloat& rhs) { return lhs += rhs; }
  friend BigFloat operator-(BigFloat lhs, const BigFloat& rhs) { return lhs -= rhs; }
  friend BigFloat operator*(BigFloat lhs, const BigFloat& rhs) { return lhs *= rhs; }
  friend BigFloat operator/(BigFloat lhs, const BigFloat& rhs) { return lhs /= rhs; }
  friend BigFloat operator*(BigFloat lhs, double rhs) { return lhs *= rhs; }
  friend BigFloat operator/(BigFloat lhs, double rhs) { return lhs /= rhs; }
  BigFloat operator-() const;

  friend std::partial_ordering operator<=>(const BigFloat& a, const BigFloat& b);
  friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

  friend BigFloat abs(const BigFloat& x);
  friend BigFloat exp(const BigFloat& x);
  friend BigFloat log(const BigFloat& x);
  friend BigFloat pow(const BigFloat& x, const BigFloat& y);
  friend BigFloat tgamma(const BigFloat& x);
  /// Reciprocal gamma, exactly zero at the poles.
  friend BigFloat rgamma(const BigFloat& x);

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

 private:
  mpfr_t v_;
};

}  // namespace yule
