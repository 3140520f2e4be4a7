#include "yule/bigfloat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace yule {

namespace {
mpfr_prec_t wider(mpfr_srcptr a, mpfr_srcptr b) {
  return std::max(mpfr_get_prec(a), mpfr_get_prec(b));
}

// Widens the destination in place, keeping its value.
void widen_to(mpfr_ptr v, mpfr_prec_t bits) {
  if (mpfr_get_prec(v) < bits) mpfr_prec_round(v, bits, MPFR_RNDN);
}
}  // namespace

BigFloat::BigFloat(Precision bits) {
  mpfr_init2(v_, bits);
  mpfr_set_zero(v_, 1);
}

BigFloat::BigFloat(double value, Precision bits) {
  mpfr_init2(v_, bits);
  mpfr_set_d(v_, value, MPFR_RNDN);
}

BigFloat::BigFloat(long value, Precision bits) {
  mpfr_init2(v_, bits);
  mpfr_set_si(v_, value, MPFR_RNDN);
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(v_, other.precision());
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(v_, MPFR_PREC_MIN);
  mpfr_swap(v_, other.v_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(v_, other.precision());
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(v_); }

double BigFloat::log_abs() const {
  if (mpfr_zero_p(v_)) return -std::numeric_limits<double>::infinity();
  long exponent = 0;
  const double mantissa = mpfr_get_d_2exp(&exponent, v_, MPFR_RNDN);
  return std::log(std::fabs(mantissa)) + static_cast<double>(exponent) * std::log(2.0);
}

std::string BigFloat::to_string(int digits) const {
  std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
  return std::string(buf.data());
}

BigFloat& BigFloat::operator+=(const BigFloat& rhs) {
  widen_to(v_, wider(v_, rhs.v_));
  mpfr_add(v_, v_, rhs.v_, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator-=(const BigFloat& rhs) {
  widen_to(v_, wider(v_, rhs.v_));
  mpfr_sub(v_, v_, rhs.v_, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator*=(const BigFloat& rhs) {
  widen_to(v_, wider(v_, rhs.v_));
  mpfr_mul(v_, v_, rhs.v_, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator/=(const BigFloat& rhs) {
  widen_to(v_, wider(v_, rhs.v_));
  mpfr_div(v_, v_, rhs.v_, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator*=(double rhs) {
  mpfr_mul_d(v_, v_, rhs, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator/=(double rhs) {
  mpfr_div_d(v_, v_, rhs, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator+=(double rhs) {
  mpfr_add_d(v_, v_, rhs, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator-=(double rhs) {
  mpfr_sub_d(v_, v_, rhs, MPFR_RNDN);
  return *this;
}

BigFloat BigFloat::operator-() const {
  BigFloat r(*this);
  mpfr_neg(r.v_, r.v_, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const BigFloat& a, const BigFloat& b) {
  if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.v_, b.v_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

BigFloat abs(const BigFloat& x) {
  BigFloat r(x.precision());
  mpfr_abs(r.v_, x.v_, MPFR_RNDN);
  return r;
}

BigFloat exp(const BigFloat& x) {
  BigFloat r(x.precision());
  mpfr_exp(r.v_, x.v_, MPFR_RNDN);
  return r;
}

BigFloat log(const BigFloat& x) {
  BigFloat r(x.precision());
  mpfr_log(r.v_, x.v_, MPFR_RNDN);
  return r;
}

BigFloat pow(const BigFloat& x, const BigFloat& y) {
  BigFloat r(std::max(x.precision(), y.precision()));
  mpfr_pow(r.v_, x.v_, y.v_, MPFR_RNDN);
  return r;
}

BigFloat tgamma(const BigFloat& x) {
  BigFloat r(x.precision());
  mpfr_gamma(r.v_, x.v_, MPFR_RNDN);
  return r;
}

BigFloat rgamma(const BigFloat& x) {
  BigFloat r(x.precision());
  if (mpfr_integer_p(x.v_) && mpfr_sgn(x.v_) <= 0) return r;  // zero
  mpfr_gamma(r.v_, x.v_, MPFR_RNDN);
  mpfr_ui_div(r.v_, 1, r.v_, MPFR_RNDN);
  return r;
}

}  // namespace yule
