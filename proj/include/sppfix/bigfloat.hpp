#pragma once

#include <mpfr.h>

#include <algorithm>
#include <string>
#include <utility>

#include "sppfix/errors.hpp"
#include "sppfix/rational.hpp"

namespace sppfix {

// Binary floating-point value with a per-value mantissa width, rounded to
// nearest on every operation. Binary operators widen to the larger operand
// precision, so a computation seeded at p bits stays at p bits throughout.
class BigFloat {
 public:
  static constexpr mpfr_prec_t kDefaultBits = 256;

  explicit BigFloat(mpfr_prec_t bits = kDefaultBits) {
    mpfr_init2(v_, bits);
    mpfr_set_zero(v_, 1);
  }
  BigFloat(const BigFloat& o) {
    mpfr_init2(v_, o.precision());
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) {
      mpfr_set_prec(v_, o.precision());
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  static BigFloat from_rational(const Rational& q, mpfr_prec_t bits) {
    BigFloat r(bits);
    mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
    return r;
  }
  static BigFloat from_long(long n, mpfr_prec_t bits) {
    BigFloat r(bits);
    mpfr_set_si(r.v_, n, MPFR_RNDN);
    return r;
  }

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  // Exact: every finite binary float is a dyadic rational.
  Rational to_rational() const {
    if (!mpfr_number_p(v_)) raise(errc::invalid_argument, "non-finite value");
    if (is_zero()) return Rational(0);
    Integer mant;
    mpfr_exp_t e = mpfr_get_z_2exp(mant.get_mpz_t(), v_);
    Rational q(mant, 1);
    return q * pow2(static_cast<long>(e));
  }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  // Shortest decimal string that reads back to the same value at the same
  // precision (mpfr's minimal-digit mode).
  std::string to_string() const {
    if (!mpfr_number_p(v_)) raise(errc::invalid_argument, "non-finite value");
    if (is_zero()) return "0";
    mpfr_exp_t e = 0;
    char* raw = mpfr_get_str(nullptr, &e, 10, 0, v_, MPFR_RNDN);
    std::string digits(raw);
    mpfr_free_str(raw);
    std::string sign;
    if (!digits.empty() && digits[0] == '-') {
      sign = "-";
      digits.erase(0, 1);
    }
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
    std::string body;
    long len = static_cast<long>(digits.size());
    if (e < -4 || e > len + 20) {
      // scientific: d.ddd e (exp-1), with e the position of the decimal point
      body = digits.substr(0, 1);
      if (len > 1) body += "." + digits.substr(1);
      body += "e" + std::to_string(e - 1);
    } else if (e <= 0) {
      body = "0." + std::string(static_cast<size_t>(-e), '0') + digits;
    } else if (e >= len) {
      body = digits + std::string(static_cast<size_t>(e - len), '0');
    } else {
      body = digits.substr(0, static_cast<size_t>(e)) + "." + digits.substr(static_cast<size_t>(e));
    }
    return sign + body;
  }

  // One unit in the last place of this value; zero for zero.
  BigFloat ulp() const {
    BigFloat r(precision());
    if (is_zero()) return r;
    mpfr_set_ui_2exp(r.v_, 1, mpfr_get_exp(v_) - precision(), MPFR_RNDN);
    return r;
  }

  friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.precision(), b.precision()));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.precision(), b.precision()));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.precision(), b.precision()));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
    if (b.is_zero()) raise(errc::singular_system, "division by zero");
    BigFloat r(std::max(a.precision(), b.precision()));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator-(const BigFloat& a) {
    BigFloat r(a.precision());
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  BigFloat& operator+=(const BigFloat& o) { return *this = *this + o; }
  BigFloat& operator-=(const BigFloat& o) { return *this = *this - o; }
  BigFloat& operator*=(const BigFloat& o) { return *this = *this * o; }
  BigFloat& operator/=(const BigFloat& o) { return *this = *this / o; }

  friend BigFloat abs(const BigFloat& a) {
    BigFloat r(a.precision());
    mpfr_abs(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat sqrt(const BigFloat& a) {
    if (a.sign() < 0) raise(errc::no_real_root, "sqrt of negative value");
    BigFloat r(a.precision());
    mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) == 0; }
  friend bool operator!=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) != 0; }
  friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
  friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }

 private:
  mpfr_t v_;
};

// Namespace-scope redeclarations so the hidden friends are reachable by
// qualified lookup as well.
BigFloat abs(const BigFloat& a);
BigFloat sqrt(const BigFloat& a);

}  // namespace sppfix
