#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sppfix/bigfloat.hpp"
#include "sppfix/rational.hpp"

namespace sppfix {

// The iteration engines are parameterized over a scalar field through this
// traits class. Two realizations: exact rationals and binary big-floats.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr bool is_exact = true;
  struct Config {
    bool operator==(const Config&) const = default;
  };

  static Rational zero(const Config&) { return Rational(0); }
  static Rational one(const Config&) { return Rational(1); }
  static Rational from_rational(const Rational& q, const Config&) { return q; }
  static Rational to_rational(const Rational& x) { return x; }
  static Config config_of(const std::vector<Rational>&) { return {}; }

  static Rational sqrt(const Rational& x) {
    if (x < 0) raise(errc::no_real_root, "sqrt of negative value");
    auto r = exact_sqrt(x);
    if (!r) raise(errc::inexact_sqrt, "square root of " + fraction_string(x) + " is irrational");
    return *r;
  }

  // Exact mode treats only a true zero pivot as singular.
  static Rational pivot_epsilon(const Config&) { return Rational(0); }
  static Rational negative_clamp_epsilon(const Config&) { return Rational(0); }
  static Rational default_divergence_guard(const Config&) { return pow2(1024); }
  static long certified_bits_cap(const Config&) { return 1 << 20; }
  static std::string describe(const Config&) { return "rational"; }
  static std::string print(const Rational& x) { return fraction_string(x); }
};

template <>
struct scalar_traits<BigFloat> {
  static constexpr bool is_exact = false;
  struct Config {
    mpfr_prec_t bits = BigFloat::kDefaultBits;
    bool operator==(const Config&) const = default;
  };

  static BigFloat zero(const Config& c) { return BigFloat(c.bits); }
  static BigFloat one(const Config& c) { return BigFloat::from_long(1, c.bits); }
  static BigFloat from_rational(const Rational& q, const Config& c) {
    return BigFloat::from_rational(q, c.bits);
  }
  static Rational to_rational(const BigFloat& x) { return x.to_rational(); }
  static Config config_of(const std::vector<BigFloat>& v) {
    Config c;
    if (!v.empty()) {
      c.bits = v.front().precision();
      for (const auto& x : v) c.bits = std::max(c.bits, x.precision());
    }
    return c;
  }

  static BigFloat sqrt(const BigFloat& x) { return ::sppfix::sqrt(x); }

  static BigFloat pivot_epsilon(const Config& c) {
    return BigFloat::from_rational(pow2(-static_cast<long>(c.bits / 2)), c.bits);
  }
  static BigFloat negative_clamp_epsilon(const Config& c) { return pivot_epsilon(c); }
  static BigFloat default_divergence_guard(const Config& c) {
    Rational g("1000000000000000000000000000000");  // 1e30
    return BigFloat::from_rational(g, c.bits);
  }
  static long certified_bits_cap(const Config& c) { return static_cast<long>(c.bits); }
  static std::string describe(const Config& c) { return "float:" + std::to_string(c.bits); }
  static std::string print(const BigFloat& x) { return x.to_string(); }
};

template <class S>
using scalar_config_t = typename scalar_traits<S>::Config;

template <class S>
std::vector<S> zero_vector(size_t n, const scalar_config_t<S>& cfg) {
  std::vector<S> v;
  v.reserve(n);
  for (size_t i = 0; i < n; ++i) v.push_back(scalar_traits<S>::zero(cfg));
  return v;
}

template <class S>
std::vector<Rational> to_rational_vector(const std::vector<S>& v) {
  std::vector<Rational> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(scalar_traits<S>::to_rational(x));
  return out;
}

template <class S>
std::vector<S> from_rational_vector(const std::vector<Rational>& v, const scalar_config_t<S>& cfg) {
  std::vector<S> out;
  out.reserve(v.size());
  for (const auto& q : v) out.push_back(scalar_traits<S>::from_rational(q, cfg));
  return out;
}

template <class S>
S inf_norm_diff(const std::vector<S>& a, const std::vector<S>& b) {
  if (a.size() != b.size()) raise(errc::dimension_mismatch, "vector sizes differ");
  auto cfg = scalar_traits<S>::config_of(a);
  S best = scalar_traits<S>::zero(cfg);
  for (size_t i = 0; i < a.size(); ++i) {
    S d = abs(a[i] - b[i]);
    if (d > best) best = d;
  }
  return best;
}

template <class S>
bool componentwise_le(const std::vector<S>& a, const std::vector<S>& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (!(a[i] <= b[i])) return false;
  return true;
}

template <class S>
bool componentwise_lt(const std::vector<S>& a, const std::vector<S>& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (!(a[i] < b[i])) return false;
  return true;
}

}  // namespace sppfix
