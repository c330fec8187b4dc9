#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

#include "sppfix/errors.hpp"

namespace sppfix {

// Exact arbitrary-precision rational, always kept in lowest terms.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// 2^k as an exact rational, k may be negative.
inline Rational pow2(long k) {
  Integer one = 1;
  if (k >= 0) return Rational(one << static_cast<unsigned long>(k), 1);
  return Rational(one, one << static_cast<unsigned long>(-k));
}

// Smallest m >= 0 with z <= 2^m, for z >= 1. bits(1) = 0, bits(2) = 1, bits(10) = 4.
inline long ceil_log2(const Integer& z) {
  if (z <= 0) raise(errc::invalid_argument, "ceil_log2 of nonpositive integer");
  long width = static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2));
  bool power_of_two = mpz_popcount(z.get_mpz_t()) == 1;
  return power_of_two ? width - 1 : width;
}

// Largest i with 2^i <= q, exact.
inline long floor_log2(const Rational& q) {
  if (q <= 0) raise(errc::invalid_argument, "floor_log2 of nonpositive value");
  const Integer& num = q.get_num();
  const Integer& den = q.get_den();
  long i = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
  auto le = [&](long k) {  // 2^k <= q ?
    Integer lhs = den, rhs = num;
    if (k >= 0)
      lhs <<= static_cast<unsigned long>(k);
    else
      rhs <<= static_cast<unsigned long>(-k);
    return lhs <= rhs;
  };
  while (!le(i)) --i;
  while (le(i + 1)) ++i;
  return i;
}

// Smallest i with 2^i >= q, exact.
inline long ceil_log2(const Rational& q) {
  long f = floor_log2(q);
  return q == pow2(f) ? f : f + 1;
}

// Total size of the canonical representation, used by the exact-mode growth guard.
inline long rational_bits(const Rational& q) {
  return static_cast<long>(mpz_sizeinbase(q.get_num().get_mpz_t(), 2) +
                           mpz_sizeinbase(q.get_den().get_mpz_t(), 2));
}

// Exact square root when the value is a perfect square of a rational.
inline std::optional<Rational> exact_sqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  Integer num_root, den_root;
  if (mpz_perfect_square_p(q.get_num().get_mpz_t()) == 0) return std::nullopt;
  if (mpz_perfect_square_p(q.get_den().get_mpz_t()) == 0) return std::nullopt;
  mpz_sqrt(num_root.get_mpz_t(), q.get_num().get_mpz_t());
  mpz_sqrt(den_root.get_mpz_t(), q.get_den().get_mpz_t());
  return Rational(num_root, den_root);
}

// Parses "p/q", "123", or a decimal literal like "0.25" (decimals are exact: 0.4 -> 2/5).
// Rejects signs; the DSL has no negative values.
inline Rational parse_rational_literal(const std::string& text) {
  auto all_digits = [](const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  // base 10 always; gmp's base auto-detection would read leading zeros as octal
  auto to_integer = [](const std::string& s) { return Integer(s, 10); };

  if (text.empty()) raise(errc::syntax_error, "empty number literal");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    std::string num = text.substr(0, slash), den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      raise(errc::syntax_error, "bad fraction literal '" + text + "'");
    Integer num_z = to_integer(num), den_z = to_integer(den);
    if (den_z == 0) raise(errc::syntax_error, "zero denominator in '" + text + "'");
    Rational q(num_z, den_z);
    q.canonicalize();
    return q;
  }
  auto dot = text.find('.');
  if (dot == std::string::npos) {
    if (!all_digits(text)) raise(errc::syntax_error, "bad number literal '" + text + "'");
    return Rational(to_integer(text), 1);
  }
  std::string head = text.substr(0, dot), frac = text.substr(dot + 1);
  if ((!head.empty() && !all_digits(head)) || !all_digits(frac))
    raise(errc::syntax_error, "bad decimal literal '" + text + "'");
  Integer num = to_integer(head.empty() ? frac : head + frac);
  Integer den = 1;
  for (size_t i = 0; i < frac.size(); ++i) den *= 10;
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// "p/q" for non-integers, plain digits for integers.
inline std::string fraction_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// Exact decimal expansion when the denominator is of the form 2^a 5^b, else "p/q".
inline std::string decimal_or_fraction_string(const Rational& q) {
  Integer den = q.get_den();
  int twos = 0, fives = 0;
  while (den % 2 == 0) {
    den /= 2;
    ++twos;
  }
  while (den % 5 == 0) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return fraction_string(q);
  int digits = std::max(twos, fives);
  if (digits == 0) return q.get_num().get_str();
  Integer scaled = q.get_num();
  for (int i = 0; i < digits; ++i) scaled *= 10;
  scaled /= q.get_den();
  bool negative = scaled < 0;
  Integer magnitude(abs(scaled));
  std::string s = magnitude.get_str();
  if (static_cast<int>(s.size()) <= digits) s.insert(0, digits + 1 - s.size(), '0');
  s.insert(s.size() - digits, ".");
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return (negative ? "-" : "") + s;
}

}  // namespace sppfix
