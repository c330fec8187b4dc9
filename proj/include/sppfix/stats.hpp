#pragma once

#include <algorithm>

#include "sppfix/system.hpp"

namespace sppfix {

// Syntactic size parameters of a system: the smallest nonzero coefficient
// (constants included) and the smallest m such that every coefficient, in
// lowest terms, is a ratio of integers <= 2^m. With that reading bits(1) = 0
// and bits(2) = 1, which is the convention the threshold formulas assume; m
// is clamped to >= 1.
struct CoefficientStats {
  Rational c_min;
  long m = 1;
  long n = 0;
  int max_degree = 0;
};

inline CoefficientStats coefficient_stats(const SppSystem& sys) {
  if (sys.size() == 0) raise(errc::empty_system, "no equations");
  CoefficientStats st;
  st.n = static_cast<long>(sys.size());
  st.max_degree = sys.max_degree();
  bool have = false;
  long m = 0;
  auto account = [&](const Rational& c) {
    if (c == 0) return;
    if (!have || c < st.c_min) st.c_min = c;
    have = true;
    m = std::max(m, ceil_log2(Integer(abs(c.get_num()))));
    m = std::max(m, ceil_log2(c.get_den()));
  };
  for (const auto& eq : sys.equations) {
    account(eq.constant);
    for (const auto& mono : eq.monomials) account(mono.coeff);
  }
  if (!have) raise(errc::empty_system, "system has no nonzero coefficients");
  st.m = std::max(1L, m);
  return st;
}

}  // namespace sppfix
