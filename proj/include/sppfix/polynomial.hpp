#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "sppfix/scalar.hpp"

namespace sppfix {

// coeff * prod_v X_v^e_v with coeff > 0 and every exponent >= 1.
struct Monomial {
  Rational coeff;
  std::map<int, int> powers;  // variable index -> exponent

  int degree() const {
    int d = 0;
    for (auto& [v, e] : powers) d += e;
    return d;
  }
  bool contains(int var) const { return powers.count(var) != 0; }

  bool operator==(const Monomial& o) const = default;
};

// Sum of monomials plus a nonnegative constant. Monomials are merged and kept
// in a canonical order, so structural equality is meaningful.
struct Polynomial {
  std::vector<Monomial> monomials;
  Rational constant = Rational(0);

  void add_constant(const Rational& c) {
    Rational canon = c;
    canon.canonicalize();
    constant += canon;
  }

  void add_term(Rational coeff, std::map<int, int> powers) {
    coeff.canonicalize();
    if (coeff == 0) return;
    if (powers.empty()) {
      constant += coeff;
      return;
    }
    for (auto it = powers.begin(); it != powers.end();) {
      if (it->second == 0)
        it = powers.erase(it);
      else
        ++it;
    }
    if (powers.empty()) {
      constant += coeff;
      return;
    }
    for (auto& m : monomials)
      if (m.powers == powers) {
        m.coeff += coeff;
        return;
      }
    monomials.push_back(Monomial{coeff, std::move(powers)});
    std::sort(monomials.begin(), monomials.end(),
              [](const Monomial& a, const Monomial& b) { return a.powers < b.powers; });
  }

  int degree() const {
    int d = 0;
    for (auto& m : monomials) d = std::max(d, m.degree());
    return d;
  }

  bool contains(int var) const {
    return std::any_of(monomials.begin(), monomials.end(),
                       [&](const Monomial& m) { return m.contains(var); });
  }

  bool is_zero() const { return monomials.empty() && constant == 0; }

  // Largest variable index mentioned, or -1.
  int max_var() const {
    int v = -1;
    for (auto& m : monomials)
      if (!m.powers.empty()) v = std::max(v, m.powers.rbegin()->first);
    return v;
  }

  template <class S>
  S eval(const std::vector<S>& x, const scalar_config_t<S>& cfg) const {
    S acc = scalar_traits<S>::from_rational(constant, cfg);
    for (const auto& m : monomials) {
      S term = scalar_traits<S>::from_rational(m.coeff, cfg);
      for (auto& [v, e] : m.powers)
        for (int i = 0; i < e; ++i) term *= x[static_cast<size_t>(v)];
      acc += term;
    }
    return acc;
  }

  // d/dX_var evaluated at x.
  template <class S>
  S derivative_at(int var, const std::vector<S>& x, const scalar_config_t<S>& cfg) const {
    S acc = scalar_traits<S>::zero(cfg);
    for (const auto& m : monomials) {
      auto it = m.powers.find(var);
      if (it == m.powers.end()) continue;
      S term = scalar_traits<S>::from_rational(m.coeff * it->second, cfg);
      for (auto& [v, e] : m.powers) {
        int power = (v == var) ? e - 1 : e;
        for (int i = 0; i < power; ++i) term *= x[static_cast<size_t>(v)];
      }
      acc += term;
    }
    return acc;
  }

  // Replaces each assigned variable by an exact value; monomials whose value
  // factor vanishes are dropped, fully-ground monomials fold into the constant.
  Polynomial substitute(const std::map<int, Rational>& values) const {
    Polynomial out;
    out.constant = constant;
    for (const auto& m : monomials) {
      Rational c = m.coeff;
      std::map<int, int> rest;
      for (auto& [v, e] : m.powers) {
        auto it = values.find(v);
        if (it == values.end()) {
          rest[v] = e;
          continue;
        }
        for (int i = 0; i < e; ++i) c *= it->second;
      }
      if (c == 0) continue;
      out.add_term(c, std::move(rest));
    }
    return out;
  }

  // Rewrites variable indices; every mentioned variable must be mapped.
  Polynomial remap(const std::map<int, int>& index_map) const {
    Polynomial out;
    out.constant = constant;
    for (const auto& m : monomials) {
      std::map<int, int> powers;
      for (auto& [v, e] : m.powers) powers[index_map.at(v)] = e;
      out.add_term(m.coeff, std::move(powers));
    }
    return out;
  }

  bool operator==(const Polynomial& o) const = default;
};

}  // namespace sppfix
