#pragma once

#include <set>
#include <string>
#include <vector>

#include "sppfix/clean.hpp"
#include "sppfix/system.hpp"

namespace sppfix {

// One auxiliary variable standing for the product of two earlier variables.
struct AuxProduct {
  int var;       // index of the auxiliary in the reduced system
  int factor_a;  // both factors have smaller indices than var
  int factor_b;
};

struct QuadraticReduction {
  SppSystem reduced;
  size_t original_size = 0;
  std::vector<AuxProduct> lift;  // in introduction order

  // Extends a point of the original system with the recorded products. On a
  // fixed point of the original this yields a fixed point of the reduced
  // system, and the first original_size components always project back.
  template <class S>
  std::vector<S> lift_point(const std::vector<S>& x) const {
    if (x.size() != original_size) raise(errc::dimension_mismatch, "point has wrong dimension");
    std::vector<S> out = x;
    out.reserve(reduced.size());
    for (const auto& p : lift)
      out.push_back(out[static_cast<size_t>(p.factor_a)] * out[static_cast<size_t>(p.factor_b)]);
    return out;
  }
};

namespace detail {

inline std::string fresh_variable_name(const std::set<std::string>& taken, int counter) {
  while (true) {
    std::string name = "_q" + std::to_string(counter);
    if (!taken.count(name)) return name;
    ++counter;
  }
}

}  // namespace detail

// Degree reduction: repeatedly rewrites a product pair X_a*X_b inside some
// monomial of degree > 2 into a fresh variable Y with the extra equation
// Y = X_a*X_b, until every equation has degree <= 2. Deterministic choices:
// lowest-index offending equation, canonically first monomial of maximal
// degree, the pair of its two largest variable indices; an identical pair
// reuses its existing auxiliary.
inline QuadraticReduction reduce_to_quadratic(const SppSystem& input) {
  require_clean(input, "reduce_to_quadratic");
  QuadraticReduction red;
  red.reduced = input;
  red.original_size = input.size();

  std::set<std::string> taken(input.variables.begin(), input.variables.end());
  std::map<std::pair<int, int>, int> known_products;
  int fresh_counter = 0;

  SppSystem& sys = red.reduced;
  while (true) {
    size_t eq_idx = sys.size();
    for (size_t i = 0; i < sys.size(); ++i)
      if (sys.equations[i].degree() > 2) {
        eq_idx = i;
        break;
      }
    if (eq_idx == sys.size()) break;

    Polynomial& eq = sys.equations[eq_idx];
    int deg = eq.degree();
    size_t mono_idx = 0;
    for (size_t m = 0; m < eq.monomials.size(); ++m)
      if (eq.monomials[m].degree() == deg) {
        mono_idx = m;
        break;
      }
    Monomial target = eq.monomials[mono_idx];

    // Two largest factor indices, with multiplicity.
    auto it = target.powers.rbegin();
    int b = it->first;
    int a;
    if (it->second >= 2) {
      a = b;
    } else {
      a = std::next(it)->first;
    }

    int aux;
    auto known = known_products.find({a, b});
    if (known != known_products.end()) {
      aux = known->second;
    } else {
      aux = static_cast<int>(sys.size());
      std::string name = detail::fresh_variable_name(taken, fresh_counter++);
      taken.insert(name);
      sys.variables.push_back(name);
      Polynomial product;
      std::map<int, int> pair_powers;
      pair_powers[a] += 1;
      pair_powers[b] += 1;
      product.add_term(Rational(1), std::move(pair_powers));
      sys.equations.push_back(product);
      known_products[{a, b}] = aux;
      red.lift.push_back(AuxProduct{aux, a, b});
    }

    // Replace one occurrence of X_a*X_b in the chosen monomial by the auxiliary.
    Monomial rewritten = target;
    auto dec = [&](int v) {
      auto p = rewritten.powers.find(v);
      if (--p->second == 0) rewritten.powers.erase(p);
    };
    dec(a);
    dec(b);
    rewritten.powers[aux] += 1;

    Polynomial& eq_again = sys.equations[eq_idx];  // re-take: vector may have grown
    eq_again.monomials.erase(eq_again.monomials.begin() + static_cast<long>(mono_idx));
    eq_again.add_term(rewritten.coeff, rewritten.powers);
  }
  return red;
}

}  // namespace sppfix
