#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "sppfix/mat.hpp"
#include "sppfix/polynomial.hpp"

namespace sppfix {

// The fixed-point equation system X = f(X): one polynomial with nonnegative
// coefficients per variable. Immutable by convention once built.
struct SppSystem {
  std::vector<std::string> variables;
  std::vector<Polynomial> equations;

  size_t size() const { return variables.size(); }

  void validate() const {
    if (variables.size() != equations.size())
      raise(errc::dimension_mismatch, "variable/equation count mismatch");
    int n = static_cast<int>(variables.size());
    for (const auto& eq : equations) {
      if (eq.constant < 0) raise(errc::negative_coefficient, "negative constant term");
      for (const auto& m : eq.monomials) {
        if (m.coeff < 0) raise(errc::negative_coefficient, "negative monomial coefficient");
        if (!m.powers.empty() && (m.powers.begin()->first < 0 || m.powers.rbegin()->first >= n))
          raise(errc::dimension_mismatch, "monomial references unknown variable index");
      }
    }
  }

  int max_degree() const {
    int d = 0;
    for (auto& eq : equations) d = std::max(d, eq.degree());
    return d;
  }
  bool is_quadratic() const { return max_degree() <= 2; }
  bool is_linear() const { return max_degree() <= 1; }

  // f(0) > 0 in every component.
  bool constant_terms_positive() const {
    for (auto& eq : equations)
      if (!(eq.constant > 0)) return false;
    return true;
  }

  // f(1) <= 1 componentwise: certifies that the all-ones vector dominates some
  // fixed point, hence the least fixed point is <= 1.
  bool maps_ones_below_ones() const {
    for (auto& eq : equations) {
      Rational v = eq.constant;
      for (auto& m : eq.monomials) v += m.coeff;
      if (v > 1) return false;
    }
    return true;
  }

  int index_of(const std::string& name) const {
    for (size_t i = 0; i < variables.size(); ++i)
      if (variables[i] == name) return static_cast<int>(i);
    raise(errc::unknown_variable, "no variable named '" + name + "'");
  }

  template <class S>
  std::vector<S> eval(const std::vector<S>& x, const scalar_config_t<S>& cfg) const {
    if (x.size() != size()) raise(errc::dimension_mismatch, "point has wrong dimension");
    std::vector<S> out;
    out.reserve(size());
    for (const auto& eq : equations) out.push_back(eq.template eval<S>(x, cfg));
    return out;
  }
  template <class S>
  std::vector<S> eval(const std::vector<S>& x) const {
    return eval(x, scalar_traits<S>::config_of(x));
  }

  // Jacobian f'(x): entry (i, j) = d f_i / d X_j at x.
  template <class S>
  Mat<S> jacobian_at(const std::vector<S>& x, const scalar_config_t<S>& cfg) const {
    if (x.size() != size()) raise(errc::dimension_mismatch, "point has wrong dimension");
    Mat<S> J(size(), size(), cfg);
    for (size_t i = 0; i < size(); ++i)
      for (size_t j = 0; j < size(); ++j)
        J(i, j) = equations[i].template derivative_at<S>(static_cast<int>(j), x, cfg);
    return J;
  }
  template <class S>
  Mat<S> jacobian_at(const std::vector<S>& x) const {
    return jacobian_at(x, scalar_traits<S>::config_of(x));
  }

  // Grounds the given variables at exact values and drops them from the
  // system; remaining variables are reindexed in their original order.
  SppSystem substitute(const std::map<int, Rational>& values) const {
    SppSystem out;
    std::map<int, int> remap;
    for (size_t i = 0; i < size(); ++i) {
      if (values.count(static_cast<int>(i))) continue;
      remap[static_cast<int>(i)] = static_cast<int>(out.variables.size());
      out.variables.push_back(variables[i]);
    }
    for (size_t i = 0; i < size(); ++i) {
      if (values.count(static_cast<int>(i))) continue;
      out.equations.push_back(equations[i].substitute(values).remap(remap));
    }
    return out;
  }

  // Restriction to a component subset, keeping only monomials over that
  // subset. Used with substitute() when splitting along SCCs.
  SppSystem restrict_to(const std::vector<int>& members) const {
    SppSystem out;
    std::map<int, int> remap;
    for (int v : members) {
      remap[v] = static_cast<int>(out.variables.size());
      out.variables.push_back(variables[static_cast<size_t>(v)]);
    }
    for (int v : members) out.equations.push_back(equations[static_cast<size_t>(v)].remap(remap));
    return out;
  }

  bool operator==(const SppSystem& o) const = default;
};

// Canonical text form; parse(print(sys)) is structurally equal to sys.
inline std::string print_monomial(const SppSystem& sys, const Monomial& m) {
  std::string s = decimal_or_fraction_string(m.coeff);
  for (auto& [v, e] : m.powers) {
    s += "*" + sys.variables[static_cast<size_t>(v)];
    if (e > 1) s += "^" + std::to_string(e);
  }
  return s;
}

inline std::string print_system(const SppSystem& sys) {
  std::string out;
  for (size_t i = 0; i < sys.size(); ++i) {
    const Polynomial& eq = sys.equations[i];
    out += sys.variables[i] + " =";
    bool first = true;
    for (const auto& m : eq.monomials) {
      out += first ? " " : " + ";
      out += print_monomial(sys, m);
      first = false;
    }
    if (eq.constant != 0 || first) {
      out += first ? " " : " + ";
      out += decimal_or_fraction_string(eq.constant);
    }
    out += "\n";
  }
  return out;
}

// The hard family for Newton's convergence rate: a chain of n singleton
// components where the error of component j+1 is roughly the square root of
// the error of component j, so each extra bit of the last component costs
// 2^(n-1) iterations. Least fixed point is the all-ones vector.
inline SppSystem worst_case_family(int n) {
  if (n < 1) raise(errc::invalid_argument, "family size must be >= 1");
  SppSystem sys;
  for (int i = 1; i <= n; ++i) sys.variables.push_back("X" + std::to_string(i));
  Polynomial first;
  first.add_term(Rational(1, 2), {{0, 2}});
  first.add_constant(Rational(1, 2));
  sys.equations.push_back(first);
  for (int j = 1; j < n; ++j) {
    Polynomial eq;
    eq.add_term(Rational(1, 4), {{j - 1, 2}});
    eq.add_term(Rational(1, 2), {{j - 1, 1}, {j, 1}});
    eq.add_term(Rational(1, 4), {{j, 2}});
    sys.equations.push_back(eq);
  }
  return sys;
}

}  // namespace sppfix
