#pragma once

#include <vector>

#include "sppfix/iterate.hpp"

namespace sppfix {

// Geometric view of a quadratic strongly connected system: each equation
// defines a quadric surface q_i = f_i - X_i = 0, every iterate lives in the
// region below all surfaces, and a tangent plane taken at the surface point
// straight above the iterate gives a step at least as large as Newton's.

namespace geometry_detail {

inline void require_quadratic_scspp(const SppSystem& sys, const char* op) {
  if (!sys.is_quadratic()) raise(errc::not_quadratic, std::string(op) + " needs degree <= 2");
  require_clean(sys, op);
  if (!is_strongly_connected(sys))
    raise(errc::not_strongly_connected, std::string(op) + " needs a strongly connected system");
}

// Coefficients of q_i as a univariate quadratic a*t^2 + b*t + c in X_i, with
// the other components frozen at the given full point (its i-th entry is
// ignored).
template <class S>
void univariate_residual(const SppSystem& sys, int i, const std::vector<S>& point,
                         const scalar_config_t<S>& cfg, S& a, S& b, S& c) {
  a = scalar_traits<S>::zero(cfg);
  b = scalar_traits<S>::zero(cfg) - scalar_traits<S>::one(cfg);  // the -X_i of q_i
  c = scalar_traits<S>::zero(cfg);
  const Polynomial& eq = sys.equations[static_cast<size_t>(i)];
  c += scalar_traits<S>::from_rational(eq.constant, cfg);
  for (const auto& m : eq.monomials) {
    auto it = m.powers.find(i);
    int self_power = it == m.powers.end() ? 0 : it->second;
    S factor = scalar_traits<S>::from_rational(m.coeff, cfg);
    for (auto& [v, e] : m.powers) {
      if (v == i) continue;
      for (int rep = 0; rep < e; ++rep) factor *= point[static_cast<size_t>(v)];
    }
    if (self_power == 0)
      c += factor;
    else if (self_power == 1)
      b += factor;
    else
      a += factor;
  }
}

}  // namespace geometry_detail

// Height of surface i above the point: the least nonnegative root of the
// univariate quadratic q_i(X_i, x_rest). x_rest lists the other components in
// variable order (size n-1). Float mode clamps a discriminant in
// (-2^(-bits/2), 0) to zero.
template <class S>
S surface_height(const SppSystem& sys, int i, const std::vector<S>& x_rest,
                 const scalar_config_t<S>& cfg = {}) {
  geometry_detail::require_quadratic_scspp(sys, "surface_height");
  if (i < 0 || static_cast<size_t>(i) >= sys.size())
    raise(errc::dimension_mismatch, "component index out of range");
  if (x_rest.size() + 1 != sys.size())
    raise(errc::dimension_mismatch, "x_rest must have n-1 components");

  std::vector<S> point;
  point.reserve(sys.size());
  for (size_t j = 0, r = 0; j < sys.size(); ++j)
    point.push_back(j == static_cast<size_t>(i) ? scalar_traits<S>::zero(cfg) : x_rest[r++]);

  S a, b, c;
  geometry_detail::univariate_residual(sys, i, point, cfg, a, b, c);
  S zero = scalar_traits<S>::zero(cfg);

  if (a == zero) {
    // (b)t + c = 0 with b = b_f - 1
    if (b == zero) {
      if (c == zero) return zero;
      raise(errc::no_real_root, "no finite root; point is outside the valid region");
    }
    S root = (zero - c) / b;
    if (root < zero) raise(errc::no_real_root, "no nonnegative root");
    return root;
  }

  S disc = b * b - scalar_traits<S>::from_rational(Rational(4), cfg) * a * c;
  if constexpr (!scalar_traits<S>::is_exact) {
    if (disc < zero && zero - disc < scalar_traits<S>::negative_clamp_epsilon(cfg)) disc = zero;
  }
  if (disc < zero) raise(errc::no_real_root, "negative discriminant; point is outside the valid region");
  S sq = scalar_traits<S>::sqrt(disc);
  S two_a = a + a;
  S r_low = ((zero - b) - sq) / two_a;
  S r_high = ((zero - b) + sq) / two_a;
  if (r_low >= zero) return r_low;
  if (r_high >= zero) return r_high;
  raise(errc::no_real_root, "both roots negative");
}

// x >= 0 and f(x) >= x componentwise. Membership of iterates below the least
// fixed point is guaranteed by construction and is not re-checked here.
template <class S>
bool in_region(const SppSystem& sys, const std::vector<S>& x,
               const scalar_config_t<S>& cfg = {}) {
  geometry_detail::require_quadratic_scspp(sys, "in_region");
  if (x.size() != sys.size()) raise(errc::dimension_mismatch, "point has wrong dimension");
  S zero = scalar_traits<S>::zero(cfg);
  for (const auto& v : x)
    if (v < zero) return false;
  auto fx = sys.eval(x, cfg);
  for (size_t j = 0; j < x.size(); ++j)
    if (fx[j] < x[j]) return false;
  return true;
}

// One step of the tangent-plane method: for each i move straight up from x to
// the surface point pi_i = (x_{-i}, h_i(x_{-i})), take the tangent plane of
// q_i there, and intersect the n planes. Dominates the Newton step from x and
// never overshoots the least fixed point.
template <class S>
std::vector<S> tangent_step(const SppSystem& sys, const std::vector<S>& x,
                            const scalar_config_t<S>& cfg = {}, SolveNote* note = nullptr) {
  geometry_detail::require_quadratic_scspp(sys, "tangent_step");
  if (x.size() != sys.size()) raise(errc::dimension_mismatch, "point has wrong dimension");
  if (!in_region(sys, x, cfg))
    raise(errc::region_violation, "tangent_step needs f(x) >= x >= 0");

  size_t n = sys.size();
  S one = scalar_traits<S>::one(cfg);
  Mat<S> A(n, n, cfg);
  auto rhs = zero_vector<S>(n, cfg);
  for (size_t i = 0; i < n; ++i) {
    std::vector<S> rest;
    rest.reserve(n - 1);
    for (size_t j = 0; j < n; ++j)
      if (j != i) rest.push_back(x[j]);
    S height = surface_height(sys, static_cast<int>(i), rest, cfg);
    auto pi = x;
    pi[i] = height;
    auto fpi = sys.eval(pi, cfg);
    S q_at_pi = fpi[i] - pi[i];
    // row = grad q_i(pi) = (row i of f'(pi)) - e_i ; rhs = row*pi - q_i(pi)
    S dot = scalar_traits<S>::zero(cfg);
    for (size_t j = 0; j < n; ++j) {
      S entry = sys.equations[i].template derivative_at<S>(static_cast<int>(j), pi, cfg);
      if (j == i) entry -= one;
      A(i, j) = entry;
      dot += entry * pi[j];
    }
    rhs[i] = dot - q_at_pi;
  }
  return solve_linear(std::move(A), std::move(rhs), scalar_traits<S>::pivot_epsilon(cfg), note);
}

// Tangent-method iteration from zero, same stop rules as newton_run.
template <class S>
IterationTrace<S> tangent_run(const SppSystem& sys, const StopRule& stop,
                              const scalar_config_t<S>& cfg = {}) {
  geometry_detail::require_quadratic_scspp(sys, "tangent_run");
  stop.validate_for_run();
  IterationTrace<S> trace;
  trace.method = Method::tangent;
  auto x = zero_vector<S>(sys.size(), cfg);
  auto fx = sys.eval(x, cfg);
  trace.iterates.push_back(x);
  trace.residuals.push_back(detail::residual_inf(sys, x, fx, cfg));
  while (true) {
    if (stop.max_iters && trace.steps() >= *stop.max_iters) break;
    if (detail::residual_stop(stop, trace.residuals.back(), cfg)) break;
    if (!in_region(sys, x, cfg)) {
      // at convergence rounding can push f(x) - x a final ulp below zero
      if (trace.residuals.back() < scalar_traits<S>::pivot_epsilon(cfg)) break;
      raise(errc::region_violation, "iterate left the valid region");
    }
    SolveNote note;
    auto next = tangent_step(sys, x, cfg, &note);
    detail::clamp_tiny_negatives(next, cfg);
    detail::guard_divergence(next, stop, cfg);
    detail::guard_exact_growth(next, stop);
    x = std::move(next);
    fx = sys.eval(x, cfg);
    trace.iterates.push_back(x);
    trace.residuals.push_back(detail::residual_inf(sys, x, fx, cfg));
    trace.solver_notes.push_back(note);
  }
  return trace;
}

}  // namespace sppfix
