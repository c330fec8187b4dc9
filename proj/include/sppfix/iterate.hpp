#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sppfix/clean.hpp"
#include "sppfix/decompose.hpp"
#include "sppfix/linear_solver.hpp"
#include "sppfix/system.hpp"

namespace sppfix {

enum class Method { kleene, newton, dnm, tangent };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::kleene: return "kleene";
    case Method::newton: return "newton";
    case Method::dnm: return "dnm";
    case Method::tangent: return "tangent";
  }
  return "?";
}

struct StopRule {
  std::optional<long> max_iters;
  std::optional<Rational> residual_below;      // on ||f(x) - x||_inf
  std::optional<long> target_certified_bits;   // honored by the certification driver
  std::optional<Rational> divergence_guard;    // default 1e30 (float) / 2^1024 (exact)
  long exact_bit_guard = 1L << 23;             // per-component size cap in exact mode

  static StopRule iterations(long k) {
    StopRule s;
    s.max_iters = k;
    return s;
  }

  void validate_for_run() const {
    if (!max_iters && !residual_below)
      raise(errc::invalid_argument, "stop rule needs max_iters or residual_below");
    if (max_iters && *max_iters < 0) raise(errc::invalid_argument, "negative max_iters");
  }
};

template <class S>
struct IterationTrace {
  Method method = Method::newton;
  std::vector<std::vector<S>> iterates;  // iterates[0] is the zero vector
  std::vector<S> residuals;              // residuals[k] = ||f(x_k) - x_k||_inf
  std::vector<SolveNote> solver_notes;   // one per linear solve (Newton-like methods)

  const std::vector<S>& last() const { return iterates.back(); }
  long steps() const { return static_cast<long>(iterates.size()) - 1; }
};

namespace detail {

template <class S>
S residual_inf(const SppSystem& sys, const std::vector<S>& x, const std::vector<S>& fx,
               const scalar_config_t<S>& cfg) {
  (void)sys;
  S best = scalar_traits<S>::zero(cfg);
  for (size_t i = 0; i < x.size(); ++i) {
    S d = abs(fx[i] - x[i]);
    if (d > best) best = d;
  }
  return best;
}

template <class S>
void guard_divergence(const std::vector<S>& x, const StopRule& stop,
                      const scalar_config_t<S>& cfg) {
  S guard = stop.divergence_guard
                ? scalar_traits<S>::from_rational(*stop.divergence_guard, cfg)
                : scalar_traits<S>::default_divergence_guard(cfg);
  for (const auto& v : x)
    if (v > guard)
      raise(errc::divergence_suspected,
            "iterate exceeded the divergence guard; the system looks infeasible");
}

template <class S>
void guard_exact_growth(const std::vector<S>& x, const StopRule& stop) {
  if constexpr (scalar_traits<S>::is_exact) {
    for (const auto& v : x)
      if (rational_bits(v) > stop.exact_bit_guard)
        raise(errc::exact_size_exceeded,
              "exact iterate grew past " + std::to_string(stop.exact_bit_guard) +
                  " bits per component; rerun in float mode or raise exact_bit_guard");
  }
}

// Rounding can push an iterate marginally below zero; pull those back onto
// the domain boundary.
template <class S>
void clamp_tiny_negatives(std::vector<S>& x, const scalar_config_t<S>& cfg) {
  if constexpr (!scalar_traits<S>::is_exact) {
    S zero = scalar_traits<S>::zero(cfg);
    S eps = scalar_traits<S>::negative_clamp_epsilon(cfg);
    for (auto& v : x)
      if (v < zero && -v < eps) v = zero;
  }
}

template <class S>
bool residual_stop(const StopRule& stop, const S& residual, const scalar_config_t<S>& cfg) {
  return stop.residual_below &&
         residual <= scalar_traits<S>::from_rational(*stop.residual_below, cfg);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Fixed-point iteration x_{k+1} = f(x_k) from zero: monotone convergence to
// the least fixed point, one bit of accuracy per iteration at best.
template <class S>
IterationTrace<S> kleene_run(const SppSystem& sys, const StopRule& stop,
                             const scalar_config_t<S>& cfg = {}) {
  require_clean(sys, "kleene_run");
  stop.validate_for_run();
  IterationTrace<S> trace;
  trace.method = Method::kleene;
  auto x = zero_vector<S>(sys.size(), cfg);
  auto fx = sys.eval(x, cfg);
  trace.iterates.push_back(x);
  trace.residuals.push_back(detail::residual_inf(sys, x, fx, cfg));
  while (true) {
    if (stop.max_iters && trace.steps() >= *stop.max_iters) break;
    if (detail::residual_stop(stop, trace.residuals.back(), cfg)) break;
    x = fx;
    detail::guard_divergence(x, stop, cfg);
    detail::guard_exact_growth(x, stop);
    fx = sys.eval(x, cfg);
    trace.iterates.push_back(x);
    trace.residuals.push_back(detail::residual_inf(sys, x, fx, cfg));
  }
  return trace;
}

// ---------------------------------------------------------------------------
// One Newton step: x + (Id - f'(x))^{-1} (f(x) - x).
template <class S>
std::vector<S> newton_step(const SppSystem& sys, const std::vector<S>& x,
                           const scalar_config_t<S>& cfg, SolveNote* note = nullptr) {
  if (x.size() != sys.size()) raise(errc::dimension_mismatch, "point has wrong dimension");
  auto fx = sys.eval(x, cfg);
  auto J = sys.jacobian_at(x, cfg);
  size_t n = sys.size();
  Mat<S> A(n, n, cfg);
  S one = scalar_traits<S>::one(cfg);
  S zero = scalar_traits<S>::zero(cfg);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      if (i == j)
        A(i, j) = one - J(i, j);
      else
        A(i, j) = zero - J(i, j);
    }
  auto b = zero_vector<S>(n, cfg);
  for (size_t i = 0; i < n; ++i) b[i] = fx[i] - x[i];
  auto d = solve_linear(std::move(A), std::move(b), scalar_traits<S>::pivot_epsilon(cfg), note);
  auto out = x;
  for (size_t i = 0; i < n; ++i) out[i] += d[i];
  return out;
}

template <class S>
std::vector<S> newton_step(const SppSystem& sys, const std::vector<S>& x) {
  return newton_step(sys, x, scalar_traits<S>::config_of(x));
}

// Newton sequence from zero. In exact mode every step is checked against the
// sandwich x <= f(x) <= next; a violation means the system is infeasible (no
// fixed point to converge to).
template <class S>
IterationTrace<S> newton_run(const SppSystem& sys, const StopRule& stop,
                             const scalar_config_t<S>& cfg = {}) {
  require_clean(sys, "newton_run");
  stop.validate_for_run();
  IterationTrace<S> trace;
  trace.method = Method::newton;
  auto x = zero_vector<S>(sys.size(), cfg);
  auto fx = sys.eval(x, cfg);
  trace.iterates.push_back(x);
  trace.residuals.push_back(detail::residual_inf(sys, x, fx, cfg));
  while (true) {
    if (stop.max_iters && trace.steps() >= *stop.max_iters) break;
    if (detail::residual_stop(stop, trace.residuals.back(), cfg)) break;
    SolveNote note;
    auto next = newton_step(sys, x, cfg, &note);
    detail::clamp_tiny_negatives(next, cfg);
    if constexpr (scalar_traits<S>::is_exact) {
      if (!(componentwise_le(x, fx) && componentwise_le(fx, next)))
        raise(errc::divergence_suspected,
              "Newton sandwich x <= f(x) <= N(x) violated; the system looks infeasible");
    } else {
      // a drop far beyond rounding jitter means there is no fixed point above
      S eps = scalar_traits<S>::from_rational(pow2(-static_cast<long>(cfg.bits / 4)), cfg);
      S one = scalar_traits<S>::one(cfg);
      for (size_t j = 0; j < next.size(); ++j) {
        S scale = abs(x[j]) > one ? abs(x[j]) : one;
        if (next[j] + eps * scale < x[j])
          raise(errc::divergence_suspected,
                "iterate dropped below its predecessor; the system looks infeasible");
      }
    }
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

// ---------------------------------------------------------------------------
// Decomposed Newton: solve SCCs bottom-up, spending i * 2^depth Newton steps
// on each SCC with the already-solved deeper components frozen. SCCs of equal
// depth do not interact, so their processing order is immaterial.

struct DnmBudget {
  long planned = 0;  // sum over depths of |SCC(t)| * i * 2^t
  long bound = 0;    // i * w * 2^(h+1)
};

inline DnmBudget dnm_budget_for(const Decomposition& d, long i) {
  if (i < 1) raise(errc::invalid_argument, "precision parameter must be >= 1");
  if (d.height > 56) raise(errc::invalid_argument, "condensation too deep");
  DnmBudget b;
  for (int t = 0; t <= d.height; ++t)
    b.planned += static_cast<long>(d.sccs_at_depth(t).size()) * i * (1L << t);
  b.bound = i * d.width * (1L << (d.height + 1));
  return b;
}

inline DnmBudget dnm_budget(const SppSystem& sys, long i) {
  return dnm_budget_for(scc_decompose(sys), i);
}

template <class S>
struct DnmResult {
  std::vector<S> value;
  long newton_steps = 0;
  Decomposition decomposition;
};

template <class S>
DnmResult<S> dnm_run(const SppSystem& sys, long i, const scalar_config_t<S>& cfg = {},
                     const StopRule& guards = {}) {
  require_clean(sys, "dnm_run");
  if (i < 1) raise(errc::invalid_argument, "precision parameter must be >= 1");
  DnmResult<S> result;
  result.decomposition = scc_decompose(sys);
  const Decomposition& d = result.decomposition;
  if (d.height > 56) raise(errc::invalid_argument, "condensation too deep");

  size_t n = sys.size();
  auto x = zero_vector<S>(n, cfg);
  S one = scalar_traits<S>::one(cfg);
  S zero = scalar_traits<S>::zero(cfg);
  for (int scc_id : d.processing_order) {
    const auto& members = d.sccs[static_cast<size_t>(scc_id)];
    long steps = i * (1L << d.depth[static_cast<size_t>(scc_id)]);
    size_t k = members.size();
    for (long step = 0; step < steps; ++step) {
      auto fx = sys.eval(x, cfg);
      auto J = sys.jacobian_at(x, cfg);
      Mat<S> A(k, k, cfg);
      auto b = zero_vector<S>(k, cfg);
      for (size_t r = 0; r < k; ++r) {
        size_t vr = static_cast<size_t>(members[r]);
        b[r] = fx[vr] - x[vr];
        for (size_t c = 0; c < k; ++c) {
          size_t vc = static_cast<size_t>(members[c]);
          if (vr == vc)
            A(r, c) = one - J(vr, vc);
          else
            A(r, c) = zero - J(vr, vc);
        }
      }
      auto delta = solve_linear(std::move(A), std::move(b), scalar_traits<S>::pivot_epsilon(cfg));
      for (size_t r = 0; r < k; ++r) x[static_cast<size_t>(members[r])] += delta[r];
      detail::clamp_tiny_negatives(x, cfg);
      detail::guard_exact_growth(x, guards);
      ++result.newton_steps;
    }
  }
  result.value = std::move(x);
  return result;
}

}  // namespace sppfix
