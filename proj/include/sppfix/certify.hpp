#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sppfix/decompose.hpp"
#include "sppfix/iterate.hpp"
#include "sppfix/quadratic.hpp"
#include "sppfix/stats.hpp"

namespace sppfix {

enum class Justification { proximity2, known_fixed_point_at_one, user_supplied };

inline const char* justification_name(Justification j) {
  switch (j) {
    case Justification::proximity2: return "Proximity2";
    case Justification::known_fixed_point_at_one: return "KnownFixedPointAtOne";
    case Justification::user_supplied: return "UserSupplied";
  }
  return "?";
}

struct CertificateParams {
  Rational c_min = Rational(0);
  Rational nu_min = Rational(0);
  long n = 0;
  Rational step_diff = Rational(0);  // ||nu_k - nu_{k-1}||_inf
};

// Two-sided enclosure lower <= mu <= upper with the number of relative-error
// bits it certifies, measured against the lower bound (which under-estimates
// the fixed point, so the count is sound).
template <class S>
struct Certificate {
  std::vector<S> lower;
  std::vector<S> upper;
  long certified_bits = 0;
  Justification justification = Justification::proximity2;
  CertificateParams params;
};

// Largest i >= 0 such that (upper_j - lower_j) / lower_j <= 2^-i for all j;
// cap is returned for a zero-width enclosure, 0 when even i = 0 fails.
template <class S>
long certified_bits(const std::vector<S>& lower, const std::vector<S>& upper, long cap) {
  if (lower.size() != upper.size()) raise(errc::dimension_mismatch, "bound sizes differ");
  if (lower.empty()) raise(errc::empty_system, "empty bound vectors");
  Rational worst(0);
  for (size_t j = 0; j < lower.size(); ++j) {
    Rational lo = scalar_traits<S>::to_rational(lower[j]);
    Rational hi = scalar_traits<S>::to_rational(upper[j]);
    if (lo < 0 || hi < lo) raise(errc::invalid_argument, "need 0 <= lower <= upper");
    if (lo == 0) raise(errc::zero_component, "lower bound has a zero component");
    Rational rel = (hi - lo) / lo;
    if (rel > worst) worst = rel;
  }
  if (worst == 0) return cap;
  if (worst > 1) return 0;
  return std::min(cap, floor_log2(Rational(1) / worst));
}

template <class S>
long certified_bits(const std::vector<S>& lower, const std::vector<S>& upper,
                    const scalar_config_t<S>& cfg = {}) {
  return certified_bits(lower, upper, scalar_traits<S>::certified_bits_cap(cfg));
}

namespace certify_detail {

inline void require_quadratic_sc(const SppSystem& sys, const char* op) {
  if (!sys.is_quadratic()) raise(errc::not_quadratic, std::string(op) + " needs degree <= 2");
  require_clean(sys, op);
  // A single component is always admissible: the bound formula degenerates
  // soundly even without a self-dependence.
  if (sys.size() > 1 && !is_strongly_connected(sys))
    raise(errc::not_strongly_connected, std::string(op) + " needs a strongly connected system");
}

}  // namespace certify_detail

// A-posteriori enclosure from two consecutive Newton iterates of a quadratic
// strongly connected system:
//   nu_k <= mu <= nu_k + || nu_k - nu_{k-1} ||_inf / (c_min * min(nu_min, 1))^n.
template <class S>
Certificate<S> upper_bound_scspp(const SppSystem& sys, const std::vector<S>& nu_prev,
                                 const std::vector<S>& nu_curr,
                                 const scalar_config_t<S>& cfg = {}) {
  certify_detail::require_quadratic_sc(sys, "upper_bound_scspp");
  if (nu_prev.size() != sys.size() || nu_curr.size() != sys.size())
    raise(errc::dimension_mismatch, "iterates have wrong dimension");
  S zero = scalar_traits<S>::zero(cfg);
  for (const auto& v : nu_curr)
    if (!(v > zero)) raise(errc::zero_component, "current iterate must be strictly positive");

  auto stats = coefficient_stats(sys);
  S c_min = scalar_traits<S>::from_rational(stats.c_min, cfg);
  S nu_min = nu_curr[0];
  for (const auto& v : nu_curr)
    if (v < nu_min) nu_min = v;
  S one = scalar_traits<S>::one(cfg);
  S base = c_min * (nu_min < one ? nu_min : one);
  S denom = one;
  for (long i = 0; i < stats.n; ++i) denom *= base;
  S diff = inf_norm_diff(nu_curr, nu_prev);
  S bound = diff / denom;

  Certificate<S> cert;
  cert.lower = nu_curr;
  cert.upper = nu_curr;
  for (auto& v : cert.upper) v += bound;
  cert.certified_bits = certified_bits<S>(cert.lower, cert.upper, cfg);
  cert.justification = Justification::proximity2;
  cert.params = CertificateParams{stats.c_min, scalar_traits<S>::to_rational(nu_min), stats.n,
                                  scalar_traits<S>::to_rational(diff)};
  return cert;
}

// When f(1) <= 1 the all-ones vector dominates a fixed point, so it is a
// valid upper bound for any lower iterate.
template <class S>
Certificate<S> certificate_at_one(const SppSystem& sys, const std::vector<S>& lower,
                                  const scalar_config_t<S>& cfg = {}) {
  if (!sys.maps_ones_below_ones())
    raise(errc::side_condition_unmet, "f(1) <= 1 fails, the all-ones bound is not justified");
  if (lower.size() != sys.size()) raise(errc::dimension_mismatch, "iterate has wrong dimension");
  Certificate<S> cert;
  cert.lower = lower;
  cert.upper = std::vector<S>(sys.size(), scalar_traits<S>::one(cfg));
  cert.certified_bits = certified_bits<S>(cert.lower, cert.upper, cfg);
  cert.justification = Justification::known_fixed_point_at_one;
  cert.params.n = static_cast<long>(sys.size());
  return cert;
}

// ---------------------------------------------------------------------------
// Convergence thresholds: after k_f iterations Newton gains at least one
// valid bit per iteration on a quadratic strongly connected system.

enum class ThresholdKind {
  estimate,              // ceil(log2(mu_max / (mu_min * (c_min min(mu_min,1))^n)))
  estimate_with_mu_min,  // 4mn + ceil(3n max(0, -log2 mu_min))
  syntactic_4mn2n,
  syntactic_7mn,        // needs f(0) > 0
  syntactic_2mn_plus_m  // needs f(0) > 0 and mu_max <= 1
};

inline const char* threshold_kind_name(ThresholdKind k) {
  switch (k) {
    case ThresholdKind::estimate: return "Estimate";
    case ThresholdKind::estimate_with_mu_min: return "EstimateWithMuMin";
    case ThresholdKind::syntactic_4mn2n: return "Syntactic4mn2n";
    case ThresholdKind::syntactic_7mn: return "Syntactic7mn";
    case ThresholdKind::syntactic_2mn_plus_m: return "Syntactic2mn_plus_m";
  }
  return "?";
}

struct Threshold {
  ThresholdKind kind = ThresholdKind::estimate;
  long value = 0;
  CoefficientStats stats;
  std::optional<Rational> mu_min_lb;
  std::optional<Rational> mu_max_ub;
};

inline Threshold threshold_estimate(const SppSystem& sys, const Rational& mu_min_lb,
                                    const Rational& mu_max_ub) {
  certify_detail::require_quadratic_sc(sys, "threshold_estimate");
  if (mu_min_lb <= 0 || mu_max_ub <= 0)
    raise(errc::non_positive_bound, "fixed-point bounds must be positive");
  Threshold th;
  th.kind = ThresholdKind::estimate;
  th.stats = coefficient_stats(sys);
  th.mu_min_lb = mu_min_lb;
  th.mu_max_ub = mu_max_ub;
  Rational base = th.stats.c_min * std::min(mu_min_lb, Rational(1));
  Rational denom = mu_min_lb;
  for (long i = 0; i < th.stats.n; ++i) denom *= base;
  th.value = std::max(0L, ceil_log2(mu_max_ub / denom));
  return th;
}

inline Threshold threshold_syntactic(const SppSystem& sys, ThresholdKind kind,
                                     std::optional<Rational> mu_min_lb = std::nullopt,
                                     bool assert_mu_max_le_one = false) {
  certify_detail::require_quadratic_sc(sys, "threshold_syntactic");
  Threshold th;
  th.kind = kind;
  th.stats = coefficient_stats(sys);
  long m = th.stats.m, n = th.stats.n;
  if (n > 40) raise(errc::invalid_argument, "system too large for the 2^n threshold");
  switch (kind) {
    case ThresholdKind::syntactic_4mn2n:
      th.value = 4 * m * n * (1L << n);
      break;
    case ThresholdKind::syntactic_7mn:
      if (!sys.constant_terms_positive())
        raise(errc::side_condition_unmet, "f(0) > 0 fails: some equation has no constant term");
      th.value = 7 * m * n;
      break;
    case ThresholdKind::syntactic_2mn_plus_m:
      if (!sys.constant_terms_positive())
        raise(errc::side_condition_unmet, "f(0) > 0 fails: some equation has no constant term");
      if (!sys.maps_ones_below_ones() && !assert_mu_max_le_one)
        raise(errc::side_condition_unmet,
              "mu_max <= 1 is not established: f(1) <= 1 fails and no user assertion given");
      th.value = 2 * m * n + m;
      break;
    case ThresholdKind::estimate_with_mu_min: {
      if (!mu_min_lb || *mu_min_lb <= 0)
        raise(errc::non_positive_bound, "EstimateWithMuMin needs a positive mu_min lower bound");
      th.mu_min_lb = mu_min_lb;
      long extra = 0;
      if (*mu_min_lb < 1) {
        Rational pow = 1;
        Rational inv = Rational(1) / *mu_min_lb;
        for (long i = 0; i < 3 * n; ++i) pow *= inv;  // (1/mu_min)^(3n)
        extra = ceil_log2(pow);
      }
      th.value = 4 * m * n + extra;
      break;
    }
    case ThresholdKind::estimate:
      raise(errc::invalid_argument, "use threshold_estimate for the two-sided form");
  }
  return th;
}

// ---------------------------------------------------------------------------
// Diagnostics.

// Approximate direction d > 0 with f'(x) d <= d (exact at the fixed point):
// d = (Id - f'(x))^{-1} 1, scaled to ||d||_inf = 1. The residual reports how
// far the inequality fails at x.
template <class S>
struct ConeVectorEstimate {
  std::vector<S> vector;
  S residual;
};

template <class S>
ConeVectorEstimate<S> cone_vector_estimate(const SppSystem& sys, const std::vector<S>& x,
                                           const scalar_config_t<S>& cfg = {}) {
  require_clean(sys, "cone_vector_estimate");
  if (!is_strongly_connected(sys))
    raise(errc::not_strongly_connected, "cone_vector_estimate needs a strongly connected system");
  if (x.size() != sys.size()) raise(errc::dimension_mismatch, "point has wrong dimension");
  size_t n = sys.size();
  auto J = sys.jacobian_at(x, cfg);
  S one = scalar_traits<S>::one(cfg);
  S zero = scalar_traits<S>::zero(cfg);
  Mat<S> A(n, n, cfg);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) A(i, j) = (i == j ? one - J(i, j) : zero - J(i, j));
  auto d = solve_linear(std::move(A), std::vector<S>(n, one), scalar_traits<S>::pivot_epsilon(cfg));
  S norm = d[0];
  for (const auto& v : d)
    if (v > norm) norm = v;
  for (auto& v : d) v /= norm;
  auto Jd = sys.jacobian_at(x, cfg).multiply(d);
  S residual = scalar_traits<S>::zero(cfg);
  for (size_t i = 0; i < n; ++i) {
    S gap = Jd[i] - d[i];
    if (gap > residual) residual = gap;
  }
  return ConeVectorEstimate<S>{std::move(d), std::move(residual)};
}

// Worst-case iterations-per-bit for systems that are not strongly connected:
// n * 2^n in general, (h+1) * 2^h through the condensation height. Purely
// informational; the matching threshold is not computable.
struct RateBound {
  long general = 0;
  long by_height = 0;
};

inline RateBound general_rate_bound(const SppSystem& sys) {
  long n = static_cast<long>(sys.size());
  if (n > 56) raise(errc::invalid_argument, "system too large for the 2^n bound");
  auto d = scc_decompose(sys);
  RateBound rb;
  rb.general = n * (1L << n);
  rb.by_height = (static_cast<long>(d.height) + 1) * (1L << d.height);
  return rb;
}

// ---------------------------------------------------------------------------
// Decomposed certification: reduce to degree <= 2, then certify SCC by SCC
// bottom-up, grounding each solved SCC at its exact final iterate. For a
// single SCC the certificate is a genuine enclosure of the least fixed point;
// across SCCs the substitution error is not tracked and the composition is
// reported as uncertified.

template <class S>
struct SccCertificate {
  std::vector<int> members;                // indices into the reduced system
  std::vector<std::string> variable_names; // original (non-auxiliary) members only
  std::vector<size_t> local_positions;     // positions of those members inside the SCC
  Certificate<S> certificate;              // over the SCC's own components
  long iterations = 0;
  bool reached_target = true;
};

template <class S>
struct CertifyOutcome {
  QuadraticReduction reduction;
  std::vector<SccCertificate<S>> sccs;  // bottom-up processing order
  std::vector<S> lower;                 // original variables
  std::vector<S> upper;
  long certified_bits = 0;              // min over SCCs
  bool globally_certified = false;      // true iff the reduction is one SCC
  bool target_reached = true;
};

template <class S>
CertifyOutcome<S> decomposed_certify(const SppSystem& input, long target_bits, long max_iters,
                                     const scalar_config_t<S>& cfg = {}) {
  if (target_bits < 1) raise(errc::invalid_argument, "target bits must be >= 1");
  if (max_iters < 1) raise(errc::invalid_argument, "max_iters must be >= 1");
  CertifyOutcome<S> out;
  out.reduction = reduce_to_quadratic(input);
  const SppSystem& reduced = out.reduction.reduced;
  auto decomp = scc_decompose(reduced);
  out.globally_certified = decomp.sccs.size() == 1;

  std::map<int, Rational> solved;
  auto lower_full = zero_vector<S>(reduced.size(), cfg);
  auto upper_full = zero_vector<S>(reduced.size(), cfg);
  out.certified_bits = scalar_traits<S>::certified_bits_cap(cfg);

  for (int scc_id : decomp.processing_order) {
    const auto& members = decomp.sccs[static_cast<size_t>(scc_id)];
    SppSystem sub;
    {
      std::map<int, int> remap;
      for (int v : members) {
        remap[v] = static_cast<int>(sub.variables.size());
        sub.variables.push_back(reduced.variables[static_cast<size_t>(v)]);
      }
      for (int v : members)
        sub.equations.push_back(
            reduced.equations[static_cast<size_t>(v)].substitute(solved).remap(remap));
    }

    SccCertificate<S> entry;
    entry.members = members;
    auto x = zero_vector<S>(sub.size(), cfg);
    std::optional<Certificate<S>> best;
    S zero = scalar_traits<S>::zero(cfg);
    for (long k = 1; k <= max_iters; ++k) {
      auto prev = x;
      x = newton_step(sub, x, cfg);
      detail::clamp_tiny_negatives(x, cfg);
      entry.iterations = k;
      bool positive = true;
      for (const auto& v : x) positive = positive && v > zero;
      if (!positive) continue;
      best = upper_bound_scspp(sub, prev, x, cfg);
      if (best->certified_bits >= target_bits) break;
    }
    if (!best) raise(errc::zero_component, "iterate never became strictly positive");
    entry.certificate = *best;
    entry.reached_target = best->certified_bits >= target_bits;
    out.target_reached = out.target_reached && entry.reached_target;
    out.certified_bits = std::min(out.certified_bits, best->certified_bits);

    for (size_t local = 0; local < members.size(); ++local) {
      int v = members[local];
      solved[v] = scalar_traits<S>::to_rational(x[local]);
      lower_full[static_cast<size_t>(v)] = best->lower[local];
      upper_full[static_cast<size_t>(v)] = best->upper[local];
      if (static_cast<size_t>(v) < out.reduction.original_size) {
        entry.variable_names.push_back(reduced.variables[static_cast<size_t>(v)]);
        entry.local_positions.push_back(local);
      }
    }
    out.sccs.push_back(std::move(entry));
  }

  out.lower.assign(lower_full.begin(),
                   lower_full.begin() + static_cast<long>(out.reduction.original_size));
  out.upper.assign(upper_full.begin(),
                   upper_full.begin() + static_cast<long>(out.reduction.original_size));
  return out;
}

}  // namespace sppfix
