#pragma once

#include <vector>

#include "sppfix/mat.hpp"

namespace sppfix {

// Float-mode diagnostics of one linear solve.
struct SolveNote {
  double min_pivot = 0.0;
  double max_pivot = 0.0;
};

inline double scalar_to_double(const Rational& q) { return q.get_d(); }
inline double scalar_to_double(const BigFloat& x) { return x.to_double(); }

// Gaussian elimination with partial pivoting. A pivot of magnitude below
// pivot_eps (or exactly zero) is treated as a singular matrix; exact mode
// passes pivot_eps = 0.
template <class S>
std::vector<S> solve_linear(Mat<S> A, std::vector<S> b, const S& pivot_eps,
                            SolveNote* note = nullptr) {
  size_t n = A.rows();
  if (A.cols() != n || b.size() != n) raise(errc::dimension_mismatch, "solve_linear shape");
  auto cfg = scalar_traits<S>::config_of(b);
  bool first_pivot = true;
  for (size_t col = 0; col < n; ++col) {
    size_t pivot_row = col;
    S best = abs(A(col, col));
    for (size_t r = col + 1; r < n; ++r) {
      S cand = abs(A(r, col));
      if (cand > best) {
        best = cand;
        pivot_row = r;
      }
    }
    if (best == scalar_traits<S>::zero(cfg) || best < pivot_eps)
      raise(errc::singular_system, "pivot below threshold in column " + std::to_string(col));
    if (note) {
      double p = scalar_to_double(best);
      if (first_pivot) {
        note->min_pivot = note->max_pivot = p;
        first_pivot = false;
      } else {
        note->min_pivot = std::min(note->min_pivot, p);
        note->max_pivot = std::max(note->max_pivot, p);
      }
    }
    if (pivot_row != col) {
      for (size_t j = col; j < n; ++j) std::swap(A(col, j), A(pivot_row, j));
      std::swap(b[col], b[pivot_row]);
    }
    for (size_t r = col + 1; r < n; ++r) {
      if (A(r, col) == scalar_traits<S>::zero(cfg)) continue;
      S factor = A(r, col) / A(col, col);
      A(r, col) = scalar_traits<S>::zero(cfg);
      for (size_t j = col + 1; j < n; ++j) A(r, j) -= factor * A(col, j);
      b[r] -= factor * b[col];
    }
  }
  auto x = zero_vector<S>(n, cfg);
  for (size_t ri = n; ri-- > 0;) {
    S acc = b[ri];
    for (size_t j = ri + 1; j < n; ++j) acc -= A(ri, j) * x[j];
    x[ri] = acc / A(ri, ri);
  }
  return x;
}

}  // namespace sppfix
