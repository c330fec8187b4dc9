#pragma once

#include <vector>

#include "sppfix/scalar.hpp"

namespace sppfix {

// Dense row-major matrix over a scalar field. Desk-scale systems only, no
// sparsity games.
template <class S>
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(size_t rows, size_t cols, const scalar_config_t<S>& cfg)
      : rows_(rows), cols_(cols), a_(zero_vector<S>(rows * cols, cfg)) {}

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  S& operator()(size_t i, size_t j) { return a_[i * cols_ + j]; }
  const S& operator()(size_t i, size_t j) const { return a_[i * cols_ + j]; }

  std::vector<S> multiply(const std::vector<S>& x) const {
    auto cfg = scalar_traits<S>::config_of(x);
    auto out = zero_vector<S>(rows_, cfg);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * x[j];
    return out;
  }

 private:
  size_t rows_, cols_;
  std::vector<S> a_;
};

}  // namespace sppfix
