#pragma once

#include <cstddef>
#include <vector>

namespace fconc::detail {

/// alpha I + beta L with L = tridiag(-1, 2, -1) / h^2, the negative 1D
/// Dirichlet Laplacian on n unknowns. Factored once, solved many times
/// (Thomas algorithm). Templated so the same code runs in 50 digits.
template <class T>
class ShiftedLaplacian1D {
 public:
  ShiftedLaplacian1D(std::size_t n, T h, T alpha, T beta) : n_(n), h2_(h * h), diag_(alpha + 2 * beta / h2_), off_(-beta / h2_) {
    c_.resize(n_);
    inv_.resize(n_);
    T denom = diag_;
    inv_[0] = 1 / denom;
    c_[0] = off_ * inv_[0];
    for (std::size_t i = 1; i < n_; ++i) {
      denom = diag_ - off_ * c_[i - 1];
      inv_[i] = 1 / denom;
      c_[i] = off_ * inv_[i];
    }
  }

  /// x <- (alpha I + beta L)^{-1} x
  void solve(std::vector<T>& x) const {
    x[0] = x[0] * inv_[0];
    for (std::size_t i = 1; i < n_; ++i) x[i] = (x[i] - off_ * x[i - 1]) * inv_[i];
    for (std::size_t i = n_ - 1; i-- > 0;) x[i] -= c_[i] * x[i + 1];
  }

  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  T h2_;
  T diag_;
  T off_;
  std::vector<T> c_;
  std::vector<T> inv_;
};

/// out = L u for the negative Dirichlet Laplacian above.
template <class T>
void apply_laplacian_1d(const std::vector<T>& u, T h, std::vector<T>& out) {
  const std::size_t n = u.size();
  out.resize(n);
  const T inv_h2 = 1 / (h * h);
  for (std::size_t i = 0; i < n; ++i) {
    T s = 2 * u[i];
    if (i > 0) s -= u[i - 1];
    if (i + 1 < n) s -= u[i + 1];
    out[i] = s * inv_h2;
  }
}

}  // namespace fconc::detail
