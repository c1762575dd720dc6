#ifndef CASCADE_TRIDIAGONAL_HPP
#define CASCADE_TRIDIAGONAL_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "cascade/error.hpp"

namespace cascade {

/// Thomas-algorithm factorization of a tridiagonal matrix
///   lower[j] x[j-1] + diag[j] x[j] + upper[j] x[j+1] = rhs[j].
/// lower[0] and upper[n-1] are ignored. Factor once, solve many times.
class TridiagonalSolver {
 public:
  TridiagonalSolver() = default;

  void factor(std::span<const double> lower, std::span<const double> diag, std::span<const double> upper) {
    const std::size_t n = diag.size();
    require(n >= 1 && lower.size() == n && upper.size() == n, ErrorKind::invalid_input,
            "tridiagonal bands must have equal length");
    lower_.assign(lower.begin(), lower.end());
    cprime_.resize(n);
    inv_denom_.resize(n);
    double denom = diag[0];
    require(denom != 0.0, ErrorKind::numerical_blowup, "singular tridiagonal matrix");
    inv_denom_[0] = 1.0 / denom;
    cprime_[0] = upper[0] * inv_denom_[0];
    for (std::size_t j = 1; j < n; ++j) {
      denom = diag[j] - lower[j] * cprime_[j - 1];
      require(denom != 0.0, ErrorKind::numerical_blowup, "singular tridiagonal matrix");
      inv_denom_[j] = 1.0 / denom;
      cprime_[j] = (j + 1 < n ? upper[j] : 0.0) * inv_denom_[j];
    }
  }

  /// Solves in place: on entry `x` holds the right-hand side.
  /// Magnitudes below 1e-200 are flushed to zero during the sweeps: decaying tails otherwise
  /// settle on the smallest subnormal and every later operation takes the slow path.
  void solve(std::span<double> x) const {
    const std::size_t n = cprime_.size();
    x[0] *= inv_denom_[0];
    for (std::size_t j = 1; j < n; ++j) {
      const double v = (x[j] - lower_[j] * x[j - 1]) * inv_denom_[j];
      x[j] = std::abs(v) < kFlush ? 0.0 : v;
    }
    for (std::size_t j = n - 1; j-- > 0;) {
      const double v = x[j] - cprime_[j] * x[j + 1];
      x[j] = std::abs(v) < kFlush ? 0.0 : v;
    }
  }

  std::size_t size() const { return cprime_.size(); }

 private:
  static constexpr double kFlush = 1e-200;
  std::vector<double> lower_;
  std::vector<double> cprime_;
  std::vector<double> inv_denom_;
};

}  // namespace cascade

#endif  // CASCADE_TRIDIAGONAL_HPP
