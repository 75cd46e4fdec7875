#pragma once

#include <span>
#include <vector>

namespace chemofront::linalg {

/// Row i of a tridiagonal matrix reads lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1];
/// lower[0] and upper[n-1] are ignored.
struct Tridiagonal {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;

  explicit Tridiagonal(std::size_t n = 0) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}
  std::size_t size() const { return diag.size(); }

  /// y = A x
  void apply(std::span<const double> x, std::span<double> y) const;
};

/// Solves A x = rhs in place by the Thomas algorithm (no pivoting; intended
/// for diagonally dominant or symmetric positive definite systems).
/// Throws NumericalError on a zero pivot.
void solve_in_place(const Tridiagonal& a, std::span<double> rhs);

/// Number of eigenvalues strictly below `x` of the symmetric tridiagonal
/// matrix with diagonal `diag` and off-diagonal `off` (|off| = n-1), by the
/// Sturm sequence of LDL^T pivots.
int count_eigenvalues_below(std::span<const double> diag, std::span<const double> off, double x);

}  // namespace chemofront::linalg
