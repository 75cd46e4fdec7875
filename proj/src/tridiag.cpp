#include "chemofront/tridiag.hpp"

#include <cmath>
#include <limits>

#include "chemofront/errors.hpp"

namespace chemofront::linalg {

void Tridiagonal::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag[i] * x[i];
    if (i > 0) s += lower[i] * x[i - 1];
    if (i + 1 < n) s += upper[i] * x[i + 1];
    y[i] = s;
  }
}

void solve_in_place(const Tridiagonal& a, std::span<double> rhs) {
  const std::size_t n = a.size();
  if (n == 0) return;
  std::vector<double> c(n);
  double pivot = a.diag[0];
  if (pivot == 0.0) throw NumericalError("tridiagonal solve: zero pivot");
  c[0] = n > 1 ? a.upper[0] / pivot : 0.0;
  rhs[0] /= pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = a.diag[i] - a.lower[i] * c[i - 1];
    if (pivot == 0.0) throw NumericalError("tridiagonal solve: zero pivot");
    c[i] = i + 1 < n ? a.upper[i] / pivot : 0.0;
    rhs[i] = (rhs[i] - a.lower[i] * rhs[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
}

int count_eigenvalues_below(std::span<const double> diag, std::span<const double> off, double x) {
  const std::size_t n = diag.size();
  int count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e2 = i > 0 ? off[i - 1] * off[i - 1] : 0.0;
    q = (diag[i] - x) - (i > 0 ? e2 / q : 0.0);
    if (q == 0.0) q = -std::numeric_limits<double>::epsilon() * (std::abs(diag[i]) + std::abs(x) + 1.0);
    if (q < 0.0) ++count;
  }
  return count;
}

}  // namespace chemofront::linalg
