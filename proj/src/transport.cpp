#include "chemofront/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "chemofront/errors.hpp"
#include "chemofront/tridiag.hpp"

namespace chemofront {
namespace {

constexpr double kClamp = 1e-12;

double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

// Grid values with ghost extension: even reflection at Neumann ends, odd at Dirichlet ends.
class Extended {
 public:
  Extended(std::span<const double> u, const TransportGeometry& geo) : u_(u), geo_(geo) {}

  double operator()(long j) const {
    const long n = static_cast<long>(u_.size());
    if (j < 0) {
      const double mirror = u_[static_cast<std::size_t>(std::min(-j, n - 1))];
      return geo_.left_dirichlet ? -mirror : mirror;
    }
    if (j >= n) {
      const double mirror = u_[static_cast<std::size_t>(std::max(2 * (n - 1) - j, 0L))];
      return geo_.right_dirichlet ? -mirror : mirror;
    }
    return u_[static_cast<std::size_t>(j)];
  }

  // Reconstructed value at face j+1/2 from cell j (from_left) or cell j+1.
  double face(long j, bool from_left) const {
    const auto& w = *this;
    if (from_left) return w(j) + 0.5 * minmod(w(j) - w(j - 1), w(j + 1) - w(j));
    return w(j + 1) - 0.5 * minmod(w(j + 1) - w(j), w(j + 2) - w(j + 1));
  }

 private:
  std::span<const double> u_;
  const TransportGeometry& geo_;
};

struct Drifts {
  std::vector<double> mesh;  // nonconservative y-velocity coefficient c_j of c_j u_y
  std::vector<double> face;  // chemotactic y-velocity at face j+1/2 (size n-1)
};

Drifts drifts(std::size_t n, double t, const TransportGeometry& geo, const TransportTerms& terms) {
  const double dy = 1.0 / static_cast<double>(n - 1);
  const double L = geo.length;
  Drifts d;
  d.mesh.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double y = static_cast<double>(j) * dy;
    double c = ((1.0 - y) * geo.left_velocity + y * geo.right_velocity) / L;
    if (terms.beta) c += terms.beta(t, geo.left + y * L) / L;
    d.mesh[j] = c;
  }
  d.face.assign(n - 1, 0.0);
  if (terms.params != nullptr && terms.v1 != nullptr && terms.v2 != nullptr) {
    const ModelParams& p = *terms.params;
    if (p.chi1 != 0.0 || p.chi2 != 0.0) {
      const auto& v1 = *terms.v1;
      const auto& v2 = *terms.v2;
      const double scale = 1.0 / (dy * L * L);
      for (std::size_t j = 0; j + 1 < n; ++j) {
        const double q_right = p.chi1 * v1[j + 1] - p.chi2 * v2[j + 1];
        const double q_left = p.chi1 * v1[j] - p.chi2 * v2[j];
        d.face[j] = (q_right - q_left) * scale;
      }
    }
  }
  return d;
}

void validate_inputs(std::span<const double> u, const TransportGeometry& geo,
                     const TransportTerms& terms) {
  if (u.size() < 4) throw ConfigError("transport grid requires at least 4 nodes");
  if (!(geo.length > 0.0) || !std::isfinite(geo.length)) {
    throw StabilityError("transport: domain length must be positive and finite");
  }
  if (terms.coefficients == nullptr) throw ConfigError("transport: missing coefficients");
  if (terms.params != nullptr && (terms.v1 == nullptr || terms.v2 == nullptr ||
                                  terms.v1->size() != u.size() || terms.v2->size() != u.size())) {
    throw ConfigError("transport: potentials missing or mismatched with u");
  }
}

}  // namespace

double sup_norm(std::span<const double> u) {
  double m = 0.0;
  for (double v : u) m = std::max(m, std::abs(v));
  return m;
}

StepBudget stable_step(std::span<const double> u, double t, const TransportGeometry& geo,
                       const TransportTerms& terms) {
  validate_inputs(u, geo, terms);
  const std::size_t n = u.size();
  const double dy = 1.0 / static_cast<double>(n - 1);
  Drifts d = drifts(n, t, geo, terms);
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double face = 0.0;
    if (j > 0) face = std::max(face, std::abs(d.face[j - 1]));
    if (j + 1 < n) face = std::max(face, std::abs(d.face[j]));
    worst = std::max(worst, std::abs(d.mesh[j]) + face);
  }
  StepBudget b;
  b.advective = worst > 0.0 ? 0.5 * dy / worst : std::numeric_limits<double>::infinity();
  const CoefficientBounds& cb = terms.coefficients->bounds();
  b.reaction = 0.1 / (cb.a_sup + cb.b_sup * sup_norm(u));
  return b;
}

std::vector<double> imex_step(std::span<const double> u, double t, double dt,
                              const TransportGeometry& geo, const TransportTerms& terms) {
  validate_inputs(u, geo, terms);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw StabilityError("transport: dt must be positive");
  const std::size_t n = u.size();
  const long ln = static_cast<long>(n);
  const double dy = 1.0 / static_cast<double>(n - 1);
  const double L = geo.length;
  const CoefficientField& c = *terms.coefficients;
  Drifts d = drifts(n, t, geo, terms);
  Extended w(u, geo);

  std::vector<double> rhs(n);
  for (long j = 0; j < ln; ++j) {
    const std::size_t jj = static_cast<std::size_t>(j);
    const bool left_end = j == 0, right_end = j == ln - 1;
    if ((left_end && geo.left_dirichlet) || (right_end && geo.right_dirichlet)) {
      rhs[jj] = 0.0;
      continue;
    }
    double explicit_part = 0.0;

    // Moving-mesh and external drift c u_y; u_y vanishes at Neumann ends.
    const double cj = d.mesh[jj];
    if (cj != 0.0 && !left_end && !right_end) {
      const bool from_left = cj < 0.0;  // characteristic enters from the left when c < 0
      explicit_part += cj * (w.face(j, from_left) - w.face(j - 1, from_left)) / dy;
    }

    // Conservative chemotactic flux -(u q)_y with q the face velocity.
    auto flux = [&](long face) {  // flux through face+1/2
      if (face < 0 || face >= ln - 1) return 0.0;
      const double q = d.face[static_cast<std::size_t>(face)];
      if (q == 0.0) return 0.0;
      return q * w.face(face, q > 0.0);
    };
    const double out = flux(j), in = flux(j - 1);
    const double volume = (left_end || right_end) ? 0.5 * dy : dy;
    explicit_part -= (out - in) / volume;

    const double x = geo.left + static_cast<double>(j) * dy * L;
    const double uj = u[jj];
    explicit_part += uj * (c.a(t, x) - c.b(t, x) * uj);
    rhs[jj] = uj + dt * explicit_part;
  }

  // Backward Euler diffusion L^{-2} u_yy with ghost-node Neumann rows.
  const double k = dt / (L * L * dy * dy);
  linalg::Tridiagonal a(n);
  for (std::size_t j = 0; j < n; ++j) {
    a.lower[j] = -k;
    a.diag[j] = 1.0 + 2.0 * k;
    a.upper[j] = -k;
  }
  if (geo.left_dirichlet) {
    a.diag[0] = 1.0;
    a.upper[0] = 0.0;
  } else {
    a.upper[0] = -2.0 * k;
  }
  if (geo.right_dirichlet) {
    a.diag[n - 1] = 1.0;
    a.lower[n - 1] = 0.0;
  } else {
    a.lower[n - 1] = -2.0 * k;
  }
  linalg::solve_in_place(a, rhs);

  for (std::size_t j = 0; j < n; ++j) {
    double& v = rhs[j];
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "stability violation: non-finite value at node " << j << " (t = " << t << ")";
      throw StabilityError(os.str());
    }
    if (v < 0.0) {
      if (v < -kClamp) {
        std::ostringstream os;
        os << "stability violation: u = " << v << " at node " << j << " (t = " << t << ")";
        throw StabilityError(os.str());
      }
      v = 0.0;
    }
  }
  if (geo.left_dirichlet) rhs[0] = 0.0;
  if (geo.right_dirichlet) rhs[n - 1] = 0.0;
  return rhs;
}

}  // namespace chemofront
