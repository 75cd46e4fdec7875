#include "chemofront/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "chemofront/errors.hpp"

namespace chemofront {
namespace {

double positive_part(double x) { return std::max(x, 0.0); }

bool finite_all(std::initializer_list<double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

void ModelParams::validate() const {
  if (!finite_all({chi1, chi2, lambda1, lambda2, mu1, mu2, nu})) {
    throw ConfigError("model parameters must be finite");
  }
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) {
    throw ConfigError("lambda1 and lambda2 must be strictly positive");
  }
  if (chi1 < 0.0 || chi2 < 0.0 || mu1 < 0.0 || mu2 < 0.0) {
    throw ConfigError("chi1, chi2, mu1, mu2 must be nonnegative");
  }
  if (!(nu > 0.0)) throw ConfigError("nu must be strictly positive");
}

// ---------------------------------------------------------------- Sampler

Sampler::Sampler()
    : fn_([](double, double) { return 0.0; }), constant_(0.0), description_("constant(0)") {}

Sampler Sampler::constant(double value) {
  Sampler s;
  s.fn_ = [value](double, double) { return value; };
  s.constant_ = value;
  std::ostringstream os;
  os << "constant(" << value << ")";
  s.description_ = os.str();
  return s;
}

Sampler Sampler::sin_periodic(double offset, double amplitude, double period) {
  if (!(period > 0.0)) throw ConfigError("sin_periodic: period must be positive");
  if (amplitude == 0.0) return constant(offset);
  Sampler s;
  s.constant_.reset();
  const double omega = 2.0 * std::numbers::pi / period;
  s.fn_ = [=](double t, double) { return offset + amplitude * std::sin(omega * t); };
  s.depends_t_ = true;
  s.period_ = period;
  std::ostringstream os;
  os << "sin_periodic(offset=" << offset << ", amplitude=" << amplitude << ", period=" << period
     << ")";
  s.description_ = os.str();
  return s;
}

Sampler Sampler::cos_space(double offset, double amplitude, double wavelength,
                           double time_amplitude, double period) {
  if (!(wavelength > 0.0)) throw ConfigError("cos_space: wavelength must be positive");
  if (!(period > 0.0)) throw ConfigError("cos_space: period must be positive");
  const double k = 2.0 * std::numbers::pi / wavelength;
  const double omega = 2.0 * std::numbers::pi / period;
  Sampler s;
  s.constant_.reset();
  s.fn_ = [=](double t, double x) {
    return offset + amplitude * std::cos(k * x) + time_amplitude * std::sin(omega * t);
  };
  s.depends_x_ = amplitude != 0.0;
  s.depends_t_ = time_amplitude != 0.0;
  s.period_ = period;
  if (!s.depends_x_ && !s.depends_t_) return constant(offset);
  std::ostringstream os;
  os << "cos_space(offset=" << offset << ", amplitude=" << amplitude
     << ", wavelength=" << wavelength << ", time_amplitude=" << time_amplitude
     << ", period=" << period << ")";
  s.description_ = os.str();
  return s;
}

Sampler Sampler::tabulated(std::vector<double> ts, std::vector<double> xs,
                           std::vector<double> values, double period) {
  if (ts.empty() || xs.empty()) throw ConfigError("tabulated: empty axis");
  if (values.size() != ts.size() * xs.size()) {
    throw ConfigError("tabulated: expected |t| * |x| values in row-major (t, x) order");
  }
  if (!std::is_sorted(ts.begin(), ts.end()) || !std::is_sorted(xs.begin(), xs.end()) ||
      std::adjacent_find(ts.begin(), ts.end()) != ts.end() ||
      std::adjacent_find(xs.begin(), xs.end()) != xs.end()) {
    throw ConfigError("tabulated: axes must be strictly increasing");
  }
  if (!(period > 0.0)) throw ConfigError("tabulated: period must be positive");
  if (ts.size() > 1 && ts.back() - ts.front() > period) {
    throw ConfigError("tabulated: t axis longer than the declared period");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw ConfigError("tabulated: non-finite value");
  }

  struct Table {
    std::vector<double> ts, xs, values;
    double period;
  };
  auto table = std::make_shared<const Table>(Table{std::move(ts), std::move(xs), std::move(values), period});

  // Index and weight of the lower neighbour along a clamped axis.
  auto locate = [](const std::vector<double>& axis, double q) -> std::pair<std::size_t, double> {
    if (axis.size() == 1 || q <= axis.front()) return {0, 0.0};
    if (q >= axis.back()) return {axis.size() - 2, 1.0};
    auto it = std::upper_bound(axis.begin(), axis.end(), q);
    std::size_t i = static_cast<std::size_t>(it - axis.begin()) - 1;
    return {i, (q - axis[i]) / (axis[i + 1] - axis[i])};
  };

  Sampler s;
  s.constant_.reset();
  s.fn_ = [table, locate](double t, double x) {
    const Table& tb = *table;
    const std::size_t nx = tb.xs.size();
    // Periodic in t: the segment [ts.back(), ts.front() + period] wraps to ts.front().
    double tw = std::fmod(t - tb.ts.front(), tb.period);
    if (tw < 0) tw += tb.period;
    tw += tb.ts.front();
    std::size_t it0 = 0, it1 = 0;
    double wt = 0.0;
    if (tb.ts.size() > 1) {
      if (tw >= tb.ts.back()) {
        it0 = tb.ts.size() - 1;
        it1 = 0;
        const double span = tb.ts.front() + tb.period - tb.ts.back();
        wt = span > 0 ? (tw - tb.ts.back()) / span : 0.0;
      } else {
        auto [i, w] = locate(tb.ts, tw);
        it0 = i;
        it1 = i + 1;
        wt = w;
      }
    }
    auto [ix, wx] = locate(tb.xs, x);
    const std::size_t ix1 = nx > 1 ? ix + 1 : ix;
    auto at = [&](std::size_t i, std::size_t j) { return tb.values[i * nx + j]; };
    const double lo = (1 - wx) * at(it0, ix) + wx * at(it0, ix1);
    const double hi = (1 - wx) * at(it1, ix) + wx * at(it1, ix1);
    return (1 - wt) * lo + wt * hi;
  };
  s.depends_t_ = table->ts.size() > 1;
  s.depends_x_ = table->xs.size() > 1;
  s.period_ = period;
  s.description_ = "tabulated";
  return s;
}

Sampler Sampler::custom(Fn fn, bool depends_on_time, bool depends_on_space, double period,
                        std::string description) {
  if (!(period > 0.0)) throw ConfigError("custom sampler: period must be positive");
  Sampler s;
  s.constant_.reset();
  s.fn_ = std::move(fn);
  s.depends_t_ = depends_on_time;
  s.depends_x_ = depends_on_space;
  s.period_ = period;
  s.description_ = std::move(description);
  return s;
}

// ------------------------------------------------------- CoefficientField

const char* to_string(CoefficientKind kind) {
  switch (kind) {
    case CoefficientKind::Constant:
      return "Constant";
    case CoefficientKind::TimeOnly:
      return "TimeOnly";
    case CoefficientKind::SpaceTime:
      return "SpaceTime";
  }
  return "?";
}

CoefficientField::CoefficientField() : CoefficientField(constant(1.0, 1.0)) {}

CoefficientField CoefficientField::constant(double a0, double b0) {
  if (!(a0 > 0.0) || !(b0 > 0.0)) {
    throw HypothesisViolation("(H0) requires a_inf > 0 and b_inf > 0");
  }
  CoefficientField c{Blank{}};
  c.a_ = Sampler::constant(a0);
  c.b_ = Sampler::constant(b0);
  c.bounds_ = {a0, a0, b0, b0};
  c.kind_ = CoefficientKind::Constant;
  c.period_ = 1.0;
  return c;
}

CoefficientField CoefficientField::make(Sampler a, Sampler b, const CoefficientBounds& declared,
                                        const BoundCheckOptions& check) {
  const CoefficientBounds& d = declared;
  if (!finite_all({d.a_inf, d.a_sup, d.b_inf, d.b_sup})) {
    throw ConfigError("coefficient bounds must be finite");
  }
  if (!(d.a_inf > 0.0) || !(d.b_inf > 0.0)) {
    throw HypothesisViolation("(H0) requires a_inf > 0 and b_inf > 0");
  }
  if (d.a_inf > d.a_sup || d.b_inf > d.b_sup) {
    throw ConfigError("coefficient bounds must satisfy inf <= sup");
  }

  CoefficientField c{Blank{}};
  const bool t_dep = a.depends_on_time() || b.depends_on_time();
  const bool x_dep = a.depends_on_space() || b.depends_on_space();
  if (a.depends_on_time() && b.depends_on_time()) {
    const double ratio = a.period() / b.period();
    if (std::abs(ratio - std::round(ratio)) > 1e-12 && std::abs(1 / ratio - std::round(1 / ratio)) > 1e-12) {
      throw ConfigError("a and b must share a common period (one must divide the other)");
    }
  }
  c.period_ = !t_dep                ? 1.0
              : !b.depends_on_time() ? a.period()
              : !a.depends_on_time() ? b.period()
                                     : std::max(a.period(), b.period());
  c.kind_ = x_dep ? CoefficientKind::SpaceTime
                  : (t_dep ? CoefficientKind::TimeOnly : CoefficientKind::Constant);

  // Dense spot check over one period x the spatial window.
  const int total = std::max(check.samples, 1);
  const int nt = t_dep ? (x_dep ? std::max(1, static_cast<int>(std::sqrt(total))) : total) : 1;
  const int nx = x_dep ? std::max(1, total / nt) : 1;
  double amin = std::numeric_limits<double>::infinity(), amax = -amin;
  double bmin = amin, bmax = -amin;
  for (int i = 0; i < nt; ++i) {
    const double t = c.period_ * i / nt;
    for (int j = 0; j < nx; ++j) {
      const double x = check.x_origin + (nx > 1 ? check.x_extent * j / (nx - 1) : 0.0);
      const double av = a(t, x), bv = b(t, x);
      if (!std::isfinite(av) || !std::isfinite(bv)) {
        throw ConfigError("coefficient sampler returned a non-finite value");
      }
      amin = std::min(amin, av);
      amax = std::max(amax, av);
      bmin = std::min(bmin, bv);
      bmax = std::max(bmax, bv);
    }
  }
  auto verify = [](const char* name, double lo, double hi, double dlo, double dhi) {
    const double eps = 1e-9 * std::max(1.0, std::max(std::abs(dlo), std::abs(dhi)));
    if (lo < dlo - eps || hi > dhi + eps) {
      std::ostringstream os;
      os << name << " sampled range [" << lo << ", " << hi << "] escapes declared bounds [" << dlo
         << ", " << dhi << "]";
      throw ConfigError(os.str());
    }
    // Declared bounds must be attained up to sampling resolution.
    const double slack = 0.05 * (hi - lo) + 1e-6 * std::max(1.0, std::abs(dhi));
    if (dlo < lo - slack || dhi > hi + slack) {
      std::ostringstream os;
      os << name << " declared bounds [" << dlo << ", " << dhi
         << "] are not attained by the sampled range [" << lo << ", " << hi << "]";
      throw ConfigError(os.str());
    }
  };
  verify("a", amin, amax, d.a_inf, d.a_sup);
  verify("b", bmin, bmax, d.b_inf, d.b_sup);

  c.a_ = std::move(a);
  c.b_ = std::move(b);
  c.bounds_ = declared;
  return c;
}

CoefficientField CoefficientField::with_scaled_a(double scale) const {
  if (!(scale > 0.0)) throw ConfigError("with_scaled_a: scale must be positive");
  CoefficientField c = *this;
  Sampler base = a_;
  if (auto v = base.constant_value()) {
    c.a_ = Sampler::constant(*v * scale);
  } else {
    c.a_ = Sampler::custom([base, scale](double t, double x) { return scale * base(t, x); },
                           base.depends_on_time(), base.depends_on_space(), base.period(),
                           base.description() + " (scaled)");
  }
  c.bounds_.a_inf *= scale;
  c.bounds_.a_sup *= scale;
  return c;
}

// ----------------------------------------------------- derived constants

double compute_M(const ModelParams& p) {
  const double s1 = p.chi1 * p.mu1;
  const double s2 = p.chi2 * p.mu2;
  const double cross = positive_part(s2 * p.lambda2 - s1 * p.lambda1);
  const double first = (cross + s1 * positive_part(p.lambda1 - p.lambda2)) / p.lambda2;
  const double second = (cross + s2 * positive_part(p.lambda1 - p.lambda2)) / p.lambda1;
  return std::min(first, second);
}

double compute_K(const ModelParams& p) {
  const double s1 = p.chi1 * p.mu1;
  const double s2 = p.chi2 * p.mu2;
  const double cross = std::abs(s1 * p.lambda1 - s2 * p.lambda2);
  const double first = (cross + s1 * std::abs(p.lambda1 - p.lambda2)) / p.lambda2;
  const double second = (cross + s2 * std::abs(p.lambda1 - p.lambda2)) / p.lambda1;
  return std::min(first, second);
}

namespace {

double h1_denominator(const ModelParams& p, const CoefficientBounds& b, double M) {
  return b.b_inf + p.chi2 * p.mu2 - p.chi1 * p.mu1 - M;
}

}  // namespace

double compute_M0(const ModelParams& p, const CoefficientField& c) {
  const double denom = h1_denominator(p, c.bounds(), compute_M(p));
  if (!(denom > 0.0)) {
    throw HypothesisViolation("M0 requires (H1): b_inf > chi1 mu1 - chi2 mu2 + M");
  }
  return c.bounds().a_sup / denom;
}

double compute_m0(const ModelParams& p, const CoefficientField& c) {
  const CoefficientBounds& b = c.bounds();
  const double M = compute_M(p);
  const double denom1 = h1_denominator(p, b, M);
  if (!(denom1 > 0.0)) {
    throw HypothesisViolation("m0 requires (H1): b_inf > chi1 mu1 - chi2 mu2 + M");
  }
  const double s1 = p.chi1 * p.mu1;
  const double s2 = p.chi2 * p.mu2;
  const double numer = b.a_inf * (b.b_inf - (1.0 + b.a_sup / b.a_inf) * s1 + s2 - M);
  const double denom2 = b.b_sup - s1 + s2;
  return numer / (denom1 * denom2);
}

HypothesisReport check_hypotheses(const ModelParams& p, const CoefficientField& c) {
  const CoefficientBounds& b = c.bounds();
  HypothesisReport r;
  r.M = compute_M(p);
  r.K = compute_K(p);
  const double s1 = p.chi1 * p.mu1;
  const double s2 = p.chi2 * p.mu2;
  r.h1_margin = b.b_inf - (s1 - s2 + r.M);
  r.h2_margin = b.b_inf - ((1.0 + b.a_sup / b.a_inf) * s1 - s2 + r.M);
  r.h3_margin = b.b_inf - (s1 - s2 + r.K);
  r.h1_holds = r.h1_margin > 0.0;
  r.h2_holds = r.h2_margin > 0.0;
  r.h3_holds = r.h3_margin > 0.0;
  if (r.h1_holds) {
    r.M0 = compute_M0(p, c);
    r.m0 = compute_m0(p, c);
    r.M0_valid = true;
    r.m0_positive = r.m0 > 0.0;
  } else {
    r.M0 = std::numeric_limits<double>::quiet_NaN();
    r.m0 = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

double gradient_bound_constant(const ModelParams& p) {
  const double s1 = p.chi1 * p.mu1;
  const double s2 = p.chi2 * p.mu2;
  const double r1 = std::sqrt(p.lambda1), r2 = std::sqrt(p.lambda2);
  const double mixed = 2.0 * r1 * r2;
  const double first = std::abs(s2 - s1) / (2.0 * r2) + s1 * std::abs(r1 - r2) / mixed;
  const double second = std::abs(s1 - s2) / (2.0 * r1) + s2 * std::abs(r2 - r1) / mixed;
  return std::min(first, second);
}

}  // namespace chemofront
