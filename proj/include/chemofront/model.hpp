#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace chemofront {

/// Chemotaxis and Stefan constants of the free-boundary model.
struct ModelParams {
  double chi1 = 0.0;     // attraction sensitivity
  double chi2 = 0.0;     // repulsion sensitivity
  double lambda1 = 1.0;  // attractant decay
  double lambda2 = 1.0;  // repellent decay
  double mu1 = 0.0;      // attractant production
  double mu2 = 0.0;      // repellent production
  double nu = 1.0;       // Stefan front coefficient

  /// Throws ConfigError when a sign constraint is violated.
  void validate() const;
};

/// A scalar field f(t, x). Optionally periodic in t; flags record which
/// variables it actually depends on so that the spectral code can pick the
/// cheapest exact route.
class Sampler {
 public:
  using Fn = std::function<double(double, double)>;

  Sampler();  // the constant 0

  static Sampler constant(double value);
  /// offset + amplitude * sin(2 pi t / period)
  static Sampler sin_periodic(double offset, double amplitude, double period);
  /// offset + amplitude * cos(2 pi x / wavelength) [+ time_amplitude * sin(2 pi t / period)]
  static Sampler cos_space(double offset, double amplitude, double wavelength,
                           double time_amplitude = 0.0, double period = 1.0);
  /// Bilinear interpolation on a (t, x) table; t wraps modulo `period`
  /// measured from ts.front(), x is clamped to [xs.front(), xs.back()].
  static Sampler tabulated(std::vector<double> ts, std::vector<double> xs,
                           std::vector<double> values, double period);
  static Sampler custom(Fn fn, bool depends_on_time, bool depends_on_space,
                        double period, std::string description = "custom");

  double operator()(double t, double x) const { return fn_(t, x); }

  bool depends_on_time() const { return depends_t_; }
  bool depends_on_space() const { return depends_x_; }
  /// Declared period in t. Meaningless (but positive) when !depends_on_time().
  double period() const { return period_; }
  std::optional<double> constant_value() const { return constant_; }
  const std::string& description() const { return description_; }

 private:
  Fn fn_;
  bool depends_t_ = false;
  bool depends_x_ = false;
  double period_ = 1.0;
  std::optional<double> constant_;
  std::string description_;
};

enum class CoefficientKind { Constant, TimeOnly, SpaceTime };

const char* to_string(CoefficientKind kind);

struct CoefficientBounds {
  double a_inf = 0.0;
  double a_sup = 0.0;
  double b_inf = 0.0;
  double b_sup = 0.0;
};

/// How declared bounds are spot-checked against the samplers.
struct BoundCheckOptions {
  int samples = 10000;
  double x_extent = 100.0;  // sampled x range is [0, x_extent]
  double x_origin = 0.0;
};

/// The logistic coefficients a(t,x), b(t,x) together with certified bounds.
class CoefficientField {
 public:
  /// a == b == 1.
  CoefficientField();

  /// a == a0, b == b0; bounds are exact.
  static CoefficientField constant(double a0, double b0);

  /// Builds a field from samplers and user-declared bounds. The bounds are
  /// verified on a dense sample grid over one period times the x window;
  /// samples outside the declared bounds, or declared bounds that are not
  /// attained to within sampling resolution, raise ConfigError.
  static CoefficientField make(Sampler a, Sampler b, const CoefficientBounds& declared,
                               const BoundCheckOptions& check = {});

  double a(double t, double x) const { return a_(t, x); }
  double b(double t, double x) const { return b_(t, x); }
  const Sampler& a_sampler() const { return a_; }
  const Sampler& b_sampler() const { return b_; }
  const CoefficientBounds& bounds() const { return bounds_; }
  CoefficientKind kind() const { return kind_; }
  /// Common period of a and b (1 for constant fields).
  double period() const { return period_; }
  bool depends_on_time() const { return a_.depends_on_time() || b_.depends_on_time(); }
  bool depends_on_space() const { return a_.depends_on_space() || b_.depends_on_space(); }

  /// Same b and bounds, a replaced by scale * a.
  CoefficientField with_scaled_a(double scale) const;

 private:
  struct Blank {};
  explicit CoefficientField(Blank) {}
  Sampler a_;
  Sampler b_;
  CoefficientBounds bounds_;
  CoefficientKind kind_ = CoefficientKind::Constant;
  double period_ = 1.0;
};

/// Derived constants and the (H1)-(H3) verdicts. Margins are b_inf minus the
/// right-hand side of the respective strict inequality.
struct HypothesisReport {
  double M = 0.0;
  double K = 0.0;
  double M0 = 0.0;
  double m0 = 0.0;
  bool M0_valid = false;  // false when (H1) fails and M0/m0 are undefined
  bool m0_positive = false;
  bool h1_holds = false;
  bool h2_holds = false;
  bool h3_holds = false;
  double h1_margin = 0.0;
  double h2_margin = 0.0;
  double h3_margin = 0.0;
};

double compute_M(const ModelParams& p);
double compute_K(const ModelParams& p);
/// a_sup / (b_inf + chi2 mu2 - chi1 mu1 - M); throws HypothesisViolation without (H1).
double compute_M0(const ModelParams& p, const CoefficientField& c);
/// Lower persistence level; positive iff (H2). Throws HypothesisViolation without (H1).
double compute_m0(const ModelParams& p, const CoefficientField& c);
HypothesisReport check_hypotheses(const ModelParams& p, const CoefficientField& c);

/// Constant C such that |d/dx (chi2 v2 - chi1 v1)| <= C * max(u) for u >= 0.
double gradient_bound_constant(const ModelParams& p);

}  // namespace chemofront
