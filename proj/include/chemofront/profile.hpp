#pragma once

#include <functional>
#include <string>
#include <vector>

namespace chemofront {

/// Initial density as a function of the normalised coordinate s: s in [0, 1]
/// from the symmetry axis to the front for single-front runs, s in [-1, 1]
/// across the domain for double-front runs, s in [0, 1] across fixed domains.
class InitialProfile {
 public:
  enum class Kind { Cosine, Constant, Tabulated, Custom };

  InitialProfile() : fn_([](double) { return 0.0; }), description_("constant(0)") {}

  /// amplitude * cos(pi s / 2)
  static InitialProfile cosine(double amplitude);
  static InitialProfile constant(double value);
  /// Piecewise linear through (s_i, value_i); s must be increasing.
  static InitialProfile tabulated(std::vector<double> s, std::vector<double> values);
  static InitialProfile custom(std::function<double(double)> fn, std::string description = "custom");

  double operator()(double s) const { return fn_(s); }
  Kind kind() const { return kind_; }
  const std::string& description() const { return description_; }

 private:
  Kind kind_ = Kind::Constant;
  std::function<double(double)> fn_;
  std::string description_;
};

}  // namespace chemofront
