#include "chemofront/profile.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include "chemofront/errors.hpp"

namespace chemofront {

InitialProfile InitialProfile::cosine(double amplitude) {
  if (!std::isfinite(amplitude) || amplitude < 0.0) {
    throw ConfigError("cosine profile requires a finite amplitude >= 0");
  }
  InitialProfile p;
  p.kind_ = Kind::Cosine;
  p.fn_ = [amplitude](double s) { return amplitude * std::cos(0.5 * std::numbers::pi * s); };
  std::ostringstream os;
  os << amplitude << "*cos(pi s/2)";
  p.description_ = os.str();
  return p;
}

InitialProfile InitialProfile::constant(double value) {
  if (!std::isfinite(value)) throw ConfigError("constant profile requires a finite value");
  InitialProfile p;
  p.kind_ = Kind::Constant;
  p.fn_ = [value](double) { return value; };
  std::ostringstream os;
  os << "constant(" << value << ")";
  p.description_ = os.str();
  return p;
}

InitialProfile InitialProfile::tabulated(std::vector<double> s, std::vector<double> values) {
  if (s.size() < 2 || s.size() != values.size()) {
    throw ConfigError("tabulated profile requires >= 2 matching (s, value) pairs");
  }
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i] > s[i - 1])) throw ConfigError("tabulated profile: s must be strictly increasing");
  }
  auto data = std::make_shared<const std::pair<std::vector<double>, std::vector<double>>>(
      std::move(s), std::move(values));
  InitialProfile p;
  p.kind_ = Kind::Tabulated;
  p.fn_ = [data](double q) {
    const auto& [xs, ys] = *data;
    if (q <= xs.front()) return ys.front();
    if (q >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), q);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
    const double w = (q - xs[i]) / (xs[i + 1] - xs[i]);
    return (1 - w) * ys[i] + w * ys[i + 1];
  };
  p.description_ = "tabulated";
  return p;
}

InitialProfile InitialProfile::custom(std::function<double(double)> fn, std::string description) {
  if (!fn) throw ConfigError("custom profile requires a callable");
  InitialProfile p;
  p.kind_ = Kind::Custom;
  p.fn_ = std::move(fn);
  p.description_ = std::move(description);
  return p;
}

}  // namespace chemofront
