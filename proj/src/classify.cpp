#include "chemofront/classify.hpp"

#include <cmath>
#include <limits>

#include "chemofront/errors.hpp"

namespace chemofront {

void ClassifyThresholds::validate() const {
  if (!(eps_v > 0.0) || !(eps_h > 0.0) || !(delta_s > 0.0)) {
    throw ConfigError("classify thresholds must be positive");
  }
  if (!(eps_v < delta_s)) throw ConfigError("classify thresholds need eps_v < delta_s");
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) {
    throw ConfigError("classify window_fraction must lie in (0, 1]");
  }
  if (!(h_max >= 0.0)) throw ConfigError("classify h_max must be >= 0");
}

Outcome classify(const RunSeries& series, double l_star, const ClassifyThresholds& th) {
  Outcome out;
  out.l_star = l_star;
  if (series.empty()) return out;
  const Sample& last = series.back();
  out.final_sup_u = last.sup_u;

  const double t_first = series.samples.front().t;
  const double t_cut = last.t - th.window_fraction * (last.t - t_first);
  bool vanished = last.t > t_first;
  bool persistent = true;
  for (auto it = series.samples.rbegin(); it != series.samples.rend() && it->t >= t_cut; ++it) {
    if (!(it->sup_u < th.eps_v)) vanished = false;
    if (!(std::abs(it->h_prime) < th.eps_h)) vanished = false;
    if (series.double_front && !(std::abs(it->g_prime) < th.eps_h)) vanished = false;
    if (!(it->inf_u_window >= th.delta_s)) persistent = false;
  }
  bool capped = th.h_max > 0.0 && last.h - th.center >= th.h_max;
  if (series.double_front) capped = capped && th.center - last.g >= th.h_max;

  if (vanished) {
    out.verdict = Verdict::Vanishing;
    out.h_infinity_estimate = last.h;
    if (series.double_front) out.g_infinity_estimate = last.g;
  } else if (capped && persistent) {
    out.verdict = Verdict::Spreading;
    if (series.double_front) out.g_infinity_estimate = -std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace chemofront
