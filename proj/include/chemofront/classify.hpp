#pragma once

#include "chemofront/series.hpp"

namespace chemofront {

/// Finite-time surrogates for the asymptotic spreading/vanishing notions.
struct ClassifyThresholds {
  double eps_v = 1e-6;            // sup_u below this counts as vanished
  double eps_h = 1e-8;            // front speed below this counts as stalled
  double delta_s = 1e-3;          // window infimum at or above this counts as persistent
  double window_fraction = 0.2;   // trailing share of the elapsed run
  double h_max = 0.0;             // front cap (distance from `center`); 0 disables spreading
  double center = 0.0;            // double-front runs: reference point for both caps

  /// Throws ConfigError; in particular eps_v < delta_s keeps the verdicts exclusive.
  void validate() const;
};

/// Pure function of its inputs. Vanishing: over the trailing window sup_u < eps_v
/// and every front speed < eps_h. Spreading: the front(s) reached the cap and the
/// probe-window infimum stayed >= delta_s over the trailing window.
Outcome classify(const RunSeries& series, double l_star, const ClassifyThresholds& th = {});

}  // namespace chemofront
