#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace chemofront {

/// One row of a run's time series. For single-front and fixed-domain runs
/// g and g_prime are NaN and not written.
struct Sample {
  double t = 0.0;
  double h = 0.0;
  double h_prime = 0.0;
  double sup_u = 0.0;
  double inf_u_window = 0.0;  // inf of u over the probe window [0, L_probe] (or [-L, L])
  double combo_residual = 0.0;
  double gradient_residual = 0.0;
  double g = std::numeric_limits<double>::quiet_NaN();
  double g_prime = std::numeric_limits<double>::quiet_NaN();
};

/// Time series of a run. t is strictly increasing and h nondecreasing.
struct RunSeries {
  std::vector<Sample> samples;
  std::string config_digest;
  bool double_front = false;

  bool empty() const { return samples.empty(); }
  const Sample& back() const { return samples.back(); }
  /// Appends a sample, enforcing the monotonicity invariants.
  void push(const Sample& s);
};

enum class Verdict { Spreading, Vanishing, Undetermined };

const char* to_string(Verdict v);

struct Outcome {
  Verdict verdict = Verdict::Undetermined;
  double h_infinity_estimate = std::numeric_limits<double>::infinity();
  /// Double-front runs only: left limit (-infinity sentinel when spreading).
  double g_infinity_estimate = std::numeric_limits<double>::quiet_NaN();
  double final_sup_u = 0.0;
  double l_star = 0.0;
};

/// Formats a double so that it round-trips exactly ("%.17g", '.' decimal).
std::string format_number(double x);

/// CSV (header row, LF endings) with columns
/// t,h,h_prime,sup_u,inf_u_window,combo_residual,gradient_residual[,g,g_prime].
void write_csv(std::ostream& os, const RunSeries& series);
void write_csv(const std::string& path, const RunSeries& series);
RunSeries read_csv(std::istream& is);

}  // namespace chemofront
