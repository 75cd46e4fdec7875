#include "chemofront/series.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "chemofront/errors.hpp"

namespace chemofront {

void RunSeries::push(const Sample& s) {
  if (!samples.empty()) {
    const Sample& last = samples.back();
    if (!(s.t > last.t)) throw AssertionFailure("run series: t must be strictly increasing");
    if (s.h < last.h) throw AssertionFailure("run series: front position decreased");
    if (double_front && s.g > last.g) throw AssertionFailure("run series: left front advanced");
  }
  samples.push_back(s);
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Spreading:
      return "Spreading";
    case Verdict::Vanishing:
      return "Vanishing";
    case Verdict::Undetermined:
      return "Undetermined";
  }
  return "?";
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(std::ostream& os, const RunSeries& series) {
  os << "t,h,h_prime,sup_u,inf_u_window,combo_residual,gradient_residual";
  if (series.double_front) os << ",g,g_prime";
  os << '\n';
  for (const Sample& s : series.samples) {
    os << format_number(s.t) << ',' << format_number(s.h) << ',' << format_number(s.h_prime) << ','
       << format_number(s.sup_u) << ',' << format_number(s.inf_u_window) << ','
       << format_number(s.combo_residual) << ',' << format_number(s.gradient_residual);
    if (series.double_front) os << ',' << format_number(s.g) << ',' << format_number(s.g_prime);
    os << '\n';
  }
}

void write_csv(const std::string& path, const RunSeries& series) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  write_csv(os, series);
}

RunSeries read_csv(std::istream& is) {
  RunSeries series;
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("run series CSV: missing header");
  series.double_front = line.find(",g,g_prime") != std::string::npos;
  const std::size_t columns = series.double_front ? 9 : 7;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    if (v.size() != columns) throw ConfigError("run series CSV: wrong column count");
    Sample s{v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
    if (series.double_front) {
      s.g = v[7];
      s.g_prime = v[8];
    }
    series.push(s);
  }
  return series;
}

}  // namespace chemofront
