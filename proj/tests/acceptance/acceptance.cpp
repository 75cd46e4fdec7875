// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria (0 when all pass).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "../oracles.hpp"
#include "chemofront/elliptic.hpp"
#include "chemofront/errors.hpp"
#include "chemofront/fixeddomain.hpp"
#include "chemofront/frontsolver.hpp"
#include "chemofront/harness.hpp"
#include "chemofront/spectrum.hpp"
#include "chemofront/transport.hpp"

using namespace chemofront;
using oracle::pi;

namespace {

struct Check {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, double budget_s, const std::function<void(Check&)>& body) {
  Check v;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail << " [exception: " << e.what() << "]";
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (dt > budget_s) {
    v.pass = false;
    v.detail << " [runtime " << dt << " s over budget " << budget_s << " s]";
  }
  if (!v.pass) ++failures;
  std::printf("criterion %2d: %s (%.2f s)%s\n", id, v.pass ? "PASS" : "FAIL", dt, v.detail.str().c_str());
  std::fflush(stdout);
}

double deviation(const SnapshotTable& s, double lo, double hi, double target) {
  double dev = 0.0;
  for (std::size_t j = 0; j < s.u.size(); ++j) {
    const double x = s.left + s.y[j] * s.length;
    if (x >= lo - 1e-12 && x <= hi + 1e-12) dev = std::max(dev, std::abs(s.u[j] - target));
  }
  return dev;
}

Json single(double h0, double amp) {
  Json c = default_config("single");
  c["geometry"]["h0"] = h0;
  c["initial"]["amplitude"] = amp;
  c["h_max"] = 20.0;
  c["time"]["t_end"] = 300.0;
  return normalize_config(c);
}

}  // namespace

int main() {
  // 1. Eigenvalue closed forms.
  criterion(1, 1.0 * 6, [](Check& v) {
    auto one = [](double) { return 1.0; };
    double worst = 0.0;
    for (double l : {0.5, 1.0, 3.0, 10.0}) {
      const auto t0 = std::chrono::steady_clock::now();
      const double lam = principal_eigenvalue_extrapolated(one, MixedBC{l}, 256);
      const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      worst = std::max(worst, std::abs(lam - (1.0 - pi * pi / (4 * l * l))));
      v.require(el < 1.0, "mixed runtime");
    }
    for (double L : {1.0, pi, 6.0}) {
      const double lam = principal_eigenvalue_extrapolated(one, DirichletBC{0.0, L}, 256);
      worst = std::max(worst, std::abs(lam - (1.0 - pi * pi / (L * L))));
    }
    v.detail << " max |error| = " << worst;
    v.require(worst <= 1e-6, "closed form within 1e-6");
  });

  // 2. Critical lengths.
  criterion(2, 10.0, [](Check& v) {
    const double l1 = find_l_star(CoefficientField::constant(1, 1));
    const double l4 = find_l_star(CoefficientField::constant(4, 1));
    const double ll = find_l_star_star(CoefficientField::constant(1, 1));
    v.detail << " l*(1) = " << l1 << ", l*(4) = " << l4 << ", l**(1) = " << ll;
    v.require(std::abs(l1 - pi / 2) <= 1e-3, "l* = pi/2");
    v.require(std::abs(ll - pi) <= 1e-3, "l** = pi");
    v.require(std::abs(l4 - l1 / 2) <= 1e-3, "l*(4) = l*(1)/2");
  });

  // 3. Elliptic solver vs the heat-kernel reflection oracle.
  criterion(3, 30.0, [](Check& v) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const int n = 64;
    double worst_ratio = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const double h = 0.5 + 4.0 * U(rng);
      const double lambda = 0.2 + 2.0 * U(rng);
      const double mu = 0.1 + 2.0 * U(rng);
      // Smooth nonnegative source: offset plus a few random Fourier modes.
      double amp[5], phase[5];
      double total = 0.0;
      for (int k = 0; k < 5; ++k) {
        amp[k] = U(rng) / (1.0 + k);
        phase[k] = 2 * pi * U(rng);
        total += amp[k];
      }
      std::vector<double> u(n);
      for (int j = 0; j < n; ++j) {
        const double x = h * j / (n - 1.0);
        double s = total;
        for (int k = 0; k < 5; ++k) s += amp[k] * std::cos((k + 1) * pi * x / h + phase[k]);
        u[j] = s;
      }
      const auto a = solve_potential(u, lambda, mu, h);
      const auto b = potential_oracle_reflection(u, lambda, mu, h);
      const double dx = h / (n - 1);
      const double tol = std::max(1e-4, 5 * dx * dx);
      worst_ratio = std::max(worst_ratio, oracle::max_abs_diff(a, b) / tol);
    }
    v.detail << " worst error / tolerance = " << worst_ratio;
    v.require(worst_ratio <= 1.0, "agreement within max(1e-4, 5 dx^2)");
  });

  // 4. Bound suite on randomized (H1) configurations.
  criterion(4, 300.0, [](Check& v) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int runs = 0, above_M0 = 0;
    double worst_sup = -1e300, worst_combo = -1e300, worst_grad = -1e300, min_u = 0.0;
    bool h_monotone = true, sup_monotone = true;
    while (runs < 20) {
      FrontRunConfig cfg;
      ModelParams& p = cfg.params;
      p.chi1 = 0.5 * U(rng);
      p.chi2 = 0.5 * U(rng);
      p.mu1 = U(rng);
      p.mu2 = U(rng);
      p.lambda1 = 0.5 + 1.5 * U(rng);
      p.lambda2 = 0.5 + 1.5 * U(rng);
      p.nu = 0.5 + U(rng);
      const double a0 = 0.5 + 1.5 * U(rng), b0 = 1.0 + U(rng);
      if (runs % 2) {
        const double a1 = 0.4 * a0 * U(rng);
        cfg.coefficients = CoefficientField::make(Sampler::sin_periodic(a0, a1, 1.0 + U(rng)),
                                                  Sampler::constant(b0), {a0 - a1, a0 + a1, b0, b0});
      } else {
        cfg.coefficients = CoefficientField::constant(a0, b0);
      }
      const HypothesisReport hyp = check_hypotheses(p, cfg.coefficients);
      if (!hyp.h1_holds) continue;
      ++runs;
      cfg.h0 = 0.5 + 2.5 * U(rng);
      const double amp = 0.2 + 3.0 * U(rng);
      cfg.initial = InitialProfile::cosine(amp);
      cfg.grid_n = 96;
      cfg.t_end = 4.0;
      cfg.h_max = 1e4;
      cfg.l_star = 1.0;
      cfg.enforce_bounds = false;  // checked here, independently
      const double bound = std::max(amp, hyp.M0);
      if (amp > hyp.M0) ++above_M0;
      double prev_h = cfg.h0, prev_sup = amp;
      cfg.observer = [&](const FrontState& s) {
        const double sup = sup_norm(s.u);
        for (double x : s.u) min_u = std::min(min_u, x);
        worst_sup = std::max(worst_sup, sup - bound);
        if (s.h < prev_h) h_monotone = false;
        if (prev_sup > hyp.M0 && sup > prev_sup + 1e-9) sup_monotone = false;
        PotentialPair pp{s.v1, s.v2, s.grid_n, s.h};
        const double dx = s.h * s.dy();
        worst_combo = std::max(worst_combo, check_combo_bound(pp, s.u, p, hyp.M).residual / (10 * dx * dx));
        worst_grad = std::max(worst_grad, check_gradient_bound(pp, s.u, p).residual / (10 * dx * dx));
        prev_h = s.h;
        prev_sup = sup;
      };
      run(cfg);
    }
    v.detail << " runs = " << runs << " (" << above_M0 << " with ||u0|| > M0), min u = " << min_u
             << ", max sup - bound = " << worst_sup << ", combo/(10dx^2) = " << worst_combo
             << ", grad/(10dx^2) = " << worst_grad;
    v.require(min_u >= 0.0, "u >= 0");
    v.require(worst_sup <= 1e-3, "uniform bound");
    v.require(h_monotone, "h nondecreasing");
    v.require(worst_combo <= 1.0, "combo residual");
    v.require(worst_grad <= 1.0, "gradient residual");
    v.require(sup_monotone, "sup_u nonincreasing above M0");
    v.require(above_M0 > 0, "some runs start above M0");
  });

  // 5. Dichotomy.
  criterion(5, 300.0, [](Check& v) {
    const RunReport van = execute(single(0.4, 0.1));
    const double hinf = van.manifest["h_infinity_estimate"];
    v.detail << " h0=0.4: " << van.verdict << " h_inf = " << hinf;
    v.require(van.verdict == "Vanishing", "h0 = 0.4 vanishes");
    v.require(hinf <= pi / 2 + 0.05, "h_inf <= pi/2 + 0.05");
    v.require(van.final_profile.u.size() > 0 && sup_norm(van.final_profile.u) < 1e-6, "final sup_u < 1e-6");

    const RunReport spr = execute(single(2.0, 0.5));
    const double dev = deviation(spr.final_profile, 0.0, 1.0, 1.0);
    v.detail << "; h0=2: " << spr.verdict << " max|u-1| on [0,1] = " << dev;
    v.require(spr.verdict == "Spreading", "h0 = 2 spreads");
    v.require(dev <= 0.01, "u within 1% of 1");

    SweepSpec spec = sweep_from(experiment_base_config("dichotomy-sweep"));
    const SweepSummary sw = run_sweep(spec);
    bool seen_spreading = false, monotone = true, decided = true;
    std::string row;
    for (const SweepCell& c : sw.cells) {
      row += (c.verdict == "Vanishing" ? "V" : c.verdict == "Spreading" ? "S" : "?");
      if (c.verdict == "Spreading") seen_spreading = true;
      if (c.verdict == "Vanishing" && seen_spreading) monotone = false;
      if (c.status != "ok" || c.verdict == "Undetermined") decided = false;
    }
    v.detail << "; sweep h0=0.3..3.0: " << row;
    v.require(monotone, "monotone verdict boundary");
    v.require(decided, "every sweep cell decided");
  });

  // 6. ODE limit.
  criterion(6, 300.0, [](Check& v) {
    Json c = single(2.0, 0.5);
    c["coefficients"]["a"]["value"] = 2.0;
    c["coefficients"].erase("bounds");
    c = normalize_config(c);
    const RunReport r = execute(c);
    const double dev = deviation(r.final_profile, 0.0, 1.0, 2.0) / 2.0;
    v.detail << " constant: " << r.verdict << " |u-2|/2 = " << dev;
    v.require(r.verdict == "Spreading", "constant run spreads");
    v.require(dev <= 0.01, "u within 1% of a/b");

    const auto orbit = logistic_entire_solution(Sampler::sin_periodic(1.0, 0.5, 1.0), Sampler::constant(1.0), 1.0);
    double oracle_err = 0.0;
    for (int k = 0; k < 50; ++k) {
      const double t = k / 50.0 + 0.003;
      oracle_err = std::max(oracle_err, std::abs(orbit(t) - oracle::bernoulli_periodic_logistic(1.0, 0.5, 1.0, 1.0, t)));
    }
    v.detail << "; orbit vs Bernoulli = " << oracle_err;
    v.require(oracle_err <= 1e-8, "orbit within 1e-8 of the Bernoulli oracle");

    Json p = single(2.0, 0.5);
    p["coefficients"] = {{"a", {{"type", "sin_periodic"}, {"offset", 1.0}, {"amplitude", 0.5}, {"period", 1.0}}},
                         {"b", 1.0},
                         {"bounds", {{"a_inf", 0.5}, {"a_sup", 1.5}, {"b_inf", 1.0}, {"b_sup", 1.0}}}};
    const double t_end = 40.0;
    p["time"]["t_end"] = t_end;
    p["time"]["stop_on_verdict"] = false;
    p["h_max"] = 1e4;
    p["grid_n"] = 512;
    Json snaps = Json::array();
    for (int k = 0; k <= 20; ++k) snaps.push_back(t_end - 1.0 + k / 20.0);
    p["snapshots"] = snaps;
    const RunReport rp = execute(normalize_config(p));
    double dist = 0.0, scale = 0.0;
    for (const SnapshotTable& s : rp.snapshots) {
      const double target = orbit(s.t);
      dist = std::max(dist, deviation(s, 0.0, 1.0, target));
      scale = std::max(scale, target);
    }
    v.detail << "; periodic sup distance / max u* = " << dist / scale << " over " << rp.snapshots.size()
             << " snapshots";
    v.require(rp.snapshots.size() == 21, "final period sampled");
    v.require(dist / scale <= 0.02, "final period within 2% of the orbit");
  });

  // 7. Double fronts.
  criterion(7, 300.0, [](Check& v) {
    Json base = default_config("double");
    base["geometry"]["check_symmetry"] = true;
    base["h_max"] = 20.0;
    base["time"]["t_end"] = 300.0;
    Json narrow = base;
    narrow["geometry"]["g0"] = -0.6;
    narrow["geometry"]["h0"] = 0.6;
    narrow["initial"]["amplitude"] = 0.1;
    const RunReport a = execute(normalize_config(narrow));
    const double width = a.manifest["final_h"].get<double>() - a.manifest["final_g"].get<double>();
    const double sym_a = a.manifest["max_symmetry_error"];
    v.detail << " width 1.2: " << a.verdict << " final width = " << width;
    v.require(a.verdict == "Vanishing", "width 1.2 vanishes");
    v.require(width <= pi + 0.05, "final width <= pi + 0.05");

    Json wide = base;
    wide["geometry"]["g0"] = -2.0;
    wide["geometry"]["h0"] = 2.0;
    wide["initial"]["amplitude"] = 0.5;
    const RunReport b = execute(normalize_config(wide));
    const double dev = deviation(b.final_profile, -1.0, 1.0, 1.0);
    const double sym_b = b.manifest["max_symmetry_error"];
    v.detail << "; width 4: " << b.verdict << " max|u-1| on [-1,1] = " << dev << "; symmetry errors " << sym_a
             << ", " << sym_b;
    v.require(b.verdict == "Spreading", "width 4 spreads");
    v.require(dev <= 0.01, "u within 1% of 1");
    v.require(std::max(sym_a, sym_b) <= 1e-8, "|g| = h within 1e-8");
  });

  // 8. Persistence on the half-line.
  criterion(8, 120.0, [](Check& v) {
    const Json c = experiment_base_config("persistence");
    const RunReport r = execute(c);
    const HypothesisReport hyp = check_hypotheses(model_from(c), coefficients_from(c));
    const double lo = r.manifest["interior_min"], hi = r.manifest["interior_max"];
    v.detail << " (H2) " << (hyp.h2_holds ? "holds" : "fails") << ", interior u in [" << lo << ", " << hi
             << "], allowed [" << hyp.m0 - 0.02 << ", " << hyp.M0 + 1.02 << "]";
    v.require(hyp.h2_holds, "(H2) holds");
    v.require(r.manifest["persistence_checked"].get<bool>(), "persistence window evaluated");
    v.require(lo >= hyp.m0 - 0.02 && hi <= hyp.M0 + 1.0 + 0.02, "interior bounds");
  });

  // 9. Convergence orders of the front solver.
  criterion(9, 300.0, [](Check& v) {
    auto front_at = [](int intervals, double dt) {
      FrontRunConfig cfg;
      cfg.params.chi1 = 0.2;
      cfg.params.mu1 = 1.0;
      cfg.params.chi2 = 0.1;
      cfg.params.mu2 = 1.0;
      cfg.coefficients = CoefficientField::constant(1, 1);
      cfg.h0 = 1.5;
      cfg.initial = InitialProfile::cosine(0.5);
      cfg.grid_n = intervals + 1;
      cfg.t_end = 1.0;
      cfg.dt_max = dt;
      cfg.sample_interval = 0.5;
      cfg.l_star = pi / 2;
      return run(cfg).final_state.h;
    };
    const double s1 = front_at(40, 2e-4), s2 = front_at(80, 2e-4), s3 = front_at(160, 2e-4);
    const double p_space = std::log2(std::abs(s1 - s2) / std::abs(s2 - s3));
    const double t1 = front_at(40, 8e-3), t2 = front_at(40, 4e-3), t3 = front_at(40, 2e-3);
    const double p_time = std::log2(std::abs(t1 - t2) / std::abs(t2 - t3));
    v.detail << " spatial order = " << p_space << ", temporal order = " << p_time;
    v.require(p_space >= 1.8, "spatial order >= 1.8");
    v.require(p_time >= 0.9, "temporal order >= 0.9");
  });

  // 10. Sweep determinism.
  criterion(10, 300.0, [](Check& v) {
    Json c = default_config("single");
    c["time"]["t_end"] = 5.0;
    c["grid_n"] = 64;
    c["model"]["mu1"] = 1.0;
    c["sweep"]["axes"] = Json::array({{{"path", "geometry.h0"}, {"values", {0.5, 1.0, 2.0}}},
                                      {{"path", "model.chi1"}, {"values", {0.0, 0.3}}}});
    SweepSpec spec = sweep_from(normalize_config(c));
    spec.jobs = 1;
    const std::string a = run_sweep(spec).csv();
    spec.jobs = 4;
    const std::string b = run_sweep(spec).csv();
    const std::string d = run_sweep(spec).csv();
    v.detail << " " << a.size() << " bytes, 6 cells";
    v.require(a == b && b == d, "bit-identical phase tables");
  });

  return failures;
}
