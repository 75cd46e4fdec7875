#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "chemofront/errors.hpp"
#include "chemofront/harness.hpp"

namespace {

using chemofront::Json;

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kRunFailure = 3;
constexpr int kAssertionFailure = 4;

struct Options {
  std::string config;
  std::string out;
  std::vector<std::string> overrides;
  int jobs = 1;
  bool allow_h1 = false;
  std::string preset;
};

Json load(const Options& o, const std::string& fallback_kind = "") {
  Json cfg;
  if (!o.config.empty()) {
    cfg = chemofront::load_config(o.config);
  } else if (!fallback_kind.empty()) {
    cfg = chemofront::default_config(fallback_kind);
  } else {
    throw chemofront::ConfigError("--config is required");
  }
  if (o.allow_h1) cfg["allow_h1_violation"] = true;
  for (const std::string& ov : o.overrides) chemofront::apply_override(cfg, ov);
  return cfg;
}

std::string out_dir(const Options& o, const Json& cfg, const std::string& fallback) {
  if (!o.out.empty()) return o.out;
  const std::string d = cfg["output"]["dir"];
  return d.empty() ? fallback : d;
}

void add_common(CLI::App* cmd, Options& o, bool with_config = true) {
  if (with_config) cmd->add_option("--config", o.config, "JSON config file");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--override", o.overrides, "Dotted key=value override (repeatable)")->take_all();
  cmd->add_option("--jobs", o.jobs, "Parallel runs")->check(CLI::PositiveNumber);
  cmd->add_flag("--allow-h1-violation", o.allow_h1, "Run configs that violate (H1)");
}

int cmd_run(const Options& o) {
  const Json cfg = load(o);
  const chemofront::RunReport rep = chemofront::execute(cfg);
  const std::string dir = out_dir(o, cfg, "out");
  chemofront::write_run_outputs(rep, dir);
  Json line{{"digest", rep.digest}, {"verdict", rep.verdict}, {"out", dir}};
  line["final_sup_u"] = rep.outcome.final_sup_u;
  std::cout << line.dump() << "\n";
  return kOk;
}

int cmd_sweep(const Options& o) {
  const Json cfg = load(o);
  chemofront::SweepSpec spec = chemofront::sweep_from(cfg);
  spec.jobs = o.jobs;
  const chemofront::SweepSummary sum = chemofront::run_sweep(spec);
  const std::string dir = out_dir(o, cfg, "sweep_out");
  chemofront::write_sweep_outputs(sum, dir);
  int errors = 0;
  for (const auto& c : sum.cells) errors += c.status != "ok";
  std::cout << Json{{"digest", sum.digest}, {"cells", sum.cells.size()}, {"errors", errors}, {"out", dir}}.dump()
            << "\n";
  return kOk;
}

int cmd_spectrum(const Options& o) {
  const Json cfg = load(o, "single");
  const Json rep = chemofront::spectrum_report(cfg);
  if (!o.out.empty()) {
    std::filesystem::create_directories(o.out);
    std::ofstream(std::filesystem::path(o.out) / "spectrum.json") << rep.dump(2) << "\n";
  }
  std::cout << rep.dump(2) << "\n";
  return kOk;
}

int cmd_experiment(const Options& o) {
  chemofront::ExperimentOptions eo;
  eo.overrides = o.overrides;
  eo.out_dir = o.out.empty() ? "experiment_" + o.preset : o.out;
  eo.jobs = o.jobs;
  eo.allow_h1_violation = o.allow_h1;
  const Json rep = chemofront::run_experiment(o.preset, eo);
  for (const Json& a : rep["assertions"]) {
    std::cout << (a["passed"].get<bool>() ? "PASS " : "FAIL ") << a["name"].get<std::string>() << "  value="
              << a["value"].dump() << " limit=" << a["limit"].dump() << "\n";
  }
  std::cout << (rep["passed"].get<bool>() ? "experiment passed" : "experiment FAILED") << " (" << eo.out_dir
            << "/summary.json)\n";
  return rep["passed"].get<bool>() ? kOk : kAssertionFailure;
}

int cmd_validate(const Options& o) {
  const Json cfg = load(o);
  std::cout << Json{{"digest", chemofront::config_digest(cfg)}, {"config", cfg}}.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free-boundary attraction-repulsion chemotaxis laboratory"};
  app.require_subcommand(1);
  Options o;
  auto* run = app.add_subcommand("run", "Run one configuration");
  add_common(run, o);
  auto* sweep = app.add_subcommand("sweep", "Run the cartesian sweep described in config.sweep");
  add_common(sweep, o);
  auto* spectrum = app.add_subcommand("spectrum", "Principal exponents and critical lengths");
  add_common(spectrum, o);
  auto* experiment = app.add_subcommand("experiment", "Run a named experiment preset");
  add_common(experiment, o, false);
  experiment->add_option("preset", o.preset, "Preset name")
      ->required()
      ->check(CLI::IsMember(chemofront::experiment_presets()));
  auto* validate = app.add_subcommand("validate-config", "Normalize a config and print its digest");
  add_common(validate, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*run) return cmd_run(o);
    if (*sweep) return cmd_sweep(o);
    if (*spectrum) return cmd_spectrum(o);
    if (*experiment) return cmd_experiment(o);
    if (*validate) return cmd_validate(o);
  } catch (const chemofront::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const chemofront::AssertionFailure& e) {
    std::cerr << "assertion failure: " << e.what() << "\n";
    return kAssertionFailure;
  } catch (const std::exception& e) {
    std::cerr << "run failure: " << e.what() << "\n";
    return kRunFailure;
  }
  return kConfigError;
}
