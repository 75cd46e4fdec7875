#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "chemofront/errors.hpp"
#include "chemofront/harness.hpp"

namespace chemofront {
namespace {

const std::set<std::string> kKinds = {"single", "double", "halfline", "fixed"};

// Typed reader over one JSON object that remembers which keys were consumed.
class Section {
 public:
  Section(const Json* raw, std::string where) : raw_(raw), where_(std::move(where)) {
    if (raw_ && !raw_->is_object()) throw ConfigError(where_ + ": expected an object");
  }

  const Json* child(const std::string& key) {
    used_.insert(key);
    if (!raw_) return nullptr;
    auto it = raw_->find(key);
    return it == raw_->end() || it->is_null() ? nullptr : &*it;
  }

  double num(const std::string& key, double def, bool required = false) {
    const Json* j = child(key);
    if (!j) {
      if (required) throw ConfigError(path(key) + ": required number is missing");
      return def;
    }
    if (!j->is_number()) throw ConfigError(path(key) + ": expected a number");
    const double v = j->get<double>();
    if (!std::isfinite(v)) throw ConfigError(path(key) + ": must be finite");
    return v;
  }

  int integer(const std::string& key, int def) {
    const Json* j = child(key);
    if (!j) return def;
    if (j->is_number_integer()) return j->get<int>();
    if (j->is_number_float()) {
      const double v = j->get<double>();
      if (v == std::floor(v) && std::abs(v) < 1e9) return static_cast<int>(v);
    }
    throw ConfigError(path(key) + ": expected an integer");
  }

  bool flag(const std::string& key, bool def) {
    const Json* j = child(key);
    if (!j) return def;
    if (!j->is_boolean()) throw ConfigError(path(key) + ": expected true or false");
    return j->get<bool>();
  }

  std::string str(const std::string& key, const std::string& def) {
    const Json* j = child(key);
    if (!j) return def;
    if (!j->is_string()) throw ConfigError(path(key) + ": expected a string");
    return j->get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, bool required = false) {
    const Json* j = child(key);
    if (!j) {
      if (required) throw ConfigError(path(key) + ": required array is missing");
      return {};
    }
    if (!j->is_array()) throw ConfigError(path(key) + ": expected an array of numbers");
    std::vector<double> out;
    for (const Json& e : *j) {
      if (!e.is_number()) throw ConfigError(path(key) + ": expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  void finish() const {
    if (!raw_) return;
    for (auto it = raw_->begin(); it != raw_->end(); ++it) {
      if (!used_.count(it.key())) throw ConfigError(path(it.key()) + ": unknown key");
    }
  }

  std::string path(const std::string& key) const { return where_.empty() ? key : where_ + "." + key; }

 private:
  const Json* raw_;
  std::string where_;
  std::set<std::string> used_;
};

// t,x,value rows -> inline tabulated arrays.
Json load_table_file(const std::string& file, const std::string& base_dir, const std::string& where) {
  std::filesystem::path p(file);
  if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
  std::ifstream is(p);
  if (!is) throw ConfigError(where + ": table file " + p.string() + " does not exist");
  std::string line;
  std::getline(is, line);
  if (line.rfind("t,x,value", 0) != 0) throw ConfigError(where + ": table file needs header t,x,value");
  std::map<std::pair<double, double>, double> cells;
  std::set<double> ts, xs;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string a, b, c;
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    std::getline(ss, c, ',');
    try {
      const double t = std::stod(a), x = std::stod(b), v = std::stod(c);
      cells[{t, x}] = v;
      ts.insert(t);
      xs.insert(x);
    } catch (const std::exception&) {
      throw ConfigError(where + ": malformed table row '" + line + "'");
    }
  }
  Json values = Json::array();
  for (double t : ts) {
    for (double x : xs) {
      auto it = cells.find({t, x});
      if (it == cells.end()) throw ConfigError(where + ": table file is not a full (t, x) grid");
      values.push_back(it->second);
    }
  }
  return Json{{"t", std::vector<double>(ts.begin(), ts.end())},
              {"x", std::vector<double>(xs.begin(), xs.end())},
              {"values", values}};
}

Json normalize_sampler(const Json* raw, const std::string& where, const std::string& base_dir,
                       double default_value) {
  if (!raw) return Json{{"type", "constant"}, {"value", default_value}};
  if (raw->is_number()) return Json{{"type", "constant"}, {"value", raw->get<double>()}};
  Section s(raw, where);
  const std::string type = s.str("type", "constant");
  Json out{{"type", type}};
  if (type == "constant") {
    out["value"] = s.num("value", default_value);
  } else if (type == "sin_periodic") {
    out["offset"] = s.num("offset", 0.0, true);
    out["amplitude"] = s.num("amplitude", 0.0, true);
    out["period"] = s.num("period", 1.0);
  } else if (type == "cos_space") {
    out["offset"] = s.num("offset", 0.0, true);
    out["amplitude"] = s.num("amplitude", 0.0, true);
    out["wavelength"] = s.num("wavelength", 0.0, true);
    out["time_amplitude"] = s.num("time_amplitude", 0.0);
    out["period"] = s.num("period", 1.0);
  } else if (type == "tabulated") {
    const std::string file = s.str("file", "");
    if (!file.empty()) {
      Json table = load_table_file(file, base_dir, where);
      out["t"] = table["t"];
      out["x"] = table["x"];
      out["values"] = table["values"];
      s.child("t");
      s.child("x");
      s.child("values");
    } else {
      out["t"] = s.numbers("t", true);
      out["x"] = s.numbers("x", true);
      out["values"] = s.numbers("values", true);
    }
    out["period"] = s.num("period", 1.0, true);
  } else {
    throw ConfigError(where + ".type: unknown sampler type '" + type + "'");
  }
  s.finish();
  sampler_from(out);  // surfaces parameter errors here
  return out;
}

Json normalize_initial(const Json* raw, const std::string& kind, const std::string& bc) {
  std::string def_type = "cosine";
  double def_amp = 1.0;
  if (kind == "halfline") def_type = "constant", def_amp = 0.5;
  if (kind == "fixed") def_type = bc == "dirichlet" ? "sine" : "cosine", def_amp = 0.1;
  Section s(raw, "initial");
  const std::string type = s.str("type", def_type);
  Json out{{"type", type}};
  if (type == "cosine" || type == "sine") {
    out["amplitude"] = s.num("amplitude", type == def_type ? def_amp : 1.0);
    if (!(out["amplitude"].get<double>() >= 0.0)) throw ConfigError("initial.amplitude must be >= 0");
  } else if (type == "constant") {
    out["value"] = s.num("value", type == def_type ? def_amp : 0.0);
  } else if (type == "tabulated") {
    out["s"] = s.numbers("s", true);
    out["values"] = s.numbers("values", true);
  } else {
    throw ConfigError("initial.type: unknown profile type '" + type + "'");
  }
  s.finish();
  return out;
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::stringstream ss(path);
  std::string part;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  if (parts.empty() || std::any_of(parts.begin(), parts.end(), [](auto& p) { return p.empty(); })) {
    throw ConfigError("malformed config path '" + path + "'");
  }
  return parts;
}

}  // namespace

Json default_config(const std::string& kind) {
  return normalize_config(Json{{"geometry", {{"kind", kind}}}});
}

Json normalize_config(const Json& raw, const std::string& base_dir) {
  if (!raw.is_object()) throw ConfigError("config: expected a JSON object");
  Section top(&raw, "");
  Json out;

  Section geo(top.child("geometry"), "geometry");
  const std::string kind = geo.str("kind", "single");
  if (!kKinds.count(kind)) throw ConfigError("geometry.kind: unknown kind '" + kind + "'");
  Json g{{"kind", kind}};
  std::string bc;
  if (kind == "single") {
    g["h0"] = geo.num("h0", 1.0);
  } else if (kind == "double") {
    g["g0"] = geo.num("g0", -1.0);
    g["h0"] = geo.num("h0", 1.0);
    g["check_symmetry"] = geo.flag("check_symmetry", false);
    g["symmetry_tolerance"] = geo.num("symmetry_tolerance", 1e-8);
  } else if (kind == "halfline") {
    g["L"] = geo.num("L", 0.0);
  } else {
    bc = geo.str("bc", "mixed");
    g["bc"] = bc;
    if (bc == "mixed") {
      g["l"] = geo.num("l", 3.0);
    } else if (bc == "dirichlet") {
      g["l1"] = geo.num("l1", 0.0);
      g["l2"] = geo.num("l2", 4.0);
    } else {
      throw ConfigError("geometry.bc: expected 'mixed' or 'dirichlet'");
    }
    g["beta"] = normalize_sampler(geo.child("beta"), "geometry.beta", base_dir, 0.0);
  }
  geo.finish();
  out["geometry"] = g;

  Section model(top.child("model"), "model");
  out["model"] = {{"chi1", model.num("chi1", 0.0)},       {"chi2", model.num("chi2", 0.0)},
                  {"lambda1", model.num("lambda1", 1.0)}, {"lambda2", model.num("lambda2", 1.0)},
                  {"mu1", model.num("mu1", 0.0)},         {"mu2", model.num("mu2", 0.0)},
                  {"nu", model.num("nu", 1.0)}};
  model.finish();

  Section coef(top.child("coefficients"), "coefficients");
  Json a = normalize_sampler(coef.child("a"), "coefficients.a", base_dir, 1.0);
  Json b = normalize_sampler(coef.child("b"), "coefficients.b", base_dir, 1.0);
  Json bounds;
  if (const Json* bj = coef.child("bounds")) {
    Section bs(bj, "coefficients.bounds");
    bounds = {{"a_inf", bs.num("a_inf", 0.0, true)}, {"a_sup", bs.num("a_sup", 0.0, true)},
              {"b_inf", bs.num("b_inf", 0.0, true)}, {"b_sup", bs.num("b_sup", 0.0, true)}};
    bs.finish();
  } else if (a["type"] == "constant" && b["type"] == "constant") {
    bounds = {{"a_inf", a["value"]}, {"a_sup", a["value"]}, {"b_inf", b["value"]}, {"b_sup", b["value"]}};
  } else {
    throw ConfigError("coefficients.bounds: required for non-constant coefficients");
  }
  Section check(coef.child("check"), "coefficients.check");
  Json check_j = {{"samples", check.integer("samples", 10000)},
                  {"x_extent", check.num("x_extent", 100.0)},
                  {"x_origin", check.num("x_origin", 0.0)}};
  check.finish();
  coef.finish();
  out["coefficients"] = {{"a", a}, {"b", b}, {"bounds", bounds}, {"check", check_j}};

  out["initial"] = normalize_initial(top.child("initial"), kind, bc);

  const int def_grid = kind == "double" ? 257 : kind == "halfline" ? 512 : kind == "fixed" ? 201 : 256;
  out["grid_n"] = top.integer("grid_n", def_grid);

  Section time(top.child("time"), "time");
  out["time"] = {{"t0", time.num("t0", 0.0)},
                 {"t_end", time.num("t_end", 50.0)},
                 {"dt_max", time.num("dt_max", 0.01)},
                 {"sample_interval", time.num("sample_interval", 0.1)},
                 {"stop_on_verdict", time.flag("stop_on_verdict", true)},
                 {"transient", time.num("transient", -1.0)}};
  time.finish();

  out["h_max"] = top.num("h_max", 0.0);

  Section cls(top.child("classify"), "classify");
  out["classify"] = {{"eps_v", cls.num("eps_v", 1e-6)},
                     {"eps_h", cls.num("eps_h", 1e-8)},
                     {"delta_s", cls.num("delta_s", 1e-3)},
                     {"window_fraction", cls.num("window_fraction", 0.2)},
                     {"probe_length", cls.num("probe_length", 0.0)}};
  cls.finish();

  Section diag(top.child("diagnostics"), "diagnostics");
  out["diagnostics"] = {{"enforce_bounds", diag.flag("enforce_bounds", true)},
                        {"bound_tolerance", diag.num("bound_tolerance", 1e-3)},
                        {"monotone_tolerance", diag.num("monotone_tolerance", 1e-9)},
                        {"blowup_guard", diag.num("blowup_guard", 1e3)},
                        {"persistence_tolerance", diag.num("persistence_tolerance", 0.02)},
                        {"vanishing_width_tolerance", diag.num("vanishing_width_tolerance", 0.05)}};
  diag.finish();

  out["allow_h1_violation"] = top.flag("allow_h1_violation", false);
  out["snapshots"] = top.numbers("snapshots");

  Section spec(top.child("spectrum"), "spectrum");
  out["spectrum"] = {{"grid_n", spec.integer("grid_n", 128)},
                     {"horizon", spec.num("horizon", 0.0)},
                     {"windows", spec.integer("windows", 4)},
                     {"dt", spec.num("dt", 0.01)},
                     {"tol", spec.num("tol", 1e-6)},
                     {"placements", spec.integer("placements", 64)},
                     {"placement_min", spec.num("placement_min", 0.0)},
                     {"placement_max", spec.num("placement_max", 100.0)}};
  spec.finish();

  Section sweep(top.child("sweep"), "sweep");
  Json axes = Json::array();
  if (const Json* aj = sweep.child("axes")) {
    if (!aj->is_array()) throw ConfigError("sweep.axes: expected an array");
    for (const Json& axis : *aj) {
      Section as(&axis, "sweep.axes[]");
      const std::string p = as.str("path", "");
      if (p.empty()) throw ConfigError("sweep.axes[].path: required");
      const Json* values = as.child("values");
      if (!values || !values->is_array() || values->empty()) {
        throw ConfigError("sweep.axes[].values: expected a nonempty array");
      }
      as.finish();
      axes.push_back({{"path", p}, {"values", *values}});
    }
  }
  sweep.finish();
  out["sweep"] = {{"axes", axes}};

  Section output(top.child("output"), "output");
  out["output"] = {{"dir", output.str("dir", "")}};
  output.finish();
  top.finish();

  // Semantic checks.
  model_from(out).validate();
  thresholds_from(out).validate();
  coefficients_from(out);
  initial_from(out);
  if (out["grid_n"].get<int>() < 32) throw ConfigError("grid_n must be >= 32");
  const Json& t = out["time"];
  if (!(t["t_end"].get<double>() > t["t0"].get<double>())) throw ConfigError("time.t_end must exceed time.t0");
  if (!(t["dt_max"].get<double>() > 0.0)) throw ConfigError("time.dt_max must be positive");
  if (!(t["sample_interval"].get<double>() > 0.0)) throw ConfigError("time.sample_interval must be positive");
  if (out["h_max"].get<double>() < 0.0) throw ConfigError("h_max must be >= 0");
  if (kind == "single" && !(g["h0"].get<double>() > 0.0)) throw ConfigError("geometry.h0 must be positive");
  if (kind == "double" && !(g["h0"].get<double>() > g["g0"].get<double>())) {
    throw ConfigError("geometry needs g0 < h0");
  }
  if (kind == "fixed" && bc == "mixed" && !(g["l"].get<double>() > 0.0)) throw ConfigError("geometry.l must be positive");
  if (kind == "fixed" && bc == "dirichlet" && !(g["l2"].get<double>() > g["l1"].get<double>())) {
    throw ConfigError("geometry needs l1 < l2");
  }
  for (const Json& axis : axes) {
    const std::string p = axis["path"];
    if (p.rfind("sweep", 0) == 0 || p.rfind("output", 0) == 0 || !has_path(out, p)) {
      throw ConfigError("sweep axis path '" + p + "' does not name a config field");
    }
  }
  return out;
}

Json load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  Json raw;
  try {
    raw = Json::parse(is);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path + ": invalid JSON: " + e.what());
  }
  const auto dir = std::filesystem::path(path).parent_path();
  return normalize_config(raw, dir.empty() ? "." : dir.string());
}

bool has_path(const Json& config, const std::string& path) {
  const Json* cur = &config;
  for (const std::string& part : split_path(path)) {
    if (!cur->is_object()) return false;
    auto it = cur->find(part);
    if (it == cur->end()) return false;
    cur = &*it;
  }
  return true;
}

void set_path(Json& config, const std::string& path, const Json& value) {
  if (!has_path(config, path)) throw ConfigError("unknown config path '" + path + "'");
  Json updated = config;
  if (path == "geometry.kind") {
    updated["geometry"] = Json{{"kind", value}};
    updated.erase("initial");
    updated.erase("grid_n");
  } else {
    Json* cur = &updated;
    for (const std::string& part : split_path(path)) cur = &(*cur)[part];
    *cur = value;
    // Bounds of constant coefficients are derived, so they follow the new value.
    Json& coef = updated["coefficients"];
    const bool constants = coef["a"].is_number() || coef["a"].value("type", "") == "constant";
    const bool constants_b = coef["b"].is_number() || coef["b"].value("type", "") == "constant";
    if (path.rfind("coefficients.", 0) == 0 && path.rfind("coefficients.bounds", 0) != 0 && constants &&
        constants_b) {
      coef.erase("bounds");
    }
  }
  config = normalize_config(updated);
}

void apply_override(Json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' must look like key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  Json value;
  try {
    value = Json::parse(text);
  } catch (const Json::parse_error&) {
    value = text;
  }
  set_path(config, key, value);
}

std::string config_digest(const Json& config) {
  Json canonical = config;
  canonical.erase("output");
  const std::string text = canonical.dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

ModelParams model_from(const Json& config) {
  const Json& m = config.at("model");
  ModelParams p;
  p.chi1 = m.at("chi1");
  p.chi2 = m.at("chi2");
  p.lambda1 = m.at("lambda1");
  p.lambda2 = m.at("lambda2");
  p.mu1 = m.at("mu1");
  p.mu2 = m.at("mu2");
  p.nu = m.at("nu");
  return p;
}

Sampler sampler_from(const Json& spec) {
  const std::string type = spec.at("type");
  if (type == "constant") return Sampler::constant(spec.at("value"));
  if (type == "sin_periodic") {
    return Sampler::sin_periodic(spec.at("offset"), spec.at("amplitude"), spec.at("period"));
  }
  if (type == "cos_space") {
    return Sampler::cos_space(spec.at("offset"), spec.at("amplitude"), spec.at("wavelength"),
                              spec.at("time_amplitude"), spec.at("period"));
  }
  if (type == "tabulated") {
    return Sampler::tabulated(spec.at("t").get<std::vector<double>>(), spec.at("x").get<std::vector<double>>(),
                              spec.at("values").get<std::vector<double>>(), spec.at("period"));
  }
  throw ConfigError("unknown sampler type '" + type + "'");
}

CoefficientField coefficients_from(const Json& config) {
  const Json& c = config.at("coefficients");
  const Json& b = c.at("bounds");
  CoefficientBounds bounds{b.at("a_inf"), b.at("a_sup"), b.at("b_inf"), b.at("b_sup")};
  const Json& ck = c.at("check");
  BoundCheckOptions check;
  check.samples = ck.at("samples");
  check.x_extent = ck.at("x_extent");
  check.x_origin = ck.at("x_origin");
  return CoefficientField::make(sampler_from(c.at("a")), sampler_from(c.at("b")), bounds, check);
}

InitialProfile initial_from(const Json& config) {
  const Json& i = config.at("initial");
  const std::string type = i.at("type");
  if (type == "cosine") return InitialProfile::cosine(i.at("amplitude"));
  if (type == "constant") return InitialProfile::constant(i.at("value"));
  if (type == "sine") {
    const double amp = i.at("amplitude");
    std::ostringstream os;
    os << amp << "*sin(pi s)";
    return InitialProfile::custom([amp](double s) { return amp * std::sin(3.14159265358979323846 * s); },
                                  os.str());
  }
  return InitialProfile::tabulated(i.at("s").get<std::vector<double>>(),
                                   i.at("values").get<std::vector<double>>());
}

ClassifyThresholds thresholds_from(const Json& config) {
  const Json& c = config.at("classify");
  ClassifyThresholds th;
  th.eps_v = c.at("eps_v");
  th.eps_h = c.at("eps_h");
  th.delta_s = c.at("delta_s");
  th.window_fraction = c.at("window_fraction");
  return th;
}

SpectrumOptions spectrum_options_from(const Json& config) {
  const Json& s = config.at("spectrum");
  SpectrumOptions o;
  o.grid_n = s.at("grid_n");
  o.horizon = s.at("horizon");
  o.windows = s.at("windows");
  o.dt = s.at("dt");
  o.placements = s.at("placements");
  o.placement_min = s.at("placement_min");
  o.placement_max = s.at("placement_max");
  return o;
}

}  // namespace chemofront
