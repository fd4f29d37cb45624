#include "cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "dqlin/io.hpp"

namespace dqlin::cli {

using nlohmann::json;

json default_config_tree() {
  return json::parse(R"({
    "model": {"name": "damped_oscillator", "parameters": {}},
    "state": {"n": 1, "l": 0},
    "time": {"t_max": 10.0, "samples": 101},
    "observables": ["H"],
    "tolerances": {"flow": 1e-10, "residual": 1e-8},
    "flow": {"method": "automatic", "fixed_step": 0.01},
    "expectation_route": "transported",
    "output": {"dir": "out", "format": "csv"},
    "wigner": {"times": [], "extent": 4.0, "points": 41, "axes": [0, 1]},
    "omega0": {"scale": 1.0, "matrix": null},
    "spectrum": {"n_min": 0, "n_max": 3, "l_min": 0, "l_max": 3},
    "verify": {"seed": 20240601, "samples": 20},
    "fault_injection": {"star_hbar_scale": 1.0}
  })");
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError("config field '" + path + "': " + msg);
}

std::string join(const std::string& a, const std::string& b) { return a.empty() ? b : a + "." + b; }

const char* type_label(const json& j) {
  if (j.is_number_integer()) return "integer";
  if (j.is_number()) return "number";
  return j.type_name();
}

// Check `user` against the shape of `schema`, merging into `out`.
void merge_checked(const json& schema, const json& user, json& out, const std::string& path) {
  if (!user.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : user.items()) {
    const std::string here = join(path, key);
    if (!schema.contains(key)) fail(here, "unknown key");
    const json& s = schema.at(key);
    if (here == "model.parameters") {
      if (!value.is_object()) fail(here, "expected an object");
      out[key] = value;
      continue;
    }
    if (s.is_object()) {
      merge_checked(s, value, out[key], here);
      continue;
    }
    bool ok;
    if (s.is_null())
      ok = value.is_null() || value.is_array();
    else if (s.is_number_integer())
      ok = value.is_number_integer() || (value.is_number_float() && value.get<double>() == std::floor(value.get<double>()));
    else if (s.is_number())
      ok = value.is_number();
    else
      ok = s.type() == value.type();
    if (!ok) fail(here, std::string("expected ") + type_label(s) + ", got " + type_label(value));
    out[key] = value;
  }
}

void apply_override(json& tree, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + spec + "' is not KEY=VALUE");
  const std::string key = spec.substr(0, eq), text = spec.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;  // bare words are strings
  json* node = &tree;
  std::stringstream ss(key);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t k = 0; k + 1 < parts.size(); ++k) {
    json& next = (*node)[parts[k]];
    if (next.is_null()) next = json::object();
    if (!next.is_object()) throw ConfigError("override '" + key + "': '" + parts[k] + "' is not an object");
    node = &next;
  }
  (*node)[parts.back()] = value;
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

Mat matrix_at(const json& j, const std::string& path) {
  try {
    return matrix_from_json(j);
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

const std::map<std::string, std::set<std::string>>& allowed_parameters() {
  static const std::map<std::string, std::set<std::string>> table{
      {"damped_oscillator", {"omega", "alpha", "hbar"}},
      {"damped_oscillator_canonical", {"omega", "alpha", "hbar"}},
      {"magnetic_charge", {"e", "H_field", "hbar", "A", "B"}},
      {"generic", {"A", "J", "hbar"}},
  };
  return table;
}

void read_model(const json& model, RunConfig& c) {
  c.model = model.at("name").get<std::string>();
  const auto& table = allowed_parameters();
  const auto it = table.find(c.model);
  if (it == table.end()) fail("model.name", "unknown model '" + c.model + "'");
  const json& params = model.at("parameters");
  for (const auto& [key, value] : params.items())
    if (!it->second.count(key)) fail("model.parameters." + key, "unknown parameter for model '" + c.model + "'");

  c.parameters["hbar"] = 1.0;
  if (c.model == "damped_oscillator" || c.model == "damped_oscillator_canonical") {
    c.parameters["omega"] = 1.0;
    c.parameters["alpha"] = 0.1;
  } else if (c.model == "magnetic_charge") {
    c.parameters["e"] = 1.0;
    c.parameters["H_field"] = 1.0;
  }
  for (const auto& [key, value] : params.items()) {
    const std::string path = "model.parameters." + key;
    if (c.model == "generic" && key == "A") {
      c.generic_A = matrix_at(value, path);
    } else if (c.model == "generic" && key == "J") {
      if (!value.is_array()) fail(path, "expected a list of numbers");
      Vec J(static_cast<long>(value.size()));
      for (std::size_t k = 0; k < value.size(); ++k) J(static_cast<long>(k)) = number_at(value.at(k), path);
      c.generic_J = J;
    } else {
      c.parameters[key] = number_at(value, path);
    }
  }
  if (c.model == "magnetic_charge" && (c.parameters.count("A") != c.parameters.count("B")))
    fail("model.parameters", "A and B must be given together");
  if (c.model == "generic") {
    if (!c.generic_A) fail("model.parameters.A", "required for the generic model");
    if (c.generic_A->rows() != c.generic_A->cols()) fail("model.parameters.A", "must be square");
    if (c.generic_J && c.generic_J->size() != c.generic_A->rows())
      fail("model.parameters.J", "length does not match A");
  }
}

RunConfig interpret(const json& tree) {
  RunConfig c;
  c.resolved = tree;
  read_model(tree.at("model"), c);

  c.n = tree.at("state").at("n").get<int>();
  c.l = tree.at("state").at("l").get<int>();
  if (c.n < 0 || c.n > 40) fail("state.n", "must be in 0..40");
  if (c.l < 0 || c.l > 40) fail("state.l", "must be in 0..40");

  c.t_max = tree.at("time").at("t_max").get<double>();
  c.samples = tree.at("time").at("samples").get<int>();
  if (!(c.t_max >= 0.0) || !std::isfinite(c.t_max)) fail("time.t_max", "must be finite and >= 0");
  if (c.samples < 1) fail("time.samples", "must be >= 1");
  if (c.t_max > 0.0 && c.samples < 2) fail("time.samples", "must be >= 2 when t_max > 0");

  c.observables.clear();
  for (const json& o : tree.at("observables")) {
    if (!o.is_string()) fail("observables", "entries must be strings");
    c.observables.push_back(o.get<std::string>());
  }

  c.flow_tolerance = tree.at("tolerances").at("flow").get<double>();
  c.residual_tolerance = tree.at("tolerances").at("residual").get<double>();
  if (!(c.flow_tolerance > 0.0)) fail("tolerances.flow", "must be positive");
  if (!(c.residual_tolerance > 0.0)) fail("tolerances.residual", "must be positive");

  c.flow_method = tree.at("flow").at("method").get<std::string>();
  static const std::set<std::string> methods{"automatic", "matrix_exponential", "adaptive", "fixed_step"};
  if (!methods.count(c.flow_method)) fail("flow.method", "one of automatic, matrix_exponential, adaptive, fixed_step");
  c.fixed_step = tree.at("flow").at("fixed_step").get<double>();
  if (!(c.fixed_step > 0.0)) fail("flow.fixed_step", "must be positive");

  c.route = tree.at("expectation_route").get<std::string>();
  if (c.route != "transported" && c.route != "direct" && c.route != "pointwise")
    fail("expectation_route", "one of transported, direct, pointwise");

  c.out_dir = tree.at("output").at("dir").get<std::string>();
  c.format = tree.at("output").at("format").get<std::string>();
  if (c.format != "csv" && c.format != "json") fail("output.format", "one of csv, json");

  const json& w = tree.at("wigner");
  for (const json& t : w.at("times")) c.wigner_times.push_back(number_at(t, "wigner.times"));
  for (double t : c.wigner_times)
    if (t < 0.0 || t > c.t_max) fail("wigner.times", "times must lie in [0, time.t_max]");
  c.wigner_extent = w.at("extent").get<double>();
  c.wigner_points = w.at("points").get<int>();
  if (!(c.wigner_extent > 0.0)) fail("wigner.extent", "must be positive");
  if (c.wigner_points < 2 || c.wigner_points > 4001) fail("wigner.points", "must be in 2..4001");
  if (!w.at("axes").is_array() || w.at("axes").size() != 2) fail("wigner.axes", "expected two coordinate indices");
  for (int k = 0; k < 2; ++k) {
    const json& a = w.at("axes").at(k);
    if (!a.is_number_integer()) fail("wigner.axes", "indices must be integers");
    c.wigner_axes[k] = a.get<int>();
  }

  c.omega0_scale = tree.at("omega0").at("scale").get<double>();
  if (!std::isfinite(c.omega0_scale) || c.omega0_scale == 0.0) fail("omega0.scale", "must be finite and non-zero");
  if (!tree.at("omega0").at("matrix").is_null()) c.omega0 = matrix_at(tree.at("omega0").at("matrix"), "omega0.matrix");

  const json& sp = tree.at("spectrum");
  c.spectrum_n_min = sp.at("n_min").get<int>();
  c.spectrum_n_max = sp.at("n_max").get<int>();
  c.spectrum_l_min = sp.at("l_min").get<int>();
  c.spectrum_l_max = sp.at("l_max").get<int>();
  if (c.spectrum_n_min < 0 || c.spectrum_n_max < c.spectrum_n_min || c.spectrum_n_max > 40)
    fail("spectrum.n_max", "need 0 <= n_min <= n_max <= 40");
  if (c.spectrum_l_min < 0 || c.spectrum_l_max < c.spectrum_l_min || c.spectrum_l_max > 40)
    fail("spectrum.l_max", "need 0 <= l_min <= l_max <= 40");

  const json& v = tree.at("verify");
  if (v.at("seed").get<double>() < 0) fail("verify.seed", "must be non-negative");
  c.seed = v.at("seed").get<std::uint64_t>();
  c.verify_samples = v.at("samples").get<int>();
  if (c.verify_samples < 1 || c.verify_samples > 1000) fail("verify.samples", "must be in 1..1000");

  c.star_hbar_scale = tree.at("fault_injection").at("star_hbar_scale").get<double>();
  if (!(c.star_hbar_scale > 0.0)) fail("fault_injection.star_hbar_scale", "must be positive");
  return c;
}

}  // namespace

std::vector<double> RunConfig::time_grid() const {
  std::vector<double> grid(static_cast<std::size_t>(samples));
  if (samples == 1) {
    grid[0] = 0.0;
    return grid;
  }
  for (int k = 0; k < samples; ++k) grid[k] = t_max * k / (samples - 1);
  grid.back() = t_max;
  return grid;
}

RunConfig load_config(const std::string& text, const std::vector<std::string>& overrides) {
  json user = json::object();
  if (!text.empty()) {
    try {
      user = json::parse(text, nullptr, true, true);  // comments allowed
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config parse error: ") + e.what());
    }
  }
  for (const auto& o : overrides) apply_override(user, o);
  json tree = default_config_tree();
  merge_checked(default_config_tree(), user, tree, "");
  return interpret(tree);
}

RunConfig load_config_file(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_config(ss.str(), overrides);
}

}  // namespace dqlin::cli
