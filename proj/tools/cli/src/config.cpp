#include "config.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "ldspec/error.hpp"

namespace ldspec::cli {

namespace {

constexpr std::array<std::pair<Task, const char*>, 6> task_names{{{Task::bands, "bands"},
                                                                   {Task::eigs, "eigs"},
                                                                   {Task::bs, "bs"},
                                                                   {Task::susy, "susy"},
                                                                   {Task::miura, "miura"},
                                                                   {Task::validate, "validate"}}};

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    const auto pos = what.find(": ", what.find("parse error"));
    if (pos != std::string::npos) what = what.substr(pos + 2);
    throw ConfigError("syntax error at line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                      what);
  }
}

double read_theta(const json& j, const std::string& path) {
  const double t = read_number(j, path);
  if (!(t >= 0.0 && t < 2.0 * std::numbers::pi)) throw ConfigError(path, "must lie in [0, 2 pi), got " + j.dump());
  return t;
}

std::size_t read_count(const json& j, const std::string& path, double lo, double hi) {
  const double v = read_number(j, path);
  if (v != std::floor(v) || v < lo || v > hi)
    throw ConfigError(path, "must be an integer in [" + json(lo).dump() + ", " + json(hi).dump() + "]");
  return static_cast<std::size_t>(v);
}

void read_model(const json& j, RunConfig& cfg) {
  expect_keys(j, "model", {"preset", "params", "inline"});
  if (j.contains("inline") == j.contains("preset"))
    throw ConfigError("model", "give exactly one of 'preset' and 'inline'");
  if (j.contains("inline")) {
    if (j.contains("params")) throw ConfigError("model.params", "only valid with a preset");
    cfg.model = inline_model_from_json(j["inline"], "model.inline");
    cfg.model_echo = {{"name", "inline"}};
  } else {
    if (!j["preset"].is_string()) throw ConfigError("model.preset", "expected a string");
    ModelSpec spec{j["preset"].get<std::string>(), {}};
    if (j.contains("params")) {
      const json& p = j["params"];
      if (!p.is_object()) throw ConfigError("model.params", "expected an object");
      for (const auto& [key, value] : p.items()) spec.params[key] = read_number(value, "model.params." + key);
    }
    try {
      cfg.model = build_model(spec);
    } catch (const Error& e) {
      throw ConfigError("model", e.what());
    }
    cfg.model_echo = {{"name", spec.preset}, {"params", spec.params}};
  }
  cfg.model_echo["coefficients"] = model_coefficients(cfg.model);
}

}  // namespace

const char* task_name(Task t) {
  for (const auto& [task, name] : task_names)
    if (task == t) return name;
  return "?";
}

std::optional<Task> task_from_name(std::string_view name) {
  for (const auto& [task, n] : task_names)
    if (name == n) return task;
  return std::nullopt;
}

RunConfig parse_config(std::string_view text, std::optional<Task> verb, const Overrides& overrides) {
  json j = parse_json(text);
  expect_keys(j, "",
              {"schema_version", "task", "model", "theta", "thetas", "z_range", "modes", "tol", "n_scan",
               "reference_point", "limit", "partner", "kernel_threshold", "output"});

  if (overrides.theta) {
    j.erase("thetas");
    j["theta"] = *overrides.theta;
  }
  if (overrides.zmin || overrides.zmax) {
    json& zr = j["z_range"];
    if (!zr.is_array() || zr.size() != 2) zr = json::array({nullptr, nullptr});
    if (overrides.zmin) zr[0] = *overrides.zmin;
    if (overrides.zmax) zr[1] = *overrides.zmax;
    if (zr[0].is_null() || zr[1].is_null()) throw ConfigError("z_range", "--zmin and --zmax need both ends");
  }
  if (overrides.modes) j["modes"] = *overrides.modes;
  if (overrides.tol) j["tol"] = *overrides.tol;

  if (!j.contains("schema_version")) throw ConfigError("schema_version", "required");
  if (read_number(j["schema_version"], "schema_version") != schema_version)
    throw ConfigError("schema_version", "unsupported version " + j["schema_version"].dump() + " (expected " +
                                            std::to_string(schema_version) + ")");

  RunConfig cfg;
  if (j.contains("task")) {
    if (!j["task"].is_string()) throw ConfigError("task", "expected a string");
    const auto t = task_from_name(j["task"].get<std::string>());
    if (!t) throw ConfigError("task", "unknown task " + j["task"].dump());
    if (verb && *verb != *t)
      throw ConfigError("task", std::string("config asks for '") + task_name(*t) + "' but the command is '" +
                                    task_name(*verb) + "'");
    cfg.task = *t;
  } else if (verb) {
    cfg.task = *verb;
  } else {
    throw ConfigError("task", "required when no command is given");
  }

  if (!j.contains("model")) throw ConfigError("model", "required");
  read_model(j["model"], cfg);

  if (j.contains("theta") && j.contains("thetas")) throw ConfigError("thetas", "give either 'theta' or 'thetas'");
  if (j.contains("theta")) cfg.thetas = {read_theta(j["theta"], "theta")};
  if (j.contains("thetas")) {
    const json& t = j["thetas"];
    if (!t.is_array() || t.empty()) throw ConfigError("thetas", "expected a nonempty array");
    cfg.thetas.clear();
    for (std::size_t i = 0; i < t.size(); ++i) cfg.thetas.push_back(read_theta(t[i], "thetas[" + std::to_string(i) + "]"));
  }

  if (j.contains("z_range")) {
    const auto z = read_numbers(j["z_range"], "z_range");
    if (z.size() != 2 || !(z[0] < z[1])) throw ConfigError("z_range", "expected [zmin, zmax] with zmin < zmax");
    cfg.z_range = Interval{z[0], z[1]};
  } else if (cfg.task == Task::bands || cfg.task == Task::eigs || cfg.task == Task::validate) {
    throw ConfigError("z_range", std::string("required for task '") + task_name(cfg.task) + "'");
  }

  if (j.contains("modes")) cfg.modes = static_cast<int>(read_count(j["modes"], "modes", 1, 4096));
  if (j.contains("tol")) {
    cfg.tol = read_number(j["tol"], "tol");
    if (!(cfg.tol >= 1e-14 && cfg.tol <= 1e-3)) throw ConfigError("tol", "must lie in [1e-14, 1e-3]");
  }
  if (j.contains("n_scan")) {
    cfg.n_scan = read_count(j["n_scan"], "n_scan", 0, 1e7);
    if (cfg.n_scan == 1) throw ConfigError("n_scan", "must be 0 (automatic) or at least 2");
  }
  if (j.contains("reference_point")) cfg.reference_point = read_number(j["reference_point"], "reference_point");
  if (j.contains("limit")) cfg.limit = read_count(j["limit"], "limit", 0, 1e6);
  if (j.contains("partner")) {
    const json& p = j["partner"];
    if (p == "first")
      cfg.partner = Partner::first;
    else if (p == "second")
      cfg.partner = Partner::second;
    else
      throw ConfigError("partner", "expected \"first\" or \"second\"");
  }
  if (j.contains("kernel_threshold")) {
    cfg.kernel_threshold = read_number(j["kernel_threshold"], "kernel_threshold");
    if (!(cfg.kernel_threshold > 0.0)) throw ConfigError("kernel_threshold", "must be positive");
  }
  if (j.contains("output")) {
    if (!j["output"].is_string()) throw ConfigError("output", "expected a path string");
    cfg.output = j["output"].get<std::string>();
  }

  if ((cfg.task == Task::susy || cfg.task == Task::miura) && !cfg.model.phi)
    throw ConfigError("model", std::string("task '") + task_name(cfg.task) +
                                   "' needs a Miura field (preset miura_step or model.inline.miura)");
  return cfg;
}

}  // namespace ldspec::cli
