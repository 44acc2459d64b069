#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ldspec/floquet.hpp"
#include "serialize.hpp"

namespace ldspec::cli {

inline constexpr int schema_version = 1;

enum class Task { bands, eigs, bs, susy, miura, validate };

const char* task_name(Task t);
std::optional<Task> task_from_name(std::string_view name);

struct RunConfig {
  Task task = Task::bands;
  Model model{"constant", PeriodicPotential::constant(1.0, 1.0), SignedWeight::constant(1.0, 1.0), {}};
  json model_echo;                // name, preset parameters and serialized coefficients
  std::vector<double> thetas{0.0};
  std::optional<Interval> z_range;
  int modes = 64;
  double tol = 1e-10;
  std::size_t n_scan = 0;         // 0: density rule
  double reference_point = 0.0;
  std::size_t limit = 0;          // validate: compare this many eigenvalues of smallest |z| (0: all)
  Partner partner = Partner::first;
  double kernel_threshold = 1e-8;
  std::optional<std::string> output;
};

// Command line values that replace the corresponding config fields before
// validation, so range errors name the config field they land in.
struct Overrides {
  std::optional<double> theta;
  std::optional<double> zmin;
  std::optional<double> zmax;
  std::optional<int> modes;
  std::optional<double> tol;
};

// Parses and validates a config document. `verb` is the task named on the
// command line; a "task" field in the document must agree with it. Throws
// ConfigError with a line and column for syntax errors and a field path for
// schema and range violations.
RunConfig parse_config(std::string_view text, std::optional<Task> verb = {}, const Overrides& overrides = {});

}  // namespace ldspec::cli
