#pragma once

// JSON forms of coefficient descriptions. Piecewise polynomials are written
// as {"breaks": [...], "pieces": [[c0, c1, ...], ...]} in local coordinates;
// doubles are printed in shortest round-trip form, so a written description
// parses back to an identical object.

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "ldspec/coefficients.hpp"

namespace ldspec::cli {

using json = nlohmann::json;

// Schema or range violation at a field path such as "model.inline.period".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error("config: field '" + field + "': " + what), field_(std::move(field)) {}
  explicit ConfigError(const std::string& what) : std::runtime_error("config: " + what) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

json to_json(const PiecewisePoly& f);
json to_json(const Atom& a);
json to_json(const PeriodicPotential& q);
json to_json(const SignedWeight& r);
json to_json(const MiuraField& phi);
// {"period", "potential", "weight"[, "miura"]}; valid as an inline model.
json model_coefficients(const Model& m);

// Strict readers: unknown keys, wrong types and non-finite numbers throw
// ConfigError naming `path`.
void expect_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed);
double read_number(const json& j, const std::string& path);
std::vector<double> read_numbers(const json& j, const std::string& path);

// A number (constant), a {"breaks", "pieces"} object, or
// {"fourier": {"cos": [...], "sin": [...]}, "fit_tol": t} fitted to pieces.
PiecewisePoly piecewise_from_json(const json& j, double period, const std::string& path);
Atom atom_from_json(const json& j, const std::string& path);
Model inline_model_from_json(const json& j, const std::string& path);

}  // namespace ldspec::cli
