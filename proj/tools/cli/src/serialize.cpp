#include "serialize.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ldspec/error.hpp"
#include "ldspec/fit.hpp"

namespace ldspec::cli {

json to_json(const PiecewisePoly& f) {
  json pieces = json::array();
  for (const auto& p : f.pieces()) pieces.push_back(std::vector<double>(p.begin(), p.end()));
  return {{"breaks", f.breaks()}, {"pieces", pieces}};
}

json to_json(const Atom& a) { return {{"x", a.x}, {"w", a.w}}; }

json to_json(const PeriodicPotential& q) { return {{"q1", q.q1()}, {"q2", to_json(q.q2())}}; }

json to_json(const SignedWeight& r) {
  json atoms = json::array();
  for (const auto& a : r.atoms()) atoms.push_back(to_json(a));
  return {{"density", to_json(r.density())}, {"atoms", atoms}};
}

json to_json(const MiuraField& phi) { return {{"phi", to_json(phi.phi())}}; }

json model_coefficients(const Model& m) {
  json out{{"period", m.q.period()}, {"potential", to_json(m.q)}, {"weight", to_json(m.r)}};
  if (m.phi) out["miura"] = to_json(*m.phi);
  return out;
}

void expect_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      std::string list;
      for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
      throw ConfigError(path.empty() ? key : path + "." + key, "unknown field (allowed: " + list + ")");
    }
  }
}

double read_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
  return v;
}

std::vector<double> read_numbers(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

namespace {

PiecewisePoly fourier_fit(const json& j, double period, const std::string& path) {
  expect_keys(j, path, {"fourier", "fit_tol"});
  const std::string fpath = path + ".fourier";
  expect_keys(j.at("fourier"), fpath, {"cos", "sin"});
  const json& f = j.at("fourier");
  const auto a = f.contains("cos") ? read_numbers(f["cos"], fpath + ".cos") : std::vector<double>{};
  const auto b = f.contains("sin") ? read_numbers(f["sin"], fpath + ".sin") : std::vector<double>{};
  double scale = 0.0;
  for (double c : a) scale += std::abs(c);
  for (double c : b) scale += std::abs(c);
  FitOptions opts;
  opts.tol = 1e-12 * (1.0 + scale);
  if (j.contains("fit_tol")) {
    opts.tol = read_number(j["fit_tol"], path + ".fit_tol");
    if (!(opts.tol > 0.0)) throw ConfigError(path + ".fit_tol", "must be positive");
  }
  // cos[k] and sin[k] multiply cos(2 pi k x / period) and sin(2 pi k x / period).
  const double w = 2.0 * M_PI / period;
  auto f_eval = [&](double x) {
    double v = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) v += a[k] * std::cos(w * static_cast<double>(k) * x);
    for (std::size_t k = 1; k < b.size(); ++k) v += b[k] * std::sin(w * static_cast<double>(k) * x);
    return v;
  };
  try {
    return fit_periodic(f_eval, period, opts);
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace

PiecewisePoly piecewise_from_json(const json& j, double period, const std::string& path) {
  if (j.is_number()) return PiecewisePoly::constant(period, read_number(j, path));
  if (!j.is_object()) throw ConfigError(path, "expected a number or a piecewise object");
  if (j.contains("fourier")) return fourier_fit(j, period, path);
  expect_keys(j, path, {"breaks", "pieces"});
  if (!j.contains("breaks") || !j.contains("pieces")) throw ConfigError(path, "needs 'breaks' and 'pieces'");
  auto breaks = read_numbers(j["breaks"], path + ".breaks");
  const json& pj = j["pieces"];
  if (!pj.is_array()) throw ConfigError(path + ".pieces", "expected an array of coefficient arrays");
  std::vector<poly::Poly> pieces;
  for (std::size_t k = 0; k < pj.size(); ++k) {
    const auto c = read_numbers(pj[k], path + ".pieces[" + std::to_string(k) + "]");
    pieces.emplace_back(c.begin(), c.end());
  }
  try {
    return PiecewisePoly(period, std::move(breaks), std::move(pieces));
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

Atom atom_from_json(const json& j, const std::string& path) {
  expect_keys(j, path, {"x", "w"});
  if (!j.contains("x") || !j.contains("w")) throw ConfigError(path, "an atom needs 'x' and 'w'");
  const Atom a{read_number(j["x"], path + ".x"), read_number(j["w"], path + ".w")};
  if (a.w == 0.0) throw ConfigError(path + ".w", "atom weights must be nonzero");
  return a;
}

Model inline_model_from_json(const json& j, const std::string& path) {
  expect_keys(j, path, {"period", "potential", "weight", "miura"});
  if (!j.contains("period")) throw ConfigError(path + ".period", "required");
  const double period = read_number(j["period"], path + ".period");
  if (!(period > 0.0)) throw ConfigError(path + ".period", "must be positive");

  std::optional<MiuraField> phi;
  if (j.contains("miura")) {
    const std::string mp = path + ".miura";
    expect_keys(j["miura"], mp, {"phi"});
    if (!j["miura"].contains("phi")) throw ConfigError(mp + ".phi", "required");
    phi = MiuraField(piecewise_from_json(j["miura"]["phi"], period, mp + ".phi"));
  }

  std::optional<PeriodicPotential> q;
  if (j.contains("potential")) {
    const std::string qp = path + ".potential";
    const json& qj = j["potential"];
    expect_keys(qj, qp, {"q1", "q2"});
    const double q1 = qj.contains("q1") ? read_number(qj["q1"], qp + ".q1") : 0.0;
    PiecewisePoly q2 =
        qj.contains("q2") ? piecewise_from_json(qj["q2"], period, qp + ".q2") : PiecewisePoly::constant(period, 0.0);
    q.emplace(q1, std::move(q2));
  } else if (phi) {
    q = miura_forward(*phi, Partner::first);
  } else {
    throw ConfigError(path + ".potential", "required unless a Miura field is given");
  }

  PiecewisePoly density = PiecewisePoly::constant(period, 1.0);
  std::vector<Atom> atoms;
  if (j.contains("weight")) {
    const std::string wp = path + ".weight";
    const json& wj = j["weight"];
    expect_keys(wj, wp, {"density", "atoms"});
    density = wj.contains("density") ? piecewise_from_json(wj["density"], period, wp + ".density")
                                     : PiecewisePoly::constant(period, 0.0);
    if (wj.contains("atoms")) {
      if (!wj["atoms"].is_array()) throw ConfigError(wp + ".atoms", "expected an array");
      for (std::size_t i = 0; i < wj["atoms"].size(); ++i)
        atoms.push_back(atom_from_json(wj["atoms"][i], wp + ".atoms[" + std::to_string(i) + "]"));
    }
  }
  try {
    return {"inline", std::move(*q), SignedWeight(std::move(density), std::move(atoms)), std::move(phi)};
  } catch (const Error& e) {
    throw ConfigError(path + ".weight", e.what());
  }
}

}  // namespace ldspec::cli
