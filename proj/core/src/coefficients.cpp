#include "ldspec/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "ldspec/error.hpp"
#include "ldspec/fit.hpp"

namespace ldspec {

// PeriodicPotential

PeriodicPotential::PeriodicPotential(double q1, PiecewisePoly q2) : q1_(q1), q2_(std::move(q2)) {
  if (!std::isfinite(q1_)) throw CoefficientError("q1 must be finite");
}

PeriodicPotential PeriodicPotential::constant(double period, double q1) {
  return PeriodicPotential(q1, PiecewisePoly::constant(period, 0.0));
}

std::vector<Atom> PeriodicPotential::atoms(std::optional<double> threshold) const {
  const double thr = threshold.value_or(1e-9 * (1.0 + q2_.max_abs()));
  std::vector<Atom> out;
  for (std::size_t k = 0; k < q2_.size(); ++k) {
    const double j = q2_.jump(k);
    if (std::abs(j) > thr) out.push_back({q2_.piece_start(k), j});
  }
  return out;
}

PiecewisePoly PeriodicPotential::regular_density() const { return q2_.derivative() + q1_; }

// SignedWeight

SignedWeight::SignedWeight(PiecewisePoly density, std::vector<Atom> atoms)
    : density_(std::move(density)), atoms_(std::move(atoms)) {
  const double period = density_.period();
  for (auto& a : atoms_) {
    if (!std::isfinite(a.x) || !std::isfinite(a.w)) throw CoefficientError("atom entries must be finite");
    if (a.w == 0.0) throw CoefficientError("atom weights must be nonzero");
    a.x -= std::floor(a.x / period) * period;
    if (a.x >= period - 1e-14 * period) a.x = 0.0;
  }
  std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
  for (std::size_t k = 1; k < atoms_.size(); ++k)
    if (atoms_[k].x - atoms_[k - 1].x <= 1e-14 * period)
      throw CoefficientError("atom positions must be distinct modulo the period");
}

SignedWeight SignedWeight::constant(double period, double value) {
  return SignedWeight(PiecewisePoly::constant(period, value));
}

double SignedWeight::atom_mass() const {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.w;
  return m;
}

double SignedWeight::total_mass() const { return density_.integral() + atom_mass(); }

double SignedWeight::total_variation() const {
  double v = density_.abs_pow(1).integral();
  for (const auto& a : atoms_) v += std::abs(a.w);
  return v;
}

PiecewisePoly SignedWeight::atom_primitive() const {
  const double period = density_.period();
  if (atoms_.empty()) return PiecewisePoly::constant(period, 0.0);
  const double slope = -atom_mass() / period;
  std::vector<double> breaks{0.0};
  for (const auto& a : atoms_)
    if (a.x > 0.0) breaks.push_back(a.x);
  // Value at x in piece k: (sum of w_j with x_j <= x) + slope x, before the
  // mean is removed.
  std::vector<poly::Poly> pieces;
  for (double b : breaks) {
    double steps = 0.0;
    for (const auto& a : atoms_)
      if (a.x <= b) steps += a.w;
    pieces.push_back({steps + slope * b, slope});
  }
  PiecewisePoly saw(period, std::move(breaks), std::move(pieces));
  saw += -saw.mean();
  return saw;
}

PiecewisePoly SignedWeight::regular_part() const { return density_ + atom_mass() / density_.period(); }

// Miura map

MiuraField step_miura_field(double alpha, double x0, double period) {
  x0 -= std::floor(x0 / period) * period;
  if (x0 <= 0.0) throw CoefficientError("step position must lie strictly inside the cell");
  return MiuraField(PiecewisePoly(period, {0.0, x0}, {{0.5 * alpha}, {-0.5 * alpha}}));
}

PeriodicPotential miura_forward(const MiuraField& field, Partner sign) {
  const PiecewisePoly& phi = field.phi();
  const PiecewisePoly square = phi * phi;
  const double q1 = square.mean();
  // q2 = -/+ phi + primitive(phi^2 - q1); the primitive is periodic because
  // its integrand has mean zero.
  PiecewisePoly smooth = (square + (-q1)).primitive();
  PiecewisePoly q2 = (sign == Partner::first ? -phi : phi) + smooth;
  q2 += -q2.mean();
  return PeriodicPotential(q1, q2);
}

// Jordan decomposition

JordanParts jordan_decompose(const SignedWeight& w) {
  std::vector<Atom> pos, neg;
  for (const auto& a : w.atoms()) (a.w > 0.0 ? pos : neg).push_back({a.x, std::abs(a.w)});
  return {SignedWeight(w.density().positive_part(), std::move(pos)),
          SignedWeight(w.density().negative_part(), std::move(neg))};
}

// Window integrals

std::pair<double, double> window_integral_range(const PiecewisePoly& g, double window) {
  if (!(window > 0.0)) throw CoefficientError("window length must be positive");
  // F(a) = int_a^{a+L} g has F'(a) = g(a + L) - g(a). Between consecutive
  // breakpoints of both g and g(. + L) this is a polynomial, so the extrema
  // lie on the breakpoints or on its roots.
  const PiecewisePoly ahead = g.shifted(-window);
  const auto knots = merged_breaks(g, ahead);
  const PiecewisePoly gr = g.refined(knots);
  const PiecewisePoly ar = ahead.refined(knots);
  std::vector<double> candidates(gr.breaks().begin(), gr.breaks().end());
  for (std::size_t k = 0; k < gr.size(); ++k)
    for (double t : poly::roots_in(poly::sub(ar.piece(k), gr.piece(k)), 0.0, gr.piece_length(k)))
      candidates.push_back(gr.piece_start(k) + t);
  double lo = INFINITY, hi = -INFINITY;
  for (double a : candidates) {
    const double v = g.integral(a, a + window);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

double loc_unif_seminorm(const PiecewisePoly& f, int p, double window) {
  if (p != 1 && p != 2) throw CoefficientError("loc-unif seminorm supports p = 1 or 2");
  return window_integral_range(f.abs_pow(p), window).second;
}

double yafaev_infimum(const PeriodicPotential& q, double window) {
  if (q.has_atoms())
    throw CoefficientError("window criterion needs a locally integrable potential (q has atoms)");
  return window_integral_range(q.regular_density(), window).first;
}

bool yafaev_check(const PeriodicPotential& q, double window, double c0) { return yafaev_infimum(q, window) >= c0; }

// Presets

namespace {

class Params {
 public:
  Params(const ModelSpec& spec, std::set<std::string> allowed) : spec_(spec) {
    for (const auto& [k, v] : spec.params) {
      if (!allowed.count(k)) throw CoefficientError("preset " + spec.preset + ": unknown parameter '" + k + "'");
      if (!std::isfinite(v)) throw CoefficientError("preset " + spec.preset + ": parameter '" + k + "' not finite");
    }
  }
  double get(const std::string& key, std::optional<double> fallback = {}) const {
    auto it = spec_.params.find(key);
    if (it != spec_.params.end()) return it->second;
    if (!fallback) throw CoefficientError("preset " + spec_.preset + ": missing parameter '" + key + "'");
    return *fallback;
  }
  double period() const {
    const double omega = get("omega", 2.0 * std::numbers::pi);
    if (!(omega > 0.0)) throw CoefficientError("preset " + spec_.preset + ": omega must be positive");
    return omega;
  }

 private:
  const ModelSpec& spec_;
};

}  // namespace

Model build_model(const ModelSpec& spec) {
  const std::string& name = spec.preset;
  if (name == "constant") {
    Params p(spec, {"q1", "r1", "omega"});
    const double omega = p.period();
    const double r1 = p.get("r1", 1.0);
    if (r1 == 0.0) throw CoefficientError("preset constant: r1 must be nonzero");
    return {name, PeriodicPotential::constant(omega, p.get("q1", 1.0)), SignedWeight::constant(omega, r1), {}};
  }
  if (name == "kronig_penney") {
    Params p(spec, {"alpha", "omega", "x0", "r1"});
    const double omega = p.period();
    const double alpha = p.get("alpha");
    const double r1 = p.get("r1", 1.0);
    if (r1 == 0.0) throw CoefficientError("preset kronig_penney: r1 must be nonzero");
    // Atom alpha at x0: mean alpha/omega in q1, sawtooth primitive in q2.
    SignedWeight atom(PiecewisePoly::constant(omega, 0.0), {{p.get("x0", 0.0), alpha}});
    PiecewisePoly q2 = atom.atom_primitive();
    return {name, PeriodicPotential(alpha / omega, std::move(q2)), SignedWeight::constant(omega, r1), {}};
  }
  if (name == "step_weight") {
    Params p(spec, {"omega", "q1"});
    const double omega = p.period();
    PiecewisePoly rho(omega, {0.0, 0.5 * omega}, {{1.0}, {-1.0}});
    return {name, PeriodicPotential::constant(omega, p.get("q1", 1.0)), SignedWeight(std::move(rho)), {}};
  }
  if (name == "ch_peakon") {
    Params p(spec, {"omega", "amplitude", "q1"});
    const double omega = p.period();
    const double amp = p.get("amplitude", 1.0);
    // Periodized exp(-|x|): u = amp cosh(x - omega/2) / sinh(omega/2), smooth
    // on the open cell with a corner at 0. There u'' = u, so
    // u'' - 4u = -3u + (jump of u') delta_0 and the jump is -2 amp.
    const double s = std::sinh(0.5 * omega);
    auto density = [=](double x) { return -3.0 * amp * std::cosh(x - 0.5 * omega) / s; };
    FitOptions fit;
    fit.tol = 1e-13 * (1.0 + std::abs(amp) * std::cosh(0.5 * omega) / s);
    PiecewisePoly rho = fit_periodic(density, omega, fit);
    std::vector<Atom> atoms;
    if (amp != 0.0) atoms.push_back({0.0, -2.0 * amp});
    return {name, PeriodicPotential::constant(omega, p.get("q1", 1.0)), SignedWeight(std::move(rho), std::move(atoms)),
            {}};
  }
  if (name == "miura_step") {
    Params p(spec, {"alpha", "x0", "omega"});
    const double omega = p.period();
    MiuraField phi = step_miura_field(p.get("alpha"), p.get("x0", 0.5 * omega), omega);
    PeriodicPotential q = miura_forward(phi, Partner::first);
    return {name, std::move(q), SignedWeight::constant(omega, 1.0), std::move(phi)};
  }
  throw CoefficientError("unknown preset '" + name + "'");
}

}  // namespace ldspec
