#pragma once

// Coefficients of the periodic pencil -psi'' + q psi = z r psi:
// distributional potentials q = q1 + q2', signed-measure weights and
// Miura fields, all exact piecewise polynomials on one period.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ldspec/piecewise.hpp"

namespace ldspec {

struct Atom {
  double x = 0.0;  // position in [0, period)
  double w = 0.0;  // mass, nonzero

  friend bool operator==(const Atom&, const Atom&) = default;
};

// q = q1 + q2' with a constant q1 and a periodic primitive q2. A jump of q2
// at a breakpoint is an atom of q of the same weight. The free constant in
// q2 is fixed by requiring mean zero over one period.
class PeriodicPotential {
 public:
  PeriodicPotential(double q1, PiecewisePoly q2);
  static PeriodicPotential constant(double period, double q1);

  double period() const { return q2_.period(); }
  double q1() const { return q1_; }
  const PiecewisePoly& q2() const { return q2_; }

  // Jumps of q2 larger than `threshold` (default: 1e-9 relative to the size
  // of q2, which ignores joints of fitted pieces).
  std::vector<Atom> atoms(std::optional<double> threshold = {}) const;
  bool has_atoms(std::optional<double> threshold = {}) const { return !atoms(threshold).empty(); }
  // q1 + q2' on the smooth pieces (atoms dropped).
  PiecewisePoly regular_density() const;

  friend bool operator==(const PeriodicPotential&, const PeriodicPotential&) = default;

 private:
  double q1_;
  PiecewisePoly q2_;
};

// mu = rho dx + sum_k w_k delta_{x_k} on one period.
class SignedWeight {
 public:
  SignedWeight(PiecewisePoly density, std::vector<Atom> atoms = {});
  static SignedWeight constant(double period, double value);

  double period() const { return density_.period(); }
  const PiecewisePoly& density() const { return density_; }
  const std::vector<Atom>& atoms() const { return atoms_; }

  double total_mass() const;
  double total_variation() const;
  double atom_mass() const;

  // Mean-zero pure-jump primitive of the atoms (a sawtooth: jumps w_k at
  // x_k, slope -atom_mass/period) and the compensated density
  // rho + atom_mass/period, so that mu = regular_part dx + atom_primitive'.
  PiecewisePoly atom_primitive() const;
  PiecewisePoly regular_part() const;

  friend bool operator==(const SignedWeight&, const SignedWeight&) = default;

 private:
  PiecewisePoly density_;
  std::vector<Atom> atoms_;
};

class MiuraField {
 public:
  explicit MiuraField(PiecewisePoly phi) : phi_(std::move(phi)) {}
  double period() const { return phi_.period(); }
  const PiecewisePoly& phi() const { return phi_; }
  double mean() const { return phi_.mean(); }

  friend bool operator==(const MiuraField&, const MiuraField&) = default;

 private:
  PiecewisePoly phi_;
};

enum class Partner {
  first,   // phi^2 - phi'
  second,  // phi^2 + phi'
};

PeriodicPotential miura_forward(const MiuraField& phi, Partner sign);

struct JordanParts {
  SignedWeight positive;
  SignedWeight negative;
};

JordanParts jordan_decompose(const SignedWeight& w);

// sup over a of the integral of |f|^p over [a, a + window], p in {1, 2}.
double loc_unif_seminorm(const PiecewisePoly& f, int p, double window);

// Exact (min, max) over a in [0, period) of the integral of g over
// [a, a + window].
std::pair<double, double> window_integral_range(const PiecewisePoly& g, double window);

// inf over x of the integral of q over [x, x + window]; q must not carry atoms.
double yafaev_infimum(const PeriodicPotential& q, double window);
bool yafaev_check(const PeriodicPotential& q, double window, double c0);

// Named preset with numeric parameters, e.g. {"kronig_penney", {{"alpha", 1}}}.
struct ModelSpec {
  std::string preset;
  std::map<std::string, double> params;
};

struct Model {
  std::string name;
  PeriodicPotential q;
  SignedWeight r;
  std::optional<MiuraField> phi;  // set when q was produced by a Miura map
};

// Presets: constant{q1, r1, omega}, kronig_penney{alpha, omega, x0, r1},
// step_weight{omega, q1}, ch_peakon{omega, amplitude, q1},
// miura_step{alpha, x0, omega}.
Model build_model(const ModelSpec& spec);

// Field equal to +alpha/2 on [0, x0) and -alpha/2 on [x0, period); its
// first Miura partner is the point interaction alpha delta_{x0} + alpha^2/4
// together with the compensating atom -alpha delta_0.
MiuraField step_miura_field(double alpha, double x0, double period);

}  // namespace ldspec
