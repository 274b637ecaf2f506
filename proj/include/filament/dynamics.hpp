#pragma once

#include "filament/constants.hpp"
#include "filament/invariants.hpp"
#include "filament/spin_field.hpp"

#include <stdexcept>
#include <vector>

namespace filament {

// j x j'' with the spectral second derivative.
Samples rhs_spin(const Samples &j);
Samples rhs_spin(const SpinField &field);

// Classical RK4 followed by per-sample renormalization.
SpinField step_rk4_projected(const SpinField &field, double dtau);

// j+ = j + dtau * rhs((j + j+) / 2), solved by fixed-point iteration. Keeps
// |j_i| fixed without renormalization. A negative dtau steps backward.
SpinField step_implicit_midpoint(const SpinField &field, double dtau,
                                 double tol = 1e-14, int max_iter = 100);

enum class Integrator { ImplicitMidpoint, Rk4Projected };

// Unit-norm drift every stored state must respect.
double unit_norm_budget(Integrator integrator);

// 0.1 h^2: the midpoint fixed-point iteration then contracts by about
// pi^2 / 20 per sweep on the stiffest mode.
double default_dtau(Eigen::Index n);

struct Trajectory {
  std::vector<double> times;
  std::vector<SpinField> states;
  std::vector<InvariantReport> reports;
  Vec3 p = Vec3::Zero();
};

// Thrown by evolve; carries everything recorded before the failure.
class EvolutionAborted : public std::runtime_error {
public:
  EvolutionAborted(const std::string &what, Trajectory partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const Trajectory &partial() const { return partial_; }

private:
  Trajectory partial_;
};

struct EvolveOptions {
  Integrator integrator = Integrator::ImplicitMidpoint;
  int monitor_every = 0; // 0: max(1, n_steps / 100)
  double tol = 1e-14;
  int max_iter = 100;
  FieldTolerances field_tol{};
};

// Integrates the spin-chain flow. p is carried unchanged: the H0 flow with
// zero multipliers does not move it. Snapshots (with reports) are taken at
// step 0, every monitor_every steps, and at the final step.
Trajectory evolve(const SpinField &field, double dtau, int n_steps,
                  const ModelConstants &constants, const Vec3 &p,
                  const EvolveOptions &options = {});

struct LieResidual {
  Vec3 uniform_part;      // mean_i (A_i - B_i)
  double nonuniform_norm; // max_i |A_i - B_i - uniform_part|
};

// Compares dz/dtau obtained from the spin flow with the local induction
// velocity (1/R0) z' x z''; the two may differ by a uniform drift only.
LieResidual lie_residual(const SpinField &field, const ModelConstants &constants);

// Direct RK4 integration of dz/dtau = (1/R0) z' x z'' on curve samples.
Samples evolve_curve_lia(const Samples &points, double R0, double dtau, int n_steps);

} // namespace filament
