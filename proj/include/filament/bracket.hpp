#pragma once

#include "filament/constants.hpp"
#include "filament/spin_field.hpp"

#include <functional>
#include <optional>
#include <string>

namespace filament {

// A scalar function of the raw samples, optionally with its exact gradient
// dF/dj_i (which is h times the functional derivative at xi_i).
struct DiscreteFunctional {
  std::string name;
  std::function<double(const Samples &)> evaluate;
  std::function<Samples(const Samples &)> gradient; // empty: use finite differences

  bool has_analytic_gradient() const { return static_cast<bool>(gradient); }
  double operator()(const Samples &j) const { return evaluate(j); }
};

inline constexpr double kDefaultFdStep = 1e-6;

// Central differences per sample and component, no constraint enforcement.
Samples functional_gradient_fd(const DiscreteFunctional &F, const Samples &j,
                               double step = kDefaultFdStep);

// Analytic gradient when available, finite differences otherwise.
Samples gradient_of(const DiscreteFunctional &F, const Samples &j,
                    double fd_step = kDefaultFdStep);

// {F, G} = (beta / h) sum_i j_i . (dF/dj_i x dG/dj_i)
double poisson_bracket(const DiscreteFunctional &F, const DiscreteFunctional &G,
                       const SpinField &field, double beta,
                       double fd_step = kDefaultFdStep);
double poisson_bracket(const DiscreteFunctional &F, const DiscreteFunctional &G,
                       const SpinField &field, const ModelConstants &constants);

// Same contraction on precomputed gradients.
double bracket_from_gradients(const Samples &grad_f, const Samples &grad_g,
                              const Samples &j, double beta);

namespace functionals {

DiscreteFunctional constant(double value);
// Phi_a, a in {1, 2, 3}
DiscreteFunctional phi(int a);
// j_a at sample i, a in {1, 2, 3}
DiscreteFunctional coordinate(Eigen::Index i, int a);
// |j_i|^2
DiscreteFunctional unit_norm_at(Eigen::Index i);
// E0 * spin_energy, the field part of H0
DiscreteFunctional spin_hamiltonian(const ModelConstants &constants);
// |p|^2 / 2 m0 + E0 * spin_energy at fixed p
DiscreteFunctional hamiltonian(const Vec3 &p, const ModelConstants &constants);
// k-th component of f, k in {1, 2, 3}; no analytic gradient
DiscreteFunctional f_component(int k);
// (p.f)^2 - p^2 f^2 at fixed p; no analytic gradient
DiscreteFunctional phi0(const Vec3 &p);
DiscreteFunctional product(const DiscreteFunctional &F, const DiscreteFunctional &G);

} // namespace functionals

struct CheckEntry {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass() const { return value <= tolerance; }
};

struct AlgebraReport {
  CheckEntry su2_closure;    // max |{Phi_a, Phi_b} - beta eps_abc Phi_c|
  CheckEntry phi_with_phi0;  // max_a |{Phi_a, Phi0}|
  CheckEntry energy_with_constraints; // max_k |{H0 spin, Phi_k}|, k = 0..3
  double scale = 1.0;
  double beta_used = 0.0;
  bool pass() const {
    return su2_closure.pass() && phi_with_phi0.pass() && energy_with_constraints.pass();
  }
};

// First-class constraint algebra. Entries involving Phi0 only vanish at
// admissible data (Phi = 0, p parallel to f).
AlgebraReport check_first_class(const SpinField &field, const Vec3 &p,
                                const ModelConstants &constants,
                                std::optional<double> beta_override = std::nullopt,
                                double fd_step = kDefaultFdStep);

struct FlowReport {
  double kappa = 0.0;        // least-squares fit t0 V ~ kappa W
  double fit_residual = 0.0; // |t0 V - kappa W| / |t0 V|
  double beta_used = 0.0;
};

// Bracket-generated velocity V_i = {H0, j_i} against W = j x j''.
// Throws InapplicableOracle for stationary fields, InvalidArgument for
// off-surface fields unless allow_off_surface.
FlowReport check_hamiltonian_flow(const SpinField &field,
                                  const ModelConstants &constants,
                                  std::optional<double> beta_override = std::nullopt,
                                  bool allow_off_surface = false);

// V_i = {H0, j_i} for all samples, from the given H0 gradient.
Samples bracket_velocity(const Samples &grad_h, const Samples &j, double beta);

} // namespace filament
