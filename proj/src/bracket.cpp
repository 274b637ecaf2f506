#include "filament/bracket.hpp"

#include "filament/dynamics.hpp"
#include "filament/error.hpp"
#include "filament/invariants.hpp"
#include "filament/parallel.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace filament {

Samples functional_gradient_fd(const DiscreteFunctional &F, const Samples &j,
                               double step) {
  if (!(step > 0.0))
    throw InvalidArgument("finite-difference step must be positive");
  const Eigen::Index n = j.rows();
  Samples grad(n, 3);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t b, std::size_t e) {
    Samples probe = j;
    for (auto i = static_cast<Eigen::Index>(b); i < static_cast<Eigen::Index>(e); ++i) {
      for (int c = 0; c < 3; ++c) {
        const double saved = probe(i, c);
        probe(i, c) = saved + step;
        const double up = F.evaluate(probe);
        probe(i, c) = saved - step;
        const double down = F.evaluate(probe);
        probe(i, c) = saved;
        grad(i, c) = (up - down) / (2.0 * step);
      }
    }
  });
  return grad;
}

Samples gradient_of(const DiscreteFunctional &F, const Samples &j, double fd_step) {
  return F.has_analytic_gradient() ? F.gradient(j) : functional_gradient_fd(F, j, fd_step);
}

double bracket_from_gradients(const Samples &grad_f, const Samples &grad_g,
                              const Samples &j, double beta) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < j.rows(); ++i) {
    const Vec3 a = grad_f.row(i).transpose();
    const Vec3 b = grad_g.row(i).transpose();
    total += Vec3(j.row(i).transpose()).dot(a.cross(b));
  }
  return beta / grid_step(j.rows()) * total;
}

double poisson_bracket(const DiscreteFunctional &F, const DiscreteFunctional &G,
                       const SpinField &field, double beta, double fd_step) {
  const Samples &j = field.samples();
  return bracket_from_gradients(gradient_of(F, j, fd_step), gradient_of(G, j, fd_step), j,
                                beta);
}

double poisson_bracket(const DiscreteFunctional &F, const DiscreteFunctional &G,
                       const SpinField &field, const ModelConstants &constants) {
  return poisson_bracket(F, G, field, constants.beta);
}

namespace functionals {

namespace {

int component_index(int a) {
  if (a < 1 || a > 3)
    throw InvalidArgument("component index must be 1, 2 or 3");
  return a - 1;
}

double spin_energy_of(const Samples &j) { return spin_energy(SpinField(j)); }

Samples spin_energy_gradient(const Samples &j) {
  return -grid_step(j.rows()) / std::numbers::pi * derivative(j, 2);
}

Vec3 f_of(const Samples &j) { return vector_f(SpinField(j)); }

} // namespace

DiscreteFunctional constant(double value) {
  return {"constant",
          [value](const Samples &) { return value; },
          [](const Samples &j) { return Samples(Samples::Zero(j.rows(), 3)); }};
}

DiscreteFunctional phi(int a) {
  const int c = component_index(a);
  return {"Phi" + std::to_string(a),
          [c](const Samples &j) { return grid_step(j.rows()) * j.col(c).sum(); },
          [c](const Samples &j) {
            Samples g = Samples::Zero(j.rows(), 3);
            g.col(c).setConstant(grid_step(j.rows()));
            return g;
          }};
}

DiscreteFunctional coordinate(Eigen::Index i, int a) {
  const int c = component_index(a);
  return {"j" + std::to_string(a) + "[" + std::to_string(i) + "]",
          [i, c](const Samples &j) { return j(i, c); },
          [i, c](const Samples &j) {
            Samples g = Samples::Zero(j.rows(), 3);
            g(i, c) = 1.0;
            return g;
          }};
}

DiscreteFunctional unit_norm_at(Eigen::Index i) {
  return {"|j[" + std::to_string(i) + "]|^2",
          [i](const Samples &j) { return j.row(i).squaredNorm(); },
          [i](const Samples &j) {
            Samples g = Samples::Zero(j.rows(), 3);
            g.row(i) = 2.0 * j.row(i);
            return g;
          }};
}

DiscreteFunctional spin_hamiltonian(const ModelConstants &constants) {
  const double E0 = constants.E0;
  return {"H0_spin",
          [E0](const Samples &j) { return E0 * spin_energy_of(j); },
          [E0](const Samples &j) { return Samples(E0 * spin_energy_gradient(j)); }};
}

DiscreteFunctional hamiltonian(const Vec3 &p, const ModelConstants &constants) {
  const double kinetic = p.squaredNorm() / (2.0 * constants.m0);
  const double E0 = constants.E0;
  return {"H0",
          [kinetic, E0](const Samples &j) { return kinetic + E0 * spin_energy_of(j); },
          [E0](const Samples &j) { return Samples(E0 * spin_energy_gradient(j)); }};
}

DiscreteFunctional f_component(int k) {
  const int c = component_index(k);
  return {"f" + std::to_string(k), [c](const Samples &j) { return f_of(j)[c]; }, {}};
}

DiscreteFunctional phi0(const Vec3 &p) {
  return {"Phi0", [p](const Samples &j) { return constraint_phi0(p, f_of(j)); }, {}};
}

DiscreteFunctional product(const DiscreteFunctional &F, const DiscreteFunctional &G) {
  DiscreteFunctional out;
  out.name = F.name + "*" + G.name;
  out.evaluate = [F, G](const Samples &j) { return F.evaluate(j) * G.evaluate(j); };
  if (F.has_analytic_gradient() && G.has_analytic_gradient())
    out.gradient = [F, G](const Samples &j) {
      return Samples(F.evaluate(j) * G.gradient(j) + G.evaluate(j) * F.gradient(j));
    };
  return out;
}

} // namespace functionals

namespace {

double levi_civita(int a, int b, int c) {
  return 0.5 * static_cast<double>((a - b) * (b - c) * (c - a));
}

} // namespace

AlgebraReport check_first_class(const SpinField &field, const Vec3 &p,
                                const ModelConstants &constants,
                                std::optional<double> beta_override, double fd_step) {
  const double beta = beta_override.value_or(constants.beta);
  const Samples &j = field.samples();

  std::vector<Samples> phi_grad;
  Vec3 phi_val;
  for (int a = 1; a <= 3; ++a) {
    const auto F = functionals::phi(a);
    phi_grad.push_back(F.gradient(j));
    phi_val[a - 1] = F.evaluate(j);
  }

  AlgebraReport report;
  report.beta_used = beta;
  const Vec3 f = vector_f(field);
  report.scale = std::abs(beta) * std::max(1.0, constants.E0) *
                 (1.0 + p.squaredNorm() * f.squaredNorm());

  double closure = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double expected = 0.0;
      for (int c = 0; c < 3; ++c)
        expected += beta * levi_civita(a, b, c) * phi_val[c];
      const double got = bracket_from_gradients(phi_grad[a], phi_grad[b], j, beta);
      closure = std::max(closure, std::abs(got - expected));
    }
  report.su2_closure = {"{Phi_a,Phi_b} - beta eps_abc Phi_c", closure,
                        1e-12 * std::abs(beta) * (1.0 + phi_val.norm())};

  const Samples phi0_grad = functional_gradient_fd(functionals::phi0(p), j, fd_step);
  double with_phi0 = 0.0;
  for (int a = 0; a < 3; ++a)
    with_phi0 = std::max(with_phi0,
                         std::abs(bracket_from_gradients(phi_grad[a], phi0_grad, j, beta)));
  report.phi_with_phi0 = {"{Phi_a,Phi0}", with_phi0, 1e-8 * report.scale};

  const Samples energy_grad = functionals::spin_hamiltonian(constants).gradient(j);
  double with_energy =
      std::abs(bracket_from_gradients(energy_grad, phi0_grad, j, beta));
  for (int a = 0; a < 3; ++a)
    with_energy = std::max(
        with_energy, std::abs(bracket_from_gradients(energy_grad, phi_grad[a], j, beta)));
  report.energy_with_constraints = {"{H0_spin,Phi_k}", with_energy, 1e-8 * report.scale};
  return report;
}

Samples bracket_velocity(const Samples &grad_h, const Samples &j, double beta) {
  // {H, j_a(i)} = (beta/h) j_i . (dH/dj_i x e_a) = (beta/h) (j_i x dH/dj_i)_a
  Samples v(j.rows(), 3);
  const double scale = beta / grid_step(j.rows());
  for (Eigen::Index i = 0; i < j.rows(); ++i) {
    const Vec3 ji = j.row(i).transpose();
    v.row(i) = scale * ji.cross(Vec3(grad_h.row(i).transpose())).transpose();
  }
  return v;
}

FlowReport check_hamiltonian_flow(const SpinField &field, const ModelConstants &constants,
                                  std::optional<double> beta_override,
                                  bool allow_off_surface) {
  if (!allow_off_surface && !on_constraint_surface(field))
    throw InvalidArgument("hamiltonian flow check needs a field on the constraint surface");
  const double beta = beta_override.value_or(constants.beta);
  const Samples &j = field.samples();

  const Samples w = rhs_spin(j);
  const double w_norm = w.norm();
  if (!(w_norm > 1e-12 * std::sqrt(static_cast<double>(j.rows()))))
    throw InapplicableOracle("stationary field: the flow ratio is undefined");

  const Samples v = constants.t0 *
                    bracket_velocity(functionals::spin_hamiltonian(constants).gradient(j), j, beta);
  FlowReport report;
  report.beta_used = beta;
  report.kappa = (v.array() * w.array()).sum() / (w_norm * w_norm);
  report.fit_residual = (v - report.kappa * w).norm() / v.norm();
  return report;
}

} // namespace filament
