#include "filament/dynamics.hpp"

#include "filament/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace filament {

namespace {

Samples rowwise_cross(const Samples &a, const Samples &b) {
  Samples out(a.rows(), 3);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    out(i, 0) = a(i, 1) * b(i, 2) - a(i, 2) * b(i, 1);
    out(i, 1) = a(i, 2) * b(i, 0) - a(i, 0) * b(i, 2);
    out(i, 2) = a(i, 0) * b(i, 1) - a(i, 1) * b(i, 0);
  }
  return out;
}

void require_step(double dtau) {
  if (!(dtau != 0.0) || !std::isfinite(dtau))
    throw InvalidArgument("time step must be finite and nonzero");
}

void check_stage(const Samples &s) {
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    const double len = s.row(i).norm();
    if (!(len >= 1e-8)) {
      std::ostringstream msg;
      msg << "step failure: sample " << i << " has norm " << len;
      throw StepFailure(msg.str());
    }
  }
}

} // namespace

Samples rhs_spin(const Samples &j) { return rowwise_cross(j, derivative(j, 2)); }

Samples rhs_spin(const SpinField &field) { return rhs_spin(field.samples()); }

SpinField step_rk4_projected(const SpinField &field, double dtau) {
  require_step(dtau);
  const Samples &y = field.samples();
  const Samples k1 = rhs_spin(y);
  const Samples y2 = y + 0.5 * dtau * k1;
  check_stage(y2);
  const Samples k2 = rhs_spin(y2);
  const Samples y3 = y + 0.5 * dtau * k2;
  check_stage(y3);
  const Samples k3 = rhs_spin(y3);
  const Samples y4 = y + dtau * k3;
  check_stage(y4);
  const Samples k4 = rhs_spin(y4);
  Samples next = y + dtau / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  check_stage(next);
  next.rowwise().normalize();
  return SpinField(std::move(next));
}

SpinField step_implicit_midpoint(const SpinField &field, double dtau, double tol,
                                 int max_iter) {
  require_step(dtau);
  if (!(tol > 0.0))
    throw InvalidArgument("fixed-point tolerance must be positive");
  const Samples &y = field.samples();
  Samples next = y + dtau * rhs_spin(y);
  double previous = 0.0;
  double contraction = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    const Samples mid = 0.5 * (y + next);
    Samples candidate = y + dtau * rhs_spin(mid);
    const double change = (candidate - next).cwiseAbs().maxCoeff();
    next = std::move(candidate);
    if (previous > 0.0)
      contraction = change / previous;
    if (change <= tol)
      return SpinField(std::move(next));
    if (!std::isfinite(change) || (it > 3 && contraction > 1.0 && change > 1.0))
      break;
    previous = change;
  }
  std::ostringstream msg;
  msg << "implicit midpoint fixed-point iteration did not converge "
      << "(last contraction factor " << contraction << ")";
  throw ConvergenceError(msg.str(), contraction);
}

double unit_norm_budget(Integrator integrator) {
  return integrator == Integrator::ImplicitMidpoint ? 1e-10 : 1e-13;
}

double default_dtau(Eigen::Index n) {
  const double h = grid_step(n);
  return 0.1 * h * h;
}

Trajectory evolve(const SpinField &field, double dtau, int n_steps,
                  const ModelConstants &constants, const Vec3 &p,
                  const EvolveOptions &options) {
  if (!(dtau > 0.0) || !std::isfinite(dtau))
    throw InvalidArgument("dtau must be positive");
  if (n_steps < 0)
    throw InvalidArgument("n_steps must be non-negative");
  const int every = options.monitor_every > 0 ? options.monitor_every
                                              : std::max(1, n_steps / 100);
  const double budget = unit_norm_budget(options.integrator);

  Trajectory traj;
  traj.p = p;
  const auto record = [&](int step, const SpinField &state) {
    traj.times.push_back(dtau * step);
    traj.states.push_back(state);
    traj.reports.push_back(make_report(state, p, constants));
  };

  SpinField state = field;
  record(0, state);
  for (int step = 1; step <= n_steps; ++step) {
    try {
      state = options.integrator == Integrator::ImplicitMidpoint
                  ? step_implicit_midpoint(state, dtau, options.tol, options.max_iter)
                  : step_rk4_projected(state, dtau);
      if (step % every == 0 || step == n_steps) {
        const double drift = residual_unit_norm(state);
        if (drift > budget) {
          std::ostringstream msg;
          msg << "unit-norm drift " << drift << " exceeds the integrator budget " << budget;
          throw StepFailure(msg.str());
        }
        record(step, state);
      }
    } catch (const std::runtime_error &e) {
      std::ostringstream msg;
      msg << "evolution aborted at step " << step << ": " << e.what();
      throw EvolutionAborted(msg.str(), std::move(traj));
    }
  }
  return traj;
}

LieResidual lie_residual(const SpinField &field, const ModelConstants &constants) {
  const Samples &j = field.samples();
  const Samples spin_velocity = constants.R0 * kernel_integral(rhs_spin(j));
  const Samples lia_velocity = constants.R0 * rowwise_cross(j, derivative(j, 1));
  const Samples diff = spin_velocity - lia_velocity;
  const Eigen::RowVector3d uniform = diff.colwise().mean();
  LieResidual out;
  out.uniform_part = uniform.transpose();
  out.nonuniform_norm = (diff.rowwise() - uniform).rowwise().norm().maxCoeff();
  return out;
}

Samples evolve_curve_lia(const Samples &points, double R0, double dtau, int n_steps) {
  require_step(dtau);
  const auto velocity = [R0](const Samples &z) {
    return Samples(rowwise_cross(derivative(z, 1), derivative(z, 2)) / R0);
  };
  Samples z = points;
  for (int step = 0; step < n_steps; ++step) {
    const Samples k1 = velocity(z);
    const Samples k2 = velocity(z + 0.5 * dtau * k1);
    const Samples k3 = velocity(z + 0.5 * dtau * k2);
    const Samples k4 = velocity(z + dtau * k3);
    z += dtau / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return z;
}

} // namespace filament
