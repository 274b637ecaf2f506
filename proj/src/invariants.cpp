#include "filament/invariants.hpp"

#include "filament/error.hpp"
#include "filament/parallel.hpp"

#include <sstream>
#include <vector>

namespace filament {

namespace {

Vec3 vector_f_reference(const SpinField &field, KernelConvention conv) {
  const Eigen::Index n = field.size();
  const KernelWeights weights(n, conv);
  const Samples &j = field.samples();
  std::vector<Vec3> rows(static_cast<std::size_t>(n), Vec3::Zero());
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t b, std::size_t e) {
    for (auto i = static_cast<Eigen::Index>(b); i < static_cast<Eigen::Index>(e); ++i) {
      const Vec3 ji = j.row(i).transpose();
      Vec3 acc = Vec3::Zero();
      for (Eigen::Index k = 0; k < n; ++k)
        acc += weights(i, k) * ji.cross(Vec3(j.row(k).transpose()));
      rows[static_cast<std::size_t>(i)] = acc;
    }
  });
  Vec3 total = Vec3::Zero();
  for (const Vec3 &r : rows)
    total += r;
  return 0.5 * field.step() * total;
}

Vec3 vector_f_fast(const SpinField &field, KernelConvention conv) {
  const Samples inner = kernel_integral(field.samples(), conv);
  const Samples &j = field.samples();
  Vec3 total = Vec3::Zero();
  for (Eigen::Index i = 0; i < j.rows(); ++i)
    total += Vec3(j.row(i).transpose()).cross(Vec3(inner.row(i).transpose()));
  return 0.5 * field.step() * total;
}

void require_closed(const FilamentCurve &curve, double closure_tol, const char *what) {
  const double residual = closure_residual(curve);
  if (residual > closure_tol * curve.R0) {
    std::ostringstream msg;
    msg << what << " needs a closed curve (closure residual " << residual << ")";
    throw InapplicableOracle(msg.str());
  }
}

} // namespace

Vec3 vector_f(const SpinField &field, FMethod method, KernelConvention conv) {
  return method == FMethod::Reference ? vector_f_reference(field, conv)
                                      : vector_f_fast(field, conv);
}

Vec3 momentum(const SpinField &field, const ModelConstants &constants,
              KernelConvention conv) {
  return static_cast<double>(constants.sigma) * constants.R0 * constants.R0 *
         constants.gamma * vector_f(field, FMethod::Fast, conv);
}

Vec3 impulse_direct(const FilamentCurve &curve, const ModelConstants &constants,
                    double closure_tol) {
  require_closed(curve, closure_tol, "impulse_direct");
  const Samples tangent = derivative(curve.points, 1);
  Vec3 total = Vec3::Zero();
  for (Eigen::Index i = 0; i < curve.size(); ++i)
    total += Vec3(curve.points.row(i).transpose()).cross(Vec3(tangent.row(i).transpose()));
  return 0.5 * constants.gamma * grid_step(curve.size()) * total;
}

Vec3 angular_momentum(const FilamentCurve &curve, const ModelConstants &constants,
                      double closure_tol) {
  require_closed(curve, closure_tol, "angular_momentum");
  const Samples tangent = derivative(curve.points, 1);
  Vec3 total = Vec3::Zero();
  for (Eigen::Index i = 0; i < curve.size(); ++i) {
    const Vec3 z = curve.points.row(i).transpose();
    total += z.cross(z.cross(Vec3(tangent.row(i).transpose())));
  }
  return constants.gamma / 3.0 * grid_step(curve.size()) * total;
}

double hamiltonian_H0(const Vec3 &p, const SpinField &field,
                      const ModelConstants &constants) {
  return p.squaredNorm() / (2.0 * constants.m0) + constants.E0 * spin_energy(field);
}

Vec3 direction_of_f(const Vec3 &f) {
  const double len = f.norm();
  if (!(len > kDegenerateF))
    throw DegenerateError("degenerate direction: |f| is zero, n_f undefined");
  return f / len;
}

double energy_restricted(const Vec3 &p, const Vec3 &f, double spin,
                         const ModelConstants &constants) {
  const double along = p.dot(direction_of_f(f));
  return along * along / (2.0 * constants.m0) + constants.E0 * spin;
}

double energy_restricted(const Vec3 &p, const SpinField &field,
                         const ModelConstants &constants) {
  return energy_restricted(p, vector_f(field), spin_energy(field), constants);
}

Mat3 effective_mass_inverse(const Vec3 &f, const ModelConstants &constants) {
  const Vec3 n = direction_of_f(f);
  return n * n.transpose() / constants.m0;
}

Mat3 effective_mass_inverse(const SpinField &field, const ModelConstants &constants) {
  return effective_mass_inverse(vector_f(field), constants);
}

double constraint_phi0(const Vec3 &p, const Vec3 &f) {
  // Lagrange identity: keeps the collinear limit free of cancellation
  return -p.cross(f).squaredNorm();
}

double constraint_phi0(const Vec3 &p, const SpinField &field) {
  return constraint_phi0(p, vector_f(field));
}

InvariantReport make_report(const SpinField &field, const Vec3 &p,
                            const ModelConstants &constants, const Vec3 &basepoint) {
  InvariantReport r;
  r.phi = residual_zero_mean(field);
  r.unit_norm_res = residual_unit_norm(field);
  r.f = vector_f(field);
  r.p = p;
  r.spin_energy = spin_energy(field);
  r.H0 = p.squaredNorm() / (2.0 * constants.m0) + constants.E0 * r.spin_energy;
  r.phi0 = constraint_phi0(p, r.f);
  if (r.f.norm() > kDegenerateF) {
    r.E_restricted = energy_restricted(p, r.f, r.spin_energy, constants);
    r.inv_mass = effective_mass_inverse(r.f, constants);
  }
  const FilamentCurve curve = reconstruct_curve(field, basepoint, constants);
  try {
    r.s = angular_momentum(curve, constants);
  } catch (const InapplicableOracle &) {
    r.s.reset();
  }
  return r;
}

} // namespace filament
