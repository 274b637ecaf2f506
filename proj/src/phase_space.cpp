#include "filament/phase_space.hpp"

#include "filament/error.hpp"
#include "filament/invariants.hpp"

#include <cmath>
#include <sstream>

namespace filament {

namespace {

constexpr double kTiny = 1e-300;

bool collinear(const Vec3 &p, const Vec3 &f, double tol) {
  return std::abs(constraint_phi0(p, f)) <= tol * (p.squaredNorm() * f.squaredNorm() + kTiny);
}

} // namespace

PhasePoint to_omega(const ClassicalPoint &point, double tau,
                    const ModelConstants &constants) {
  Vec3 p = Vec3::Zero();
  if (point.gamma != 0.0) {
    const Vec3 f = vector_f(point.field);
    if (!(f.norm() > kDegenerateF))
      throw DegenerateError("degenerate chart: |f| = 0 with nonzero circulation");
    p = static_cast<double>(constants.sigma) * constants.R0 * constants.R0 * point.gamma * f;
  }
  return PhasePoint{constants.m0 * point.z0 + tau * constants.t0 * p, p, point.field};
}

ClassicalPoint from_omega(const PhasePoint &point, double tau,
                          const ModelConstants &constants, double phi0_tol) {
  const Vec3 z0 = (point.q - tau * constants.t0 * point.p) / constants.m0;
  if (point.p.isZero(0.0))
    return ClassicalPoint{z0, 0.0, point.field};

  const Vec3 f = vector_f(point.field);
  if (!(f.norm() > kDegenerateF))
    throw DegenerateError("degenerate chart: |f| = 0 with nonzero momentum");
  if (!collinear(point.p, f, phi0_tol)) {
    std::ostringstream msg;
    msg << "point is not in Omega: Phi0 = " << constraint_phi0(point.p, f);
    throw NotInOmega(msg.str());
  }
  const double sign = static_cast<double>(constants.sigma) * point.p.dot(f) >= 0.0 ? 1.0 : -1.0;
  const double gamma =
      sign * point.p.norm() / (constants.R0 * constants.R0 * f.norm());
  return ClassicalPoint{z0, gamma, point.field};
}

bool is_admissible(const PhasePoint &point, double phi0_tol,
                   const FieldTolerances &field_tol) {
  if (!on_constraint_surface(point.field, field_tol))
    return false;
  return collinear(point.p, vector_f(point.field), phi0_tol);
}

} // namespace filament
