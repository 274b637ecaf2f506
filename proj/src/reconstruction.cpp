#include "filament/reconstruction.hpp"

#include "filament/error.hpp"

#include <sstream>

namespace filament {

FilamentCurve reconstruct_curve(const SpinField &field, const Vec3 &basepoint,
                                const ModelConstants &constants,
                                KernelConvention conv) {
  FilamentCurve curve;
  curve.R0 = constants.R0;
  curve.basepoint = basepoint;
  curve.points = constants.R0 * kernel_integral(field.samples(), conv);
  curve.points.rowwise() += basepoint.transpose();
  curve.jump = constants.R0 * kernel_jump_factor(conv) * residual_zero_mean(field);
  return curve;
}

FilamentCurve reconstruct_from_phase(const PhasePoint &point, double tau,
                                     const ModelConstants &constants,
                                     KernelConvention conv) {
  const Vec3 base = (point.q - tau * constants.t0 * point.p) / constants.m0;
  return reconstruct_curve(point.field, base, constants, conv);
}

double closure_residual(const FilamentCurve &curve) { return curve.jump.norm(); }

double tangent_residual(const FilamentCurve &curve, const SpinField &field) {
  const Samples tangent = derivative(curve.points, 1);
  return (tangent - curve.R0 * field.samples()).rowwise().norm().maxCoeff();
}

Eigen::VectorXd curvature_profile(const Samples &points, double R0) {
  const Samples d1 = derivative(points, 1);
  const Samples d2 = derivative(points, 2);
  Eigen::VectorXd kappa(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const Vec3 t = d1.row(i).transpose();
    const double speed = t.norm();
    if (speed < 1e-12 * R0) {
      std::ostringstream msg;
      msg << "degenerate tangent at sample " << i;
      throw DegenerateError(msg.str());
    }
    kappa[i] = t.cross(Vec3(d2.row(i).transpose())).norm() / (speed * speed * speed);
  }
  return kappa;
}

Eigen::VectorXd curvature_profile(const FilamentCurve &curve) {
  return curvature_profile(curve.points, curve.R0);
}

} // namespace filament
