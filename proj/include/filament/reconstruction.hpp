#pragma once

#include "filament/constants.hpp"
#include "filament/phase_point.hpp"
#include "filament/spin_field.hpp"

namespace filament {

struct FilamentCurve {
  Samples points;        // z(xi_i), same grid as the field
  Vec3 basepoint;        // z0, or (q - tau t0 p) / m0
  Vec3 jump;             // z(2 pi^-) - z(0)
  double R0 = 1.0;

  Eigen::Index size() const { return points.rows(); }
};

// z_i = z0 + R0 * integral [xi_i - eta] j(eta) d eta.
FilamentCurve reconstruct_curve(const SpinField &field, const Vec3 &basepoint,
                                const ModelConstants &constants,
                                KernelConvention conv = KernelConvention::Floor);

// Basepoint (q - tau t0 p) / m0.
FilamentCurve reconstruct_from_phase(const PhasePoint &point, double tau,
                                     const ModelConstants &constants,
                                     KernelConvention conv = KernelConvention::Floor);

// |z(2 pi^-) - z(0)|; equals R0 |Phi| under the floor kernel.
double closure_residual(const FilamentCurve &curve);

// max_i |z'_i - R0 j_i| with the spectral derivative of the curve samples.
double tangent_residual(const FilamentCurve &curve, const SpinField &field);

// Frenet curvature |z' x z''| / |z'|^3 at each node.
Eigen::VectorXd curvature_profile(const FilamentCurve &curve);
Eigen::VectorXd curvature_profile(const Samples &points, double R0);

} // namespace filament
