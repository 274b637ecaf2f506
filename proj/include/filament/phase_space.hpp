#pragma once

#include "filament/constants.hpp"
#include "filament/phase_point.hpp"

namespace filament {

// Relative admissibility tolerance: |Phi0| <= tol (|p|^2 |f|^2 + tiny).
inline constexpr double kPhi0Tolerance = 1e-8;

// p = momentum(field) with the point's circulation, q = m0 z0 + tau t0 p.
PhasePoint to_omega(const ClassicalPoint &point, double tau,
                    const ModelConstants &constants);

// Inverse map. gamma = sign(sigma p.f) |p| / (R0^2 |f|), z0 = (q - tau t0 p)/m0.
// Throws NotInOmega when p is not collinear with f.
ClassicalPoint from_omega(const PhasePoint &point, double tau,
                          const ModelConstants &constants,
                          double phi0_tol = kPhi0Tolerance);

bool is_admissible(const PhasePoint &point, double phi0_tol = kPhi0Tolerance,
                   const FieldTolerances &field_tol = {});

} // namespace filament
