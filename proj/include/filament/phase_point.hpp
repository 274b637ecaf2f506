#pragma once

#include "filament/constants.hpp"
#include "filament/spin_field.hpp"

namespace filament {

// Omega coordinates: q in mass*length units (m0 z0 + tau t0 p), momentum p,
// and the spin field.
struct PhasePoint {
  Vec3 q = Vec3::Zero();
  Vec3 p = Vec3::Zero();
  SpinField field;
};

// Classical parametrization: basepoint, circulation, spin field.
struct ClassicalPoint {
  Vec3 z0 = Vec3::Zero();
  double gamma = 0.0;
  SpinField field;
};

} // namespace filament
