#pragma once

#include "filament/constants.hpp"
#include "filament/reconstruction.hpp"
#include "filament/spin_field.hpp"

#include <optional>

namespace filament {

enum class FMethod { Reference, Fast };

// f = 1/2 double integral of [xi - eta] j(xi) x j(eta).
// Reference: explicit O(N^2) double sum over quadrature weights.
// Fast: O(N log N) through the spectral kernel integral.
Vec3 vector_f(const SpinField &field, FMethod method = FMethod::Fast,
              KernelConvention conv = KernelConvention::Floor);

// p = sigma R0^2 gamma f
Vec3 momentum(const SpinField &field, const ModelConstants &constants,
              KernelConvention conv = KernelConvention::Floor);

// Default closedness requirement for the line-integral oracles, relative to R0.
inline constexpr double kClosureTolerance = 1e-8;

// 1/2 gamma loop integral of z x dz. Independent of vector_f.
Vec3 impulse_direct(const FilamentCurve &curve, const ModelConstants &constants,
                    double closure_tol = kClosureTolerance);

// gamma/3 loop integral of z x (z x dz).
Vec3 angular_momentum(const FilamentCurve &curve, const ModelConstants &constants,
                      double closure_tol = kClosureTolerance);

// |p|^2 / 2 m0 + E0 * spin_energy
double hamiltonian_H0(const Vec3 &p, const SpinField &field,
                      const ModelConstants &constants);

// Below this |f| the direction n_f is treated as undefined.
inline constexpr double kDegenerateF = 1e-12;

Vec3 direction_of_f(const Vec3 &f);

// (p . n_f)^2 / 2 m0 + E0 * spin_energy
double energy_restricted(const Vec3 &p, const SpinField &field,
                         const ModelConstants &constants);
double energy_restricted(const Vec3 &p, const Vec3 &f, double spin_energy,
                         const ModelConstants &constants);

// (1/m0) n_f n_f^T
Mat3 effective_mass_inverse(const SpinField &field, const ModelConstants &constants);
Mat3 effective_mass_inverse(const Vec3 &f, const ModelConstants &constants);

// (p . f)^2 - p^2 f^2, never positive.
double constraint_phi0(const Vec3 &p, const SpinField &field);
double constraint_phi0(const Vec3 &p, const Vec3 &f);

struct InvariantReport {
  Vec3 phi = Vec3::Zero();
  double unit_norm_res = 0.0;
  Vec3 f = Vec3::Zero();
  Vec3 p = Vec3::Zero();
  std::optional<Vec3> s;           // empty when the curve is not closed
  double spin_energy = 0.0;
  double H0 = 0.0;
  std::optional<double> E_restricted; // empty when |f| is degenerate
  std::optional<Mat3> inv_mass;       // empty when |f| is degenerate
  double phi0 = 0.0;

  bool degenerate_direction() const { return !E_restricted.has_value(); }
};

// Everything above for the field with momentum p; s uses the curve
// reconstructed at `basepoint`.
InvariantReport make_report(const SpinField &field, const Vec3 &p,
                            const ModelConstants &constants,
                            const Vec3 &basepoint = Vec3::Zero());

} // namespace filament
