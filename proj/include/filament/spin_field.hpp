#pragma once

#include "filament/constants.hpp"
#include "filament/spectral.hpp"

#include <map>
#include <string>

namespace filament {

// N uniform samples of the sphere-valued field j on [0, 2 pi), endpoint
// excluded. N is even and at least 8.
class SpinField {
public:
  explicit SpinField(Samples samples);

  Eigen::Index size() const { return samples_.rows(); }
  double step() const { return grid_step(size()); }
  double xi(Eigen::Index i) const { return step() * static_cast<double>(i); }
  Vec3 operator[](Eigen::Index i) const { return samples_.row(i).transpose(); }
  const Samples &samples() const { return samples_; }

private:
  Samples samples_;
};

// Throws InvalidArgument unless n is even and >= 8.
void require_valid_size(Eigen::Index n);

// Evaluates j(xi_i) = fn(xi_i) on an n-point grid.
template <typename Fn> SpinField sample_field(Eigen::Index n, Fn &&fn) {
  require_valid_size(n);
  Samples s(n, 3);
  const double h = grid_step(n);
  for (Eigen::Index i = 0; i < n; ++i)
    s.row(i) = fn(h * static_cast<double>(i)).transpose();
  return SpinField(std::move(s));
}

struct ScenarioParams {
  int mode = 1;     // m
  double eps = 0.0; // Kelvin amplitude
};

// circle, great_circle_m, kelvin_perturbed, tilted_constant.
SpinField make_scenario_field(const std::string &kind,
                              const ScenarioParams &params, Eigen::Index n);

Samples derivative(const SpinField &field, int order,
                   DerivativeMethod method = DerivativeMethod::Spectral);

// max_i | |j_i|^2 - 1 |
double residual_unit_norm(const SpinField &field);

// Phi = h sum_i j_i
Vec3 residual_zero_mean(const SpinField &field);

struct ProjectionResult {
  SpinField field;
  int iterations;
};

// Alternating mean subtraction / normalization until both residuals <= tol.
ProjectionResult project_with_stats(const SpinField &field, double tol = 1e-12,
                                    int max_iter = 200);

SpinField project_to_constraints(const SpinField &field, double tol = 1e-12,
                                 int max_iter = 200);

// (1 / 2 pi) h sum_i |j'_i|^2, dimensionless; E0 times this is the internal
// energy.
double spin_energy(const SpinField &field);

struct FieldTolerances {
  double unit = 1e-12;
  double mean = 1e-10;
};

bool on_constraint_surface(const SpinField &field,
                           const FieldTolerances &tol = {});

// Applies one rotation matrix to every sample.
SpinField rotated(const SpinField &field, const Mat3 &rotation);

} // namespace filament
