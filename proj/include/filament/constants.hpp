#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace filament {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Dimensional scale constants shared by every module. Construct through
// make_constants(); the derived E0 and beta are never set independently.
struct ModelConstants {
  double R0 = 1.0;    // length scale
  double m0 = 1.0;    // mass scale
  double t0 = 1.0;    // time scale
  double gamma = 1.0; // circulation
  double E0 = 1.0;    // m0 R0^2 / t0^2
  double beta = -2.0; // -2 / (E0 t0)
  int sigma = -1;     // momentum sign convention, p = sigma R0^2 gamma f
};

ModelConstants make_constants(double R0, double m0, double t0, double gamma,
                              int sigma = -1);

// Same scales with a different circulation.
ModelConstants with_gamma(const ModelConstants &c, double gamma);

// Throws InvalidArgument if any stored invariant is broken.
void validate(const ModelConstants &c);

} // namespace filament
