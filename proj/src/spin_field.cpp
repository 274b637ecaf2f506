#include "filament/spin_field.hpp"

#include "filament/error.hpp"

#include <cmath>
#include <sstream>

namespace filament {

void require_valid_size(Eigen::Index n) {
  if (n < 8 || n % 2 != 0) {
    std::ostringstream msg;
    msg << "sample count N must be even and >= 8 (got " << n << ")";
    throw InvalidArgument(msg.str());
  }
}

SpinField::SpinField(Samples samples) : samples_(std::move(samples)) {
  require_valid_size(samples_.rows());
  if (!samples_.allFinite())
    throw InvalidArgument("field samples must be finite");
}

SpinField make_scenario_field(const std::string &kind,
                              const ScenarioParams &params, Eigen::Index n) {
  if (kind == "circle")
    return sample_field(n, [](double x) { return Vec3(std::cos(x), std::sin(x), 0.0); });

  if (kind == "great_circle_m") {
    if (params.mode < 1)
      throw InvalidArgument("great_circle_m needs mode m >= 1");
    const double m = params.mode;
    return sample_field(n, [m](double x) { return Vec3(std::cos(m * x), std::sin(m * x), 0.0); });
  }

  if (kind == "kelvin_perturbed") {
    if (params.mode < 1)
      throw InvalidArgument("kelvin_perturbed needs mode m >= 1");
    if (!(params.eps >= 0.0))
      throw InvalidArgument("kelvin_perturbed needs amplitude eps >= 0");
    const double m = params.mode;
    const double eps = params.eps;
    return project_to_constraints(sample_field(n, [m, eps](double x) {
      return Vec3(std::cos(x), std::sin(x), eps * std::sin(m * x));
    }));
  }

  if (kind == "tilted_constant")
    return sample_field(n, [](double) { return Vec3(0.0, 0.0, 1.0); });

  throw InvalidArgument("unknown scenario kind '" + kind + "'");
}

Samples derivative(const SpinField &field, int order, DerivativeMethod method) {
  return derivative(field.samples(), order, method);
}

double residual_unit_norm(const SpinField &field) {
  const Samples &s = field.samples();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < s.rows(); ++i)
    worst = std::max(worst, std::abs(s.row(i).squaredNorm() - 1.0));
  return worst;
}

Vec3 residual_zero_mean(const SpinField &field) {
  return period_integral(field.samples());
}

ProjectionResult project_with_stats(const SpinField &field, double tol,
                                    int max_iter) {
  if (!(tol > 0.0))
    throw InvalidArgument("projection tolerance must be positive");
  const auto converged = [tol](const SpinField &f) {
    return residual_unit_norm(f) <= tol && residual_zero_mean(f).cwiseAbs().maxCoeff() <= tol;
  };
  if (converged(field))
    return {field, 0};

  Samples s = field.samples();
  const double n = static_cast<double>(s.rows());
  for (int it = 1; it <= max_iter; ++it) {
    const Eigen::RowVector3d mean = s.colwise().sum() / n;
    s.rowwise() -= mean;
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      const double len = s.row(i).norm();
      if (!(len > 0.0))
        throw DegenerateError("zero-length sample during normalization");
      s.row(i) /= len;
    }
    SpinField candidate(s);
    if (converged(candidate))
      return {std::move(candidate), it};
  }

  SpinField last(s);
  std::ostringstream msg;
  msg.precision(3);
  const double unit = residual_unit_norm(last);
  const double mean = residual_zero_mean(last).norm();
  msg << "projection did not converge after " << max_iter
      << " iterations (unit-norm residual " << unit << ", |Phi| " << mean << ")";
  throw ConvergenceError(msg.str(), std::max(unit, mean));
}

SpinField project_to_constraints(const SpinField &field, double tol, int max_iter) {
  return project_with_stats(field, tol, max_iter).field;
}

double spin_energy(const SpinField &field) {
  // -(h / 2 pi) sum j . D2 j: the quadratic form the spin flow conserves
  const Samples &j = field.samples();
  return -field.step() * (j.array() * derivative(j, 2).array()).sum() / kTwoPi;
}

bool on_constraint_surface(const SpinField &field, const FieldTolerances &tol) {
  return residual_unit_norm(field) <= tol.unit &&
         residual_zero_mean(field).cwiseAbs().maxCoeff() <= tol.mean;
}

SpinField rotated(const SpinField &field, const Mat3 &rotation) {
  return SpinField(field.samples() * rotation.transpose());
}

} // namespace filament
