#include "filament/error.hpp"
#include "filament/spin_field.hpp"
#include "filament/verify.hpp"

#include "test_support.hpp"

using namespace filament;
using filament::testing::kPi;
using filament::testing::max_abs;

TEST(SpinField, RejectsBadSizes) {
  EXPECT_THROW(SpinField(Samples::Zero(6, 3)), InvalidArgument);
  EXPECT_THROW(SpinField(Samples::Zero(9, 3)), InvalidArgument);
  EXPECT_NO_THROW(SpinField(Samples::Zero(8, 3)));
}

TEST(Scenario, CircleSamples) {
  const SpinField f = make_scenario_field("circle", {}, 8);
  EXPECT_NEAR((f[0] - Vec3(1, 0, 0)).norm(), 0.0, 1e-16);
  EXPECT_NEAR((f[2] - Vec3(0, 1, 0)).norm(), 0.0, 1e-16);
}

TEST(Scenario, GreatCircleMode) {
  const SpinField f = make_scenario_field("great_circle_m", {2, 0.0}, 8);
  EXPECT_NEAR((f[1] - Vec3(std::cos(kPi / 2), std::sin(kPi / 2), 0)).norm(), 0.0, 1e-16);
}

TEST(Scenario, KelvinIsAdmissible) {
  const SpinField f = make_scenario_field("kelvin_perturbed", {3, 0.05}, 256);
  EXPECT_LE(residual_zero_mean(f).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE(residual_unit_norm(f), 1e-12);
}

TEST(Scenario, KelvinWithZeroAmplitudeIsTheCircle) {
  const SpinField a = make_scenario_field("kelvin_perturbed", {3, 0.0}, 64);
  const SpinField b = make_scenario_field("circle", {}, 64);
  EXPECT_LE(max_abs(a.samples() - b.samples()), 1e-15);
}

TEST(Scenario, UnknownKind) {
  EXPECT_THROW(make_scenario_field("figure_eight", {}, 16), InvalidArgument);
}

TEST(Derivative, CircleFirstDerivative) {
  const SpinField f = make_scenario_field("circle", {}, 64);
  const Samples d = derivative(f, 1);
  const SpinField expected = sample_field(64, [](double x) { return Vec3(-std::sin(x), std::cos(x), 0); });
  EXPECT_LE(max_abs(d - expected.samples()), 1e-13);
}

TEST(Derivative, ConstantHasZeroSecondDerivative) {
  const SpinField f = make_scenario_field("tilted_constant", {}, 32);
  EXPECT_LE(max_abs(derivative(f, 2)), 1e-15);
  EXPECT_LE(max_abs(derivative(f, 2, DerivativeMethod::Fd4)), 1e-12);
}

TEST(Derivative, ModeTwoSecondDerivative) {
  const SpinField f = make_scenario_field("great_circle_m", {2, 0.0}, 64);
  EXPECT_LE(max_abs(derivative(f, 2) + 4.0 * f.samples()), 1e-12);
}

TEST(Derivative, SecondMatchesFirstTwiceOnSmoothFields) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 10; ++k) {
    const SpinField f = random_resolved_field(256, rng);
    const Samples twice = derivative(derivative(f, 1), 1);
    const Samples direct = derivative(f, 2);
    EXPECT_LE(max_abs(twice - direct), 1e-10 * max_abs(direct));
  }
}

TEST(Derivative, Fd4AgreesWithSpectralAtFourthOrder) {
  // error ratio between N and 2N should approach 16
  double previous = 0.0;
  for (Eigen::Index n : {32, 64, 128}) {
    const SpinField f = make_scenario_field("great_circle_m", {3, 0.0}, n);
    const double err = max_abs(derivative(f, 1, DerivativeMethod::Fd4) - derivative(f, 1));
    if (previous > 0.0)
      EXPECT_NEAR(previous / err, 16.0, 2.0);
    previous = err;
  }
}

TEST(Residuals, UnitNorm) {
  const SpinField f = make_scenario_field("circle", {}, 16);
  EXPECT_LE(residual_unit_norm(f), 2.3e-16);
  EXPECT_NEAR(residual_unit_norm(SpinField(1.1 * f.samples())), 0.21, 1e-15);
}

TEST(Residuals, ZeroMean) {
  EXPECT_LE(residual_zero_mean(make_scenario_field("circle", {}, 64)).cwiseAbs().maxCoeff(), 1e-14);
  const Vec3 tilted = residual_zero_mean(make_scenario_field("tilted_constant", {}, 64));
  EXPECT_NEAR((tilted - Vec3(0, 0, 2 * kPi)).norm(), 0.0, 1e-13);

  // direct summation oracle
  const SpinField lifted = sample_field(64, [](double x) { return Vec3(std::cos(x), std::sin(x), 0.3); });
  double direct = 0.0;
  for (Eigen::Index i = 0; i < 64; ++i)
    direct += 0.3 * (2 * kPi / 64);
  EXPECT_NEAR(residual_zero_mean(lifted)[2], direct, 1e-14);
  EXPECT_NEAR(direct, 0.6 * kPi, 1e-13);
}

TEST(Residuals, SingleModesIntegrateToZero) {
  const Eigen::Index n = 64;
  for (Eigen::Index k = 1; k < n / 2; ++k) {
    const double m = static_cast<double>(k);
    const SpinField f = sample_field(n, [m](double x) { return Vec3(std::cos(m * x), std::sin(m * x), std::cos(m * x + 0.3)); });
    EXPECT_LE(residual_zero_mean(f).cwiseAbs().maxCoeff(), 1e-13) << "mode " << k;
  }
}

TEST(Projection, CircleUnchanged) {
  const SpinField f = make_scenario_field("circle", {}, 64);
  const ProjectionResult r = project_with_stats(f);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(max_abs(r.field.samples() - f.samples()), 0.0);
}

TEST(Projection, LiftedCircleConverges) {
  const SpinField f = sample_field(64, [](double x) { return Vec3(std::cos(x), std::sin(x), 0.1); });
  const ProjectionResult r = project_with_stats(f, 1e-12, 50);
  EXPECT_LE(r.iterations, 50);
  EXPECT_LE(residual_unit_norm(r.field), 1e-12);
  EXPECT_LE(residual_zero_mean(r.field).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Projection, ConstantFieldIsDegenerate) {
  const SpinField f = make_scenario_field("tilted_constant", {}, 16);
  EXPECT_THROW(project_to_constraints(f), DegenerateError);
}

TEST(Projection, NonConvergenceCarriesResiduals) {
  const SpinField f = sample_field(64, [](double x) {
    return Vec3(std::cos(x) + 0.4 * std::cos(2 * x), std::sin(x), 0.8 + 0.3 * std::sin(3 * x));
  });
  try {
    project_to_constraints(f, 1e-14, 1);
    FAIL() << "expected non-convergence";
  } catch (const ConvergenceError &e) {
    EXPECT_GT(e.last_residual(), 1e-14);
  }
}

TEST(Projection, Idempotent) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 10; ++k) {
    const SpinField once = random_admissible_field(64, rng);
    const SpinField twice = project_to_constraints(once, 1e-12);
    EXPECT_LE(max_abs(twice.samples() - once.samples()), 1e-12);
  }
}

TEST(SpinEnergy, ReferenceValues) {
  EXPECT_NEAR(spin_energy(make_scenario_field("circle", {}, 64)), 1.0, 1e-13);
  EXPECT_EQ(spin_energy(make_scenario_field("tilted_constant", {}, 64)), 0.0);
  EXPECT_NEAR(spin_energy(make_scenario_field("great_circle_m", {2, 0.0}, 64)), 4.0, 1e-12);
}

TEST(SpinEnergy, GreatCircleModesMatchQuadratureOracle) {
  // |j'| = m analytically; integrate |j'|^2 / 2 pi by Gauss-Legendre
  const filament::testing::GaussLegendre gl(12);
  const Eigen::Index n = 128;
  for (int m = 1; m <= static_cast<int>(n / 8); ++m) {
    const double md = m;
    const Vec3 integral = gl.integrate(
        [md](double x) {
          const Vec3 d(-md * std::sin(md * x), md * std::cos(md * x), 0.0);
          return Vec3(d.squaredNorm(), 0, 0);
        },
        0.0, 2 * kPi, 64);
    const double oracle = integral[0] / (2 * kPi);
    const double got = spin_energy(make_scenario_field("great_circle_m", {m, 0.0}, n));
    EXPECT_NEAR(got / oracle, 1.0, 1e-10) << "m = " << m;
  }
}
