#include "filament/bracket.hpp"
#include "filament/dynamics.hpp"
#include "filament/error.hpp"
#include "filament/invariants.hpp"
#include "filament/verify.hpp"

#include "test_support.hpp"

using namespace filament;
using filament::testing::kPi;
using filament::testing::max_abs;
namespace fn = filament::functionals;

namespace {
const ModelConstants kUnit = make_constants(1, 1, 1, 1);
}

TEST(Gradient, LinearFunctional) {
  std::mt19937_64 rng(89);
  const SpinField f = random_raw_field(32, rng);
  const Samples g = functional_gradient_fd(fn::phi(3), f.samples());
  Samples expected = Samples::Zero(32, 3);
  expected.col(2).setConstant(f.step());
  EXPECT_EQ(max_abs(fn::phi(3).gradient(f.samples()) - expected), 0.0);
  EXPECT_LE(max_abs(g - expected), 1e-9 * f.step()); // cancellation in the sum
  EXPECT_EQ(max_abs(functional_gradient_fd(fn::constant(4.2), f.samples())), 0.0);
}

TEST(Gradient, SpinEnergyMatchesSecondDerivative) {
  std::mt19937_64 rng(97);
  const SpinField f = random_admissible_field(64, rng);
  DiscreteFunctional F{"spin", [](const Samples &j) { return spin_energy(SpinField(j)); }, {}};
  const Samples fd = functional_gradient_fd(F, f.samples());
  const Samples analytic = -f.step() / kPi * derivative(f, 2);
  EXPECT_LE(max_abs(fd - analytic), 1e-6 * max_abs(analytic));
}

TEST(Gradient, AnalyticGradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(101);
  const SpinField f = random_admissible_field(32, rng);
  for (const DiscreteFunctional &F :
       {fn::phi(1), fn::coordinate(5, 2), fn::unit_norm_at(7), fn::spin_hamiltonian(kUnit),
        fn::hamiltonian(Vec3(1, 2, 3), kUnit), fn::product(fn::phi(2), fn::unit_norm_at(3))}) {
    const Samples a = F.gradient(f.samples());
    const Samples d = functional_gradient_fd(F, f.samples());
    EXPECT_LE(max_abs(a - d), 1e-6 * std::max(1.0, max_abs(a))) << F.name;
  }
}

TEST(Bracket, SuTwoClosureIsExact) {
  std::mt19937_64 rng(103);
  for (Eigen::Index n : {8, 64, 256}) {
    const SpinField f = random_raw_field(n, rng, 0.4, 3);
    const Vec3 phi = residual_zero_mean(f);
    const double beta = kUnit.beta;
    EXPECT_NEAR(poisson_bracket(fn::phi(1), fn::phi(2), f, kUnit), beta * phi[2], 1e-13);
    EXPECT_NEAR(poisson_bracket(fn::phi(2), fn::phi(3), f, kUnit), beta * phi[0], 1e-13);
    EXPECT_NEAR(poisson_bracket(fn::phi(3), fn::phi(1), f, kUnit), beta * phi[1], 1e-13);
  }
}

TEST(Bracket, Antisymmetry) {
  std::mt19937_64 rng(107);
  const SpinField f = random_admissible_field(32, rng);
  const auto H = fn::spin_hamiltonian(kUnit);
  EXPECT_EQ(poisson_bracket(H, H, f, kUnit), 0.0);
  const auto A = fn::coordinate(3, 1);
  EXPECT_EQ(poisson_bracket(A, H, f, kUnit), -poisson_bracket(H, A, f, kUnit));
}

TEST(Bracket, CoordinateExampleAtFourSamples) {
  const SpinField f(Samples(Samples::Zero(8, 3)).rowwise() + Eigen::RowVector3d(0, 0, 1));
  // N = 4 is below the grid minimum, so the rule is evaluated directly
  Samples j = Samples::Zero(4, 3);
  j.col(2).setOnes();
  const Samples ga = fn::coordinate(0, 1).gradient(j);
  const Samples gb = fn::coordinate(0, 2).gradient(j);
  EXPECT_NEAR(bracket_from_gradients(ga, gb, j, -2.0), -4.0 / kPi, 1e-15);
  EXPECT_NEAR(poisson_bracket(fn::coordinate(0, 1), fn::coordinate(0, 2), f, -2.0), -8.0 / kPi, 1e-15);
}

TEST(Bracket, Leibniz) {
  std::mt19937_64 rng(109);
  const SpinField f = random_admissible_field(16, rng);
  const auto F = fn::f_component(1);
  const auto G = fn::f_component(3);
  const auto H = fn::spin_hamiltonian(kUnit);
  const double lhs = poisson_bracket(fn::product(F, G), H, f, kUnit);
  const double rhs = F(f.samples()) * poisson_bracket(G, H, f, kUnit) +
                     G(f.samples()) * poisson_bracket(F, H, f, kUnit);
  EXPECT_NEAR(lhs, rhs, 1e-8 * std::max(1.0, std::abs(rhs)));
}

TEST(Bracket, JacobiOnCoordinates) {
  std::mt19937_64 rng(113);
  const SpinField f = random_admissible_field(16, rng);
  const double beta = kUnit.beta;
  const Eigen::Index i = 4;
  // {j_a, j_b} = (beta/h) eps_abc j_c at the same sample; compose once more
  const auto inner = [&](int a, int b) {
    DiscreteFunctional out;
    out.name = "inner";
    out.evaluate = [=](const Samples &j) {
      return bracket_from_gradients(fn::coordinate(i, a).gradient(j), fn::coordinate(i, b).gradient(j), j, beta);
    };
    return out;
  };
  double cyclic = 0.0;
  for (auto [a, b, c] : {std::tuple{1, 2, 3}, std::tuple{2, 3, 1}, std::tuple{3, 1, 2}})
    cyclic += poisson_bracket(inner(a, b), fn::coordinate(i, c), f, beta);
  EXPECT_LE(std::abs(cyclic), 1e-10 * std::pow(beta / f.step(), 2));
}

TEST(Bracket, UnitNormIsCasimir) {
  std::mt19937_64 rng(127);
  const SpinField f = random_admissible_field(32, rng);
  for (Eigen::Index i : {0, 9, 31}) {
    EXPECT_LE(std::abs(poisson_bracket(fn::unit_norm_at(i), fn::spin_hamiltonian(kUnit), f, kUnit)), 1e-10);
    EXPECT_LE(std::abs(poisson_bracket(fn::unit_norm_at(i), fn::phi(2), f, kUnit)), 1e-10);
    EXPECT_LE(std::abs(poisson_bracket(fn::unit_norm_at(i), fn::f_component(1), f, kUnit)), 1e-9);
  }
}

TEST(FirstClass, AdmissibleData) {
  std::mt19937_64 rng(131);
  for (int k = 0; k < 3; ++k) {
    const SpinField f = random_admissible_field(64, rng);
    const AlgebraReport r = check_first_class(f, 2.0 * vector_f(f), kUnit);
    EXPECT_TRUE(r.pass()) << r.su2_closure.value << " " << r.phi_with_phi0.value << " "
                          << r.energy_with_constraints.value;
  }
}

TEST(FirstClass, InadmissibleControlIsNonzero) {
  std::mt19937_64 rng(137);
  const SpinField f = random_admissible_field(64, rng);
  const Vec3 fv = vector_f(f);
  // oblique on purpose: at p perpendicular to f the bracket vanishes as well
  const Vec3 oblique = fv + fv.unitOrthogonal() * fv.norm();
  const AlgebraReport r = check_first_class(f, oblique, kUnit);
  EXPECT_GT(r.phi_with_phi0.value, 1e-4 * r.scale);
  EXPECT_LE(r.su2_closure.value, r.su2_closure.tolerance);
}

TEST(FirstClass, CircleBaseline) {
  const AlgebraReport r = check_first_class(make_scenario_field("circle", {}, 64), Vec3::Zero(), kUnit);
  EXPECT_LE(r.su2_closure.value, 1e-10 * r.scale);
  EXPECT_LE(r.phi_with_phi0.value, 1e-10 * r.scale);
  EXPECT_LE(r.energy_with_constraints.value, 1e-10 * r.scale);
}

TEST(Flow, KappaUnderBothNormalizations) {
  const SpinField f = make_scenario_field("kelvin_perturbed", {3, 0.05}, 256);
  const ModelConstants c = make_constants(1.5, 2.0, 0.8, 1);
  const FlowReport nominal = check_hamiltonian_flow(f, c);
  EXPECT_LE(nominal.fit_residual, 1e-6);
  EXPECT_NEAR(nominal.kappa, 2.0 / kPi, 1e-6);
  const FlowReport adjusted = check_hamiltonian_flow(f, c, -kPi / (c.E0 * c.t0));
  EXPECT_NEAR(adjusted.kappa, 1.0, 1e-6);
  EXPECT_LE(adjusted.fit_residual, 1e-6);
}

TEST(Flow, FiniteDifferenceVelocityOracle) {
  std::mt19937_64 rng(139);
  const SpinField f = random_admissible_field(32, rng);
  const Samples fd = functional_gradient_fd(fn::hamiltonian(Vec3(1, 0, 0), kUnit), f.samples());
  const Samples v = bracket_velocity(fd, f.samples(), kUnit.beta);
  const Samples expected = 2.0 / kPi * rhs_spin(f);
  EXPECT_LE(max_abs(v - expected), 1e-6 * max_abs(expected));
}

TEST(Flow, OffSurfaceDiagnostic) {
  const double a = 1.0 / std::sqrt(2.0);
  const SpinField f = sample_field(64, [=](double x) { return Vec3(a * std::cos(x), a * std::sin(x), a); });
  EXPECT_THROW(check_hamiltonian_flow(f, kUnit), InvalidArgument);
  EXPECT_LE(check_hamiltonian_flow(f, kUnit, std::nullopt, true).fit_residual, 1e-6);
}

TEST(Flow, StationaryFieldIsInapplicable) {
  EXPECT_THROW(check_hamiltonian_flow(make_scenario_field("circle", {}, 64), kUnit), InapplicableOracle);
}
