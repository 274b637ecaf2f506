#include "filament/verify.hpp"

#include "filament/bracket.hpp"
#include "filament/dynamics.hpp"
#include "filament/error.hpp"
#include "filament/invariants.hpp"
#include "filament/phase_space.hpp"
#include "filament/reconstruction.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>

namespace filament {

namespace {

constexpr double kPi = std::numbers::pi;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

SpinField random_field_impl(Eigen::Index n, std::mt19937_64 &rng, double amplitude,
                            int max_mode) {
  std::normal_distribution<double> normal(0.0, amplitude);
  const Mat3 rot = random_rotation(rng);
  std::vector<std::array<Vec3, 2>> coeffs;
  for (int k = 2; k <= max_mode; ++k)
    coeffs.push_back({Vec3(normal(rng), normal(rng), normal(rng)),
                      Vec3(normal(rng), normal(rng), normal(rng))});
  return sample_field(n, [&](double x) {
    Vec3 v = rot * Vec3(std::cos(x), std::sin(x), 0.0);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      const double m = static_cast<double>(k + 2);
      v += coeffs[k][0] * std::cos(m * x) + coeffs[k][1] * std::sin(m * x);
    }
    return v;
  });
}

struct Sizes {
  Eigen::Index n;
  double tau_conservation;
  double tau_curvature;
  int random_fields;
  int admissible_fields;
  int bijection_points;
  std::vector<Eigen::Index> fast_sizes;
  Eigen::Index speed_size;
};

Sizes sizes_for(VerifyLevel level) {
  if (level == VerifyLevel::Quick)
    return {64, 0.1, 0.05, 20, 2, 20, {64, 256}, 2048};
  return {256, 1.0, 0.5, 100, 5, 100, {64, 256, 1024}, 4096};
}

CriterionResult reference_energy(const Sizes &sz) {
  CriterionResult r{1, "reference-energy postulate (H0 = E0 on the ring)", false, {}, 0.0, 0.0};
  double worst = 0.0;
  for (const auto &[R0, m0, t0] :
       {std::array{1.0, 1.0, 1.0}, std::array{2.0, 3.0, 0.5}, std::array{0.7, 1.3, 2.1}}) {
    const ModelConstants c = make_constants(R0, m0, t0, 1.0);
    const double H0 = hamiltonian_H0(Vec3::Zero(), make_scenario_field("circle", {}, sz.n), c);
    worst = std::max(worst, std::abs(H0 - c.E0) / c.E0);
  }
  r.pass = worst <= 1e-12;
  r.measured = "max |H0-E0|/E0 = " + sci(worst);
  return r;
}

CriterionResult ring_impulse(const Sizes &sz) {
  CriterionResult r{2, "ring impulse vs line-integral oracle and pi R0^2 gamma scaling", false, {}, 0.0, 0.0};
  const ConventionProbe probe = probe_kernel_convention(KernelConvention::Floor, sz.n);
  const SpinField circle = make_scenario_field("circle", {}, sz.n);
  double worst_scale = 0.0;
  double worst_oracle = 0.0;
  for (double R0 : {0.5, 1.0, 2.0})
    for (double gamma : {-2.0, 1.0, 3.0}) {
      const ModelConstants c = make_constants(R0, 1.0, 1.0, gamma);
      const Vec3 p = momentum(circle, c);
      const Vec3 oracle = impulse_direct(reconstruct_curve(circle, Vec3(0.3, -1.0, 2.0), c), c);
      const double expected = kPi * R0 * R0 * std::abs(gamma);
      worst_scale = std::max(worst_scale, std::abs(p.norm() - expected) / expected);
      worst_oracle = std::max(worst_oracle, (p - oracle).norm() / expected);
    }
  r.pass = probe.momentum_ok && worst_scale <= 1e-9 && worst_oracle <= 1e-9;
  r.measured = "|p-(0,0,pi)| = " + sci(probe.momentum_error) + ", scaling rel = " +
               sci(worst_scale) + ", oracle rel = " + sci(worst_oracle);
  return r;
}

CriterionResult constraint_algebra(const Sizes &sz) {
  CriterionResult r{3, "first-class constraint algebra", false, {}, 0.0, 0.0};
  const Eigen::Index n = 64;
  const ModelConstants c = make_constants(1.0, 1.0, 1.0, 1.0);
  std::mt19937_64 rng(20240603);

  double closure = 0.0;
  bool closure_ok = true;
  for (int k = 0; k < sz.random_fields; ++k) {
    const SpinField field = random_raw_field(n, rng, 0.4);
    const AlgebraReport rep = check_first_class(field, Vec3::Zero(), c);
    closure = std::max(closure, rep.su2_closure.value);
    closure_ok = closure_ok && rep.su2_closure.pass();
  }

  double admissible = 0.0;
  bool admissible_ok = true;
  std::vector<SpinField> fields{make_scenario_field("circle", {}, n)};
  for (int k = 0; k < sz.admissible_fields; ++k)
    fields.push_back(random_admissible_field(n, rng));
  for (const SpinField &field : fields) {
    const Vec3 p = 2.0 * vector_f(field);
    const AlgebraReport rep = check_first_class(field, p, c);
    admissible = std::max({admissible, rep.phi_with_phi0.value / rep.scale,
                           rep.energy_with_constraints.value / rep.scale});
    admissible_ok = admissible_ok && rep.pass();
  }

  const SpinField control_field = fields.back();
  const Vec3 f = vector_f(control_field);
  // p at 45 degrees to f: perpendicular p is an extremum of Phi0 and
  // would cancel too
  const Vec3 oblique = 2.0 * (f + f.unitOrthogonal() * f.norm());
  const AlgebraReport control = check_first_class(control_field, oblique, c);
  const double control_rel = control.phi_with_phi0.value / control.scale;

  r.pass = closure_ok && admissible_ok && control_rel > 1e-4;
  r.measured = "su2 closure = " + sci(closure) + ", admissible/scale = " + sci(admissible) +
               ", control/scale = " + sci(control_rel);
  return r;
}

CriterionResult hamiltonian_flow(const Sizes &sz) {
  CriterionResult r{4, "bracket flow parallel to j x j'' (kappa surfaced)", false, {}, 0.0, 0.0};
  const ModelConstants c = make_constants(1.0, 1.0, 1.0, 1.0);
  const SpinField kelvin = make_scenario_field("kelvin_perturbed", {3, 0.05}, sz.n);
  const FlowReport nominal = check_hamiltonian_flow(kelvin, c);
  const FlowReport adjusted = check_hamiltonian_flow(kelvin, c, -kPi / (c.E0 * c.t0));
  const double a = 1.0 / std::sqrt(2.0);
  const SpinField off = sample_field(sz.n, [a](double x) {
    return Vec3(a * std::cos(x), a * std::sin(x), a);
  });
  const FlowReport relaxed = check_hamiltonian_flow(off, c, std::nullopt, true);

  const double kappa_err = std::abs(nominal.kappa - 2.0 / kPi);
  const double override_err = std::abs(adjusted.kappa - 1.0);
  const double residual =
      std::max({nominal.fit_residual, adjusted.fit_residual, relaxed.fit_residual});
  r.pass = residual <= 1e-6 && kappa_err <= 1e-6 && override_err <= 1e-6;
  char buf[160];
  std::snprintf(buf, sizeof buf, "kappa = %.10f (2/pi err %s), override kappa err %s, fit %s",
                nominal.kappa, sci(kappa_err).c_str(), sci(override_err).c_str(),
                sci(residual).c_str());
  r.measured = buf;
  return r;
}

CriterionResult conservation(const Sizes &sz) {
  CriterionResult r{5, "conservation under implicit midpoint", false, {}, 0.0, 0.0};
  const ModelConstants c = make_constants(1.0, 1.0, 1.0, 1.0);
  const SpinField kelvin = make_scenario_field("kelvin_perturbed", {3, 0.05}, sz.n);
  const double h = kelvin.step();
  const double dtau = 0.1 * h * h;
  const int steps = static_cast<int>(std::ceil(sz.tau_conservation / dtau));
  EvolveOptions opts;
  opts.monitor_every = std::max(1, steps / 50);
  const Trajectory traj = evolve(kelvin, dtau, steps, c, momentum(kelvin, c), opts);

  const InvariantReport &first = traj.reports.front();
  double energy = 0.0, phi = 0.0, fdrift = 0.0, unit = 0.0;
  for (const InvariantReport &rep : traj.reports) {
    energy = std::max(energy, std::abs(rep.spin_energy - first.spin_energy) / first.spin_energy);
    phi = std::max(phi, rep.phi.norm());
    fdrift = std::max(fdrift, (rep.f - first.f).norm() / first.f.norm());
    unit = std::max(unit, rep.unit_norm_res);
  }
  r.pass = energy <= 1e-8 && phi <= 1e-9 && fdrift <= 1e-7 && unit <= 1e-12;
  r.measured = std::to_string(steps) + " steps: energy " + sci(energy) + ", |Phi| " + sci(phi) +
               ", f " + sci(fdrift) + ", unit " + sci(unit);
  return r;
}

CriterionResult lie_equivalence(const Sizes &sz) {
  CriterionResult r{6, "local induction equivalence modulo uniform drift", false, {}, 0.0, 0.0};
  const ModelConstants c = make_constants(1.0, 1.0, 1.0, 1.0);
  const SpinField kelvin = make_scenario_field("kelvin_perturbed", {3, 0.05}, sz.n);
  const LieResidual wave = lie_residual(kelvin, c);
  const LieResidual ring = lie_residual(make_scenario_field("circle", {}, sz.n), c);
  const double ring_uniform = (ring.uniform_part + c.R0 * Vec3::UnitZ()).norm();

  const double h = kelvin.step();
  const double dtau = 0.1 * h * h;
  const int steps = static_cast<int>(std::ceil(sz.tau_curvature / dtau));
  const int half = steps / 2;
  SpinField state = kelvin;
  Samples curve = reconstruct_curve(kelvin, Vec3::Zero(), c).points;
  double curvature = 0.0;
  for (int leg : {half, steps - half}) {
    for (int k = 0; k < leg; ++k)
      state = step_implicit_midpoint(state, dtau);
    curve = evolve_curve_lia(curve, c.R0, dtau, leg);
    const Eigen::VectorXd from_spin = curvature_profile(reconstruct_curve(state, Vec3::Zero(), c));
    const Eigen::VectorXd from_lia = curvature_profile(curve, c.R0);
    curvature = std::max(curvature, (from_spin - from_lia).cwiseAbs().maxCoeff());
  }

  r.pass = wave.nonuniform_norm <= 1e-6 * c.R0 && ring.nonuniform_norm <= 1e-12 &&
           ring_uniform <= 1e-12 && curvature <= 1e-6;
  r.measured = "kelvin nonuniform " + sci(wave.nonuniform_norm) + ", ring nonuniform " +
               sci(ring.nonuniform_norm) + ", ring uniform err " + sci(ring_uniform) +
               ", curvature " + sci(curvature);
  return r;
}

CriterionResult bijection(const Sizes &sz) {
  CriterionResult r{7, "A <-> Omega bijection", false, {}, 0.0, 0.0};
  const ModelConstants c = make_constants(1.3, 0.8, 1.7, 1.0);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> pos(-5.0, 5.0);
  double worst = 0.0;
  bool rejects = true;
  for (int k = 0; k < sz.bijection_points; ++k) {
    double gamma = 0.0;
    while (std::abs(gamma) < 1e-3)
      gamma = pos(rng);
    const ClassicalPoint a{Vec3(pos(rng), pos(rng), pos(rng)), gamma,
                           random_admissible_field(64, rng)};
    for (double tau : {0.0, 0.7, -3.0}) {
      const PhasePoint w = to_omega(a, tau, c);
      const ClassicalPoint back = from_omega(w, tau, c);
      worst = std::max({worst, (back.z0 - a.z0).norm() / std::max(1.0, a.z0.norm()),
                        std::abs(back.gamma - a.gamma) / std::abs(a.gamma),
                        (back.field.samples() - a.field.samples()).cwiseAbs().maxCoeff()});
    }
    const PhasePoint w = to_omega(a, 0.0, c);
    const PhasePoint bad{w.q, w.p + 1e-3 * w.p.norm() * w.p.unitOrthogonal(), w.field};
    try {
      from_omega(bad, 0.0, c);
      rejects = false;
    } catch (const NotInOmega &) {
    }
  }
  r.pass = worst <= 1e-10 && rejects;
  r.measured = "roundtrip rel " + sci(worst) + (rejects ? ", violators rejected" : ", violator accepted");
  return r;
}

CriterionResult effective_mass(const Sizes &sz) {
  CriterionResult r{8, "effective-mass tensor", false, {}, 0.0, 0.0};
  const ModelConstants c = make_constants(1.0, 2.0, 1.0, 1.0);
  const SpinField field = make_scenario_field("kelvin_perturbed", {3, 0.05}, sz.n);
  const Vec3 f = vector_f(field);
  const Vec3 n = f.normalized();
  const Mat3 inv = effective_mass_inverse(field, c);

  Eigen::SelfAdjointEigenSolver<Mat3> eig(inv);
  const Eigen::Vector3d vals = eig.eigenvalues();
  const double eig_err = std::max({std::abs(vals[0]), std::abs(vals[1]),
                                   std::abs(vals[2] - 1.0 / c.m0)});
  const double axis_err = eig.eigenvectors().col(2).cross(n).norm();

  const Vec3 p(3.0, -2.0, 5.0);
  const double step = 1e-4 * p.norm();
  const double spin = spin_energy(field);
  const auto E = [&](const Vec3 &q) { return energy_restricted(q, f, spin, c); };
  Mat3 hess;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      const Vec3 ei = step * Vec3::Unit(i);
      const Vec3 ek = step * Vec3::Unit(k);
      hess(i, k) = (E(p + ei + ek) - E(p + ei - ek) - E(p - ei + ek) + E(p - ei - ek)) /
                   (4.0 * step * step);
    }
  const double fd_err = (hess - inv).cwiseAbs().maxCoeff();
  r.pass = eig_err <= 1e-12 && axis_err <= 1e-12 && fd_err <= 1e-8;
  r.measured = "eigen err " + sci(eig_err) + ", axis err " + sci(axis_err) + ", FD Hessian err " +
               sci(fd_err);
  return r;
}

CriterionResult fast_path(const Sizes &sz) {
  CriterionResult r{9, "O(N log N) f matches the O(N^2) reference", false, {}, 0.0, 0.0};
  std::mt19937_64 rng(99);
  double worst = 0.0;
  for (Eigen::Index n : sz.fast_sizes) {
    const SpinField field = random_admissible_field(n, rng);
    const Vec3 fast = vector_f(field, FMethod::Fast);
    const Vec3 ref = vector_f(field, FMethod::Reference);
    worst = std::max(worst, (fast - ref).norm() / ref.norm());
  }
  const SpinField big = random_admissible_field(sz.speed_size, rng);
  vector_f(big, FMethod::Fast); // warm the FFT plan
  double fast_time = 1e300;
  for (int k = 0; k < 5; ++k) {
    const auto t = Clock::now();
    vector_f(big, FMethod::Fast);
    fast_time = std::min(fast_time, seconds_since(t));
  }
  const auto t = Clock::now();
  vector_f(big, FMethod::Reference);
  const double ref_time = seconds_since(t);
  const double speedup = ref_time / fast_time;
  r.pass = worst <= 1e-12 && speedup >= 20.0;
  r.measured = "max rel diff " + sci(worst) + ", speedup at N=" + std::to_string(sz.speed_size) +
               " = " + sci(speedup) + "x";
  return r;
}

CriterionResult convention_mutation(const Sizes &sz) {
  CriterionResult r{10, "truncation kernel is caught by the convention oracles", false, {}, 0.0, 0.0};
  const ConventionProbe floor = probe_kernel_convention(KernelConvention::Floor, sz.n);
  const ConventionProbe trunc = probe_kernel_convention(KernelConvention::Truncate, sz.n);
  const bool floor_ok = floor.momentum_ok && floor.tangent_ok && floor.closure_ok;
  const bool trunc_caught = !trunc.momentum_ok && !trunc.tangent_ok && !trunc.closure_ok;
  r.pass = floor_ok && trunc_caught;
  r.measured = "truncate: momentum err " + sci(trunc.momentum_error) + ", tangent " +
               sci(trunc.tangent_residual) + ", closure err " + sci(trunc.closure_error);
  return r;
}

const std::array<double, 10> kBudgets{0.1, 1.0, 10.0, 5.0, 60.0, 90.0, 5.0, 1.0, 10.0, 5.0};

} // namespace

Mat3 random_rotation(std::mt19937_64 &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Quaterniond q(normal(rng), normal(rng), normal(rng), normal(rng));
  q.normalize();
  return q.toRotationMatrix();
}

SpinField random_raw_field(Eigen::Index n, std::mt19937_64 &rng, double amplitude,
                           int max_mode) {
  return random_field_impl(n, rng, amplitude, max_mode);
}

SpinField random_admissible_field(Eigen::Index n, std::mt19937_64 &rng, double amplitude,
                                  int max_mode) {
  for (;;) {
    try {
      return project_to_constraints(random_field_impl(n, rng, amplitude, max_mode), 1e-13, 500);
    } catch (const std::runtime_error &) {
      // unlucky draw, try the next one
    }
  }
}

double nyquist_amplitude(const SpinField &field) {
  const Samples &s = field.samples();
  double worst = 0.0;
  for (int c = 0; c < 3; ++c) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < s.rows(); ++i)
      sum += (i % 2 ? -1.0 : 1.0) * s(i, c);
    worst = std::max(worst, std::abs(sum) / static_cast<double>(s.rows()));
  }
  return worst;
}

SpinField random_resolved_field(Eigen::Index n, std::mt19937_64 &rng, double max_nyquist) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    SpinField f = random_admissible_field(n, rng, 0.1, 4);
    if (nyquist_amplitude(f) <= max_nyquist)
      return f;
  }
  throw ConvergenceError("no resolved random field at this grid size", max_nyquist);
}

ConventionProbe probe_kernel_convention(KernelConvention conv, Eigen::Index n) {
  ConventionProbe out;
  const ModelConstants c = make_constants(1.0, 1.0, 1.0, 1.0);
  const SpinField circle = make_scenario_field("circle", {}, n);

  const Vec3 p = static_cast<double>(c.sigma) * c.R0 * c.R0 * c.gamma *
                 vector_f(circle, FMethod::Fast, conv);
  const Vec3 p_ref = static_cast<double>(c.sigma) * c.R0 * c.R0 * c.gamma *
                     vector_f(circle, FMethod::Reference, conv);
  const FilamentCurve ring = reconstruct_curve(circle, Vec3::Zero(), c, conv);
  out.momentum_error = std::max((p - kPi * Vec3::UnitZ()).norm(), (p_ref - p).norm());
  double oracle_error = 0.0;
  try {
    oracle_error = (p - impulse_direct(ring, c)).norm();
  } catch (const InapplicableOracle &) {
    oracle_error = 1e300;
  }
  out.momentum_ok = out.momentum_error <= 1e-9 && oracle_error <= 1e-9;

  out.tangent_residual = tangent_residual(ring, circle);
  out.tangent_ok = out.tangent_residual <= 1e-10 * c.R0;

  const SpinField tilted = make_scenario_field("tilted_constant", {}, n);
  const double tilted_closure =
      closure_residual(reconstruct_curve(tilted, Vec3::Zero(), c, conv));
  out.closure_error = std::max(std::abs(tilted_closure - kTwoPi * c.R0), closure_residual(ring));
  out.closure_ok = out.closure_error <= 1e-12;
  return out;
}

CriterionResult run_criterion(int id, VerifyLevel level) {
  using Fn = CriterionResult (*)(const Sizes &);
  static const std::array<Fn, 10> table{reference_energy, ring_impulse,      constraint_algebra,
                                        hamiltonian_flow, conservation,      lie_equivalence,
                                        bijection,        effective_mass,    fast_path,
                                        convention_mutation};
  if (id < 1 || id > 10)
    throw InvalidArgument("criterion id must be in 1..10");
  const Sizes sz = sizes_for(level);
  const auto start = Clock::now();
  CriterionResult r;
  try {
    r = table[static_cast<std::size_t>(id - 1)](sz);
  } catch (const std::exception &e) {
    r.id = id;
    r.name = "criterion " + std::to_string(id);
    r.pass = false;
    r.measured = std::string("error: ") + e.what();
  }
  r.seconds = seconds_since(start);
  r.budget_seconds = kBudgets[static_cast<std::size_t>(id - 1)];
#ifdef NDEBUG
  if (level == VerifyLevel::Full && r.seconds > r.budget_seconds) {
    r.pass = false;
    r.measured += " [over runtime budget]";
  }
#endif
  return r;
}

std::vector<CriterionResult> run_verification(VerifyLevel level) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 10; ++id)
    out.push_back(run_criterion(id, level));
  return out;
}

std::string format_table(const std::vector<CriterionResult> &results) {
  std::ostringstream out;
  for (const CriterionResult &r : results) {
    char head[128];
    std::snprintf(head, sizeof head, "[%s] %2d  %-62s %7.2fs  ", r.pass ? "PASS" : "FAIL", r.id,
                  r.name.c_str(), r.seconds);
    out << head << r.measured << '\n';
  }
  return out.str();
}

} // namespace filament
