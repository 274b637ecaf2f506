#include "filament/bracket.hpp"
#include "filament/dynamics.hpp"
#include "filament/error.hpp"
#include "filament/invariants.hpp"
#include "filament/phase_space.hpp"
#include "filament/reconstruction.hpp"
#include "filament/verify.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace pybind11::literals;
using namespace filament;

namespace {

SpinField field_from(const Samples &samples) { return SpinField(samples); }

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Closed vortex filament as a periodic continuous Heisenberg spin chain";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<DegenerateError>(m, "DegenerateError", PyExc_ArithmeticError);
  py::register_exception<NotInOmega>(m, "NotInOmega", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  py::class_<ModelConstants>(m, "ModelConstants")
      .def(py::init(&make_constants), "R0"_a = 1.0, "m0"_a = 1.0, "t0"_a = 1.0,
           "gamma"_a = 1.0, "sigma"_a = -1)
      .def_readonly("R0", &ModelConstants::R0)
      .def_readonly("m0", &ModelConstants::m0)
      .def_readonly("t0", &ModelConstants::t0)
      .def_readonly("gamma", &ModelConstants::gamma)
      .def_readonly("E0", &ModelConstants::E0)
      .def_readonly("beta", &ModelConstants::beta)
      .def_readonly("sigma", &ModelConstants::sigma);

  // Fields cross the boundary as (N, 3) float arrays.
  m.def("scenario_field",
        [](const std::string &kind, Eigen::Index n, int mode, double eps) {
          return make_scenario_field(kind, {mode, eps}, n).samples();
        },
        "kind"_a, "n"_a, "mode"_a = 1, "eps"_a = 0.0);
  m.def("derivative",
        [](const Samples &j, int order, bool fd4) {
          return derivative(j, order, fd4 ? DerivativeMethod::Fd4 : DerivativeMethod::Spectral);
        },
        "samples"_a, "order"_a = 1, "fd4"_a = false);
  m.def("residual_unit_norm", [](const Samples &j) { return residual_unit_norm(field_from(j)); });
  m.def("residual_zero_mean", [](const Samples &j) { return residual_zero_mean(field_from(j)); });
  m.def("project_to_constraints",
        [](const Samples &j, double tol, int max_iter) {
          return project_to_constraints(field_from(j), tol, max_iter).samples();
        },
        "samples"_a, "tol"_a = 1e-12, "max_iter"_a = 200);
  m.def("spin_energy", [](const Samples &j) { return spin_energy(field_from(j)); });

  m.def("kernel_value", [](double x) { return kernel_value(x); });
  m.def("reconstruct_curve",
        [](const Samples &j, const Vec3 &basepoint, const ModelConstants &c) {
          return reconstruct_curve(field_from(j), basepoint, c).points;
        },
        "samples"_a, "basepoint"_a, "constants"_a);
  m.def("closure_residual", [](const Samples &j, const ModelConstants &c) {
    return closure_residual(reconstruct_curve(field_from(j), Vec3::Zero(), c));
  });
  m.def("curvature_profile", [](const Samples &points, double R0) {
    return curvature_profile(points, R0);
  });

  m.def("rhs_spin", [](const Samples &j) { return rhs_spin(j); });
  m.def("step_implicit_midpoint",
        [](const Samples &j, double dtau, double tol, int max_iter) {
          return step_implicit_midpoint(field_from(j), dtau, tol, max_iter).samples();
        },
        "samples"_a, "dtau"_a, "tol"_a = 1e-14, "max_iter"_a = 100);
  m.def("step_rk4_projected", [](const Samples &j, double dtau) {
    return step_rk4_projected(field_from(j), dtau).samples();
  });
  m.def("lie_residual", [](const Samples &j, const ModelConstants &c) {
    const LieResidual r = lie_residual(field_from(j), c);
    return py::make_tuple(r.uniform_part, r.nonuniform_norm);
  });

  m.def("vector_f",
        [](const Samples &j, bool reference) {
          return vector_f(field_from(j), reference ? FMethod::Reference : FMethod::Fast);
        },
        "samples"_a, "reference"_a = false);
  m.def("momentum", [](const Samples &j, const ModelConstants &c) { return momentum(field_from(j), c); });
  m.def("hamiltonian_H0", [](const Vec3 &p, const Samples &j, const ModelConstants &c) {
    return hamiltonian_H0(p, field_from(j), c);
  });
  m.def("energy_restricted", [](const Vec3 &p, const Samples &j, const ModelConstants &c) {
    return energy_restricted(p, field_from(j), c);
  });
  m.def("effective_mass_inverse", [](const Samples &j, const ModelConstants &c) {
    return effective_mass_inverse(field_from(j), c);
  });
  m.def("constraint_phi0", [](const Vec3 &p, const Samples &j) {
    return constraint_phi0(p, field_from(j));
  });

  m.def("to_omega",
        [](const Vec3 &z0, double gamma, const Samples &j, double tau, const ModelConstants &c) {
          const PhasePoint w = to_omega(ClassicalPoint{z0, gamma, field_from(j)}, tau, c);
          return py::make_tuple(w.q, w.p);
        },
        "z0"_a, "gamma"_a, "samples"_a, "tau"_a, "constants"_a);
  m.def("from_omega",
        [](const Vec3 &q, const Vec3 &p, const Samples &j, double tau, const ModelConstants &c) {
          const ClassicalPoint a = from_omega(PhasePoint{q, p, field_from(j)}, tau, c);
          return py::make_tuple(a.z0, a.gamma);
        },
        "q"_a, "p"_a, "samples"_a, "tau"_a, "constants"_a);

  m.def("check_hamiltonian_flow",
        [](const Samples &j, const ModelConstants &c, std::optional<double> beta) {
          const FlowReport r = check_hamiltonian_flow(field_from(j), c, beta, true);
          return py::dict("kappa"_a = r.kappa, "fit_residual"_a = r.fit_residual,
                          "beta_used"_a = r.beta_used);
        },
        "samples"_a, "constants"_a, "beta_override"_a = py::none());

  m.def("verify",
        [](const std::string &level) {
          py::list rows;
          for (const CriterionResult &r :
               run_verification(level == "full" ? VerifyLevel::Full : VerifyLevel::Quick))
            rows.append(py::dict("id"_a = r.id, "name"_a = r.name, "pass"_a = r.pass,
                                 "measured"_a = r.measured, "seconds"_a = r.seconds));
          return rows;
        },
        "level"_a = "quick");
}
