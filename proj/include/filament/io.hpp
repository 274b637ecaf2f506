#pragma once

#include "filament/bracket.hpp"
#include "filament/dynamics.hpp"
#include "filament/invariants.hpp"
#include "filament/phase_point.hpp"
#include "filament/reconstruction.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <optional>
#include <string>

namespace filament {

// Field CSV: header "xi,j1,j2,j3", N rows, 17 significant digits.
void write_field_csv(std::ostream &out, const SpinField &field);
void write_field_csv(const std::string &path, const SpinField &field);
SpinField read_field_csv(std::istream &in);
SpinField read_field_csv(const std::string &path);

// Curve CSV: header "xi,z1,z2,z3".
void write_curve_csv(std::ostream &out, const FilamentCurve &curve);
// "v x y z" per node followed by one closed "l" record.
void write_curve_obj(std::ostream &out, const FilamentCurve &curve);
// Static SVG with the xy, yz and xz projections side by side.
void write_curve_svg(std::ostream &out, const FilamentCurve &curve);

// tau,unit_norm_res,phi_norm,spin_energy,f1,f2,f3,H0,E_restricted
void write_drift_csv(std::ostream &out, const Trajectory &trajectory);

nlohmann::json to_json(const InvariantReport &report);
nlohmann::json to_json(const AlgebraReport &report);
nlohmann::json to_json(const FlowReport &report);
nlohmann::json to_json(const ModelConstants &constants);

// {q, p, field} / {z0, gamma, field}; field is inline as [[j1,j2,j3], ...]
// or a path to a field CSV.
nlohmann::json to_json(const PhasePoint &point);
nlohmann::json to_json(const ClassicalPoint &point);
PhasePoint phase_point_from_json(const nlohmann::json &j);
ClassicalPoint classical_point_from_json(const nlohmann::json &j);

// "x,y,z"
Vec3 parse_vec3(const std::string &text);

struct RunConfig {
  ModelConstants constants;
  Eigen::Index n = 256;
  std::string scenario = "kelvin_perturbed";
  ScenarioParams params{3, 0.05};
  Vec3 basepoint = Vec3::Zero();
  std::string field_csv_in;  // optional: load the initial field instead
  Integrator integrator = Integrator::ImplicitMidpoint;
  double dtau = 0.0;         // 0: default_dtau(n)
  int n_steps = 100;
  int monitor_every = 0;
  double tol = 1e-14;
  int max_iter = 100;
  FieldTolerances field_tol{};
  std::string drift_csv, field_csv, curve_csv, report_json, curve_obj, curve_svg;
  std::optional<double> beta_override;
};

// Throws InvalidArgument with a message naming the offending entry.
RunConfig parse_run_config(const nlohmann::json &doc);
RunConfig load_run_config(const std::string &path);

} // namespace filament
