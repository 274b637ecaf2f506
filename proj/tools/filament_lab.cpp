// filament_lab: command-line front end for the spin-chain filament model.
//
// Exit codes: 0 ok, 2 config/input error, 3 numerical abort, 4 degenerate geometry.

#include "filament/bracket.hpp"
#include "filament/dynamics.hpp"
#include "filament/error.hpp"
#include "filament/invariants.hpp"
#include "filament/io.hpp"
#include "filament/phase_space.hpp"
#include "filament/reconstruction.hpp"
#include "filament/verify.hpp"

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include <algorithm>
#include <fstream>
#include <iostream>

using namespace filament;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumerical = 3, kDegenerate = 4 };

struct ConstantFlags {
  double R0 = 1.0, m0 = 1.0, t0 = 1.0, gamma = 1.0;
  int sigma = -1;

  void attach(CLI::App *app) {
    app->add_option("--R0", R0, "length scale");
    app->add_option("--m0", m0, "mass scale");
    app->add_option("--t0", t0, "time scale");
    app->add_option("--gamma", gamma, "circulation");
    app->add_option("--sigma", sigma, "momentum sign convention (+1/-1)");
  }
  ModelConstants make() const { return make_constants(R0, m0, t0, gamma, sigma); }
};

std::ofstream open_or_throw(const std::string &path) {
  std::ofstream out(path);
  if (!out)
    throw InvalidArgument("cannot open '" + path + "' for writing");
  return out;
}

void write_curve(const FilamentCurve &curve, const std::string &path, const std::string &format) {
  auto out = open_or_throw(path);
  if (format == "csv")
    write_curve_csv(out, curve);
  else if (format == "obj")
    write_curve_obj(out, curve);
  else if (format == "svg")
    write_curve_svg(out, curve);
  else
    throw InvalidArgument("unknown curve format '" + format + "'");
}

void write_outputs(const RunConfig &cfg, const Trajectory &traj, bool aborted,
                   const std::string &message) {
  if (!cfg.drift_csv.empty()) {
    auto out = open_or_throw(cfg.drift_csv);
    write_drift_csv(out, traj);
  }
  if (traj.states.empty())
    return;
  const SpinField &last = traj.states.back();
  const double tau = traj.times.back();
  if (!cfg.field_csv.empty())
    write_field_csv(cfg.field_csv, last);

  const Vec3 q0 = cfg.constants.m0 * cfg.basepoint;
  const FilamentCurve curve =
      reconstruct_from_phase(PhasePoint{q0, traj.p, last}, tau, cfg.constants);
  if (!cfg.curve_csv.empty())
    write_curve(curve, cfg.curve_csv, "csv");
  if (!cfg.curve_obj.empty())
    write_curve(curve, cfg.curve_obj, "obj");
  if (!cfg.curve_svg.empty())
    write_curve(curve, cfg.curve_svg, "svg");

  if (!cfg.report_json.empty()) {
    json doc = to_json(traj.reports.back());
    doc["tau"] = tau;
    doc["aborted"] = aborted;
    if (aborted)
      doc["message"] = message;
    doc["constants"] = to_json(cfg.constants);
    try {
      doc["flow"] = to_json(check_hamiltonian_flow(last, cfg.constants, cfg.beta_override, true));
    } catch (const InapplicableOracle &) {
      doc["flow"] = nullptr;
    }
    auto out = open_or_throw(cfg.report_json);
    out << doc.dump(2) << '\n';
  }
}

int cmd_simulate(const std::string &config_path) {
  RunConfig cfg;
  SpinField initial = make_scenario_field("circle", {}, 8);
  Vec3 p;
  try {
    cfg = load_run_config(config_path);
    initial = cfg.field_csv_in.empty() ? make_scenario_field(cfg.scenario, cfg.params, cfg.n)
                                       : read_field_csv(cfg.field_csv_in);
  } catch (const InvalidArgument &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::runtime_error &e) {
    std::cerr << "numerical error preparing the initial field: " << e.what() << '\n';
    return kNumerical;
  }
  try {
    p = to_omega(ClassicalPoint{cfg.basepoint, cfg.constants.gamma, initial}, 0.0, cfg.constants).p;
  } catch (const DegenerateError &e) {
    std::cerr << "degenerate initial field: " << e.what() << '\n';
    return kDegenerate;
  }

  EvolveOptions opts;
  opts.integrator = cfg.integrator;
  opts.monitor_every = cfg.monitor_every;
  opts.tol = cfg.tol;
  opts.max_iter = cfg.max_iter;
  opts.field_tol = cfg.field_tol;
  try {
    const Trajectory traj = evolve(initial, cfg.dtau, cfg.n_steps, cfg.constants, p, opts);
    write_outputs(cfg, traj, false, {});
  } catch (const EvolutionAborted &e) {
    std::cerr << e.what() << '\n';
    write_outputs(cfg, e.partial(), true, e.what());
    return kNumerical;
  } catch (const InvalidArgument &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
  return kOk;
}

int cmd_invariants(const std::string &field_path, const ConstantFlags &flags,
                   const std::string &p_text, bool restricted) {
  SpinField field = make_scenario_field("circle", {}, 8);
  ModelConstants c;
  std::optional<Vec3> p;
  try {
    c = flags.make();
    field = read_field_csv(field_path);
    if (!p_text.empty())
      p = parse_vec3(p_text);
  } catch (const InvalidArgument &e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kConfig;
  }

  const Vec3 f = vector_f(field);
  const bool degenerate = !(f.norm() > kDegenerateF);
  if (degenerate && restricted) {
    std::cerr << "degenerate direction: |f| = " << f.norm()
              << ", the restricted energy and mass tensor are undefined\n";
    return kDegenerate;
  }
  if (!p)
    p = degenerate ? Vec3::Zero() : to_omega(ClassicalPoint{Vec3::Zero(), c.gamma, field}, 0.0, c).p;

  json doc = to_json(make_report(field, *p, c));
  doc["constants"] = to_json(c);
  std::cout << doc.dump(2) << '\n';
  return kOk;
}

int cmd_export_curve(const std::string &field_path, const ConstantFlags &flags,
                     const std::string &basepoint, const std::string &out_path,
                     const std::string &format) {
  try {
    const ModelConstants c = flags.make();
    const SpinField field = read_field_csv(field_path);
    const Vec3 base = basepoint.empty() ? Vec3::Zero() : parse_vec3(basepoint);
    write_curve(reconstruct_curve(field, base, c), out_path, format);
  } catch (const InvalidArgument &e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kConfig;
  }
  return kOk;
}

int cmd_verify(const std::string &level) {
  const VerifyLevel lv = level == "full" ? VerifyLevel::Full : VerifyLevel::Quick;
  std::vector<CriterionResult> results;
  for (int id = 1; id <= 10; ++id) {
    results.push_back(run_criterion(id, lv));
    std::cout << format_table({results.back()}) << std::flush;
  }
  const auto passed = std::count_if(results.begin(), results.end(),
                                    [](const CriterionResult &r) { return r.pass; });
  std::cout << passed << "/" << results.size() << " criteria passed\n";
  return passed == static_cast<long>(results.size()) ? kOk : 1;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Structure-preserving laboratory for closed vortex filaments"};
  app.require_subcommand(1);

  std::string config_path;
  auto *simulate = app.add_subcommand("simulate", "evolve a configured scenario");
  simulate->add_option("config", config_path, "run configuration (JSON)")->required();

  std::string field_path, p_text;
  bool restricted = false;
  ConstantFlags inv_flags;
  auto *invariants = app.add_subcommand("invariants", "report invariants of a field CSV");
  invariants->add_option("field", field_path, "field CSV")->required();
  invariants->add_option("--p", p_text, "momentum as x,y,z (default: from the circulation)");
  invariants->add_flag("--restricted", restricted,
                       "require the restricted energy (exit 4 if undefined)");
  inv_flags.attach(invariants);

  std::string level = "quick";
  auto *verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--level", level, "quick or full")
      ->check(CLI::IsMember({"quick", "full"}));

  std::string export_field, basepoint, out_path, format = "csv";
  ConstantFlags export_flags;
  auto *exporter = app.add_subcommand("export-curve", "reconstruct and export the curve");
  exporter->add_option("field", export_field, "field CSV")->required();
  exporter->add_option("--basepoint", basepoint, "basepoint x,y,z");
  exporter->add_option("--out", out_path, "output path")->required();
  exporter->add_option("--format", format, "csv, obj or svg")
      ->check(CLI::IsMember({"csv", "obj", "svg"}));
  export_flags.attach(exporter);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*simulate)
      return cmd_simulate(config_path);
    if (*invariants)
      return cmd_invariants(field_path, inv_flags, p_text, restricted);
    if (*exporter)
      return cmd_export_curve(export_field, export_flags, basepoint, out_path, format);
    if (*verify)
      return cmd_verify(level);
  } catch (const DegenerateError &e) {
    std::cerr << "degenerate: " << e.what() << '\n';
    return kDegenerate;
  } catch (const InvalidArgument &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::runtime_error &e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}
