#include "filament/io.hpp"

#include "filament/error.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

namespace filament {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string &path) {
  std::ofstream out(path);
  if (!out)
    throw InvalidArgument("cannot open '" + path + "' for writing");
  return out;
}

std::vector<std::string> split(const std::string &line, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep))
    parts.push_back(item);
  if (!line.empty() && line.back() == sep)
    parts.emplace_back();
  return parts;
}

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string &text, const std::string &context) {
  const std::string t = trim(text);
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size())
      throw std::invalid_argument(t);
    return v;
  } catch (const std::exception &) {
    throw InvalidArgument("malformed number '" + t + "' in " + context);
  }
}

void write_samples_csv(std::ostream &out, const Samples &s, const char *header) {
  out << header << '\n';
  const double h = grid_step(s.rows());
  for (Eigen::Index i = 0; i < s.rows(); ++i)
    out << fmt(h * static_cast<double>(i)) << ',' << fmt(s(i, 0)) << ',' << fmt(s(i, 1))
        << ',' << fmt(s(i, 2)) << '\n';
}

json vec_json(const Vec3 &v) { return json::array({v[0], v[1], v[2]}); }

Vec3 vec_from_json(const json &j, const std::string &key) {
  if (!j.is_array() || j.size() != 3)
    throw InvalidArgument("'" + key + "' must be an array of three numbers");
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_number())
      throw InvalidArgument("'" + key + "' must be an array of three numbers");
    v[i] = j[i].get<double>();
  }
  return v;
}

json nullable(const std::optional<double> &v) { return v ? json(*v) : json(nullptr); }

SpinField field_from_json(const json &j) {
  if (j.is_string())
    return read_field_csv(j.get<std::string>());
  if (!j.is_array())
    throw InvalidArgument("'field' must be a CSV path or an array of samples");
  Samples s(static_cast<Eigen::Index>(j.size()), 3);
  for (std::size_t i = 0; i < j.size(); ++i)
    s.row(static_cast<Eigen::Index>(i)) = vec_from_json(j[i], "field").transpose();
  return SpinField(std::move(s));
}

json field_json(const SpinField &field) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < field.size(); ++i)
    rows.push_back(vec_json(field[i]));
  return rows;
}

} // namespace

void write_field_csv(std::ostream &out, const SpinField &field) {
  write_samples_csv(out, field.samples(), "xi,j1,j2,j3");
}

void write_field_csv(const std::string &path, const SpinField &field) {
  auto out = open_out(path);
  write_field_csv(out, field);
}

SpinField read_field_csv(std::istream &in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "xi,j1,j2,j3")
    throw InvalidArgument("field CSV must start with the header 'xi,j1,j2,j3'");
  std::vector<Vec3> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty())
      continue;
    const auto parts = split(line, ',');
    const std::string where = "field CSV line " + std::to_string(lineno);
    if (parts.size() != 4)
      throw InvalidArgument(where + " must have 4 columns");
    parse_number(parts[0], where);
    rows.emplace_back(parse_number(parts[1], where), parse_number(parts[2], where),
                      parse_number(parts[3], where));
  }
  Samples s(static_cast<Eigen::Index>(rows.size()), 3);
  for (std::size_t i = 0; i < rows.size(); ++i)
    s.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  return SpinField(std::move(s));
}

SpinField read_field_csv(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw InvalidArgument("cannot open field CSV '" + path + "'");
  return read_field_csv(in);
}

void write_curve_csv(std::ostream &out, const FilamentCurve &curve) {
  write_samples_csv(out, curve.points, "xi,z1,z2,z3");
}

void write_curve_obj(std::ostream &out, const FilamentCurve &curve) {
  for (Eigen::Index i = 0; i < curve.size(); ++i)
    out << "v " << fmt(curve.points(i, 0)) << ' ' << fmt(curve.points(i, 1)) << ' '
        << fmt(curve.points(i, 2)) << '\n';
  out << 'l';
  for (Eigen::Index i = 0; i < curve.size(); ++i)
    out << ' ' << i + 1;
  out << " 1\n";
}

void write_curve_svg(std::ostream &out, const FilamentCurve &curve) {
  constexpr double panel = 300.0;
  constexpr double margin = 20.0;
  const std::array<std::array<int, 2>, 3> axes{{{0, 1}, {1, 2}, {0, 2}}};
  const std::array<const char *, 3> labels{"x-y", "y-z", "x-z"};
  const Eigen::RowVector3d lo = curve.points.colwise().minCoeff();
  const Eigen::RowVector3d hi = curve.points.colwise().maxCoeff();
  const double span = std::max((hi - lo).maxCoeff(), 1e-300);

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 3 * panel
      << "\" height=\"" << panel + margin << "\">\n";
  for (std::size_t k = 0; k < axes.size(); ++k) {
    const double x0 = static_cast<double>(k) * panel;
    const auto [a, b] = axes[k];
    out << "  <text x=\"" << x0 + margin << "\" y=\"" << margin - 5 << "\">" << labels[k]
        << "</text>\n  <polygon fill=\"none\" stroke=\"black\" points=\"";
    for (Eigen::Index i = 0; i < curve.size(); ++i) {
      const double u = x0 + margin + (curve.points(i, a) - lo[a]) / span * (panel - 2 * margin);
      const double v = panel - (curve.points(i, b) - lo[b]) / span * (panel - 2 * margin);
      out << (i ? " " : "") << fmt(u) << ',' << fmt(v);
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

void write_drift_csv(std::ostream &out, const Trajectory &trajectory) {
  out << "tau,unit_norm_res,phi_norm,spin_energy,f1,f2,f3,H0,E_restricted\n";
  for (std::size_t k = 0; k < trajectory.reports.size(); ++k) {
    const InvariantReport &r = trajectory.reports[k];
    out << fmt(trajectory.times[k]) << ',' << fmt(r.unit_norm_res) << ','
        << fmt(r.phi.norm()) << ',' << fmt(r.spin_energy) << ',' << fmt(r.f[0]) << ','
        << fmt(r.f[1]) << ',' << fmt(r.f[2]) << ',' << fmt(r.H0) << ','
        << (r.E_restricted ? fmt(*r.E_restricted) : std::string("nan")) << '\n';
  }
}

json to_json(const InvariantReport &r) {
  json out;
  out["phi"] = vec_json(r.phi);
  out["unit_norm_res"] = r.unit_norm_res;
  out["f"] = vec_json(r.f);
  out["p"] = vec_json(r.p);
  out["s"] = r.s ? vec_json(*r.s) : json(nullptr);
  out["spin_energy"] = r.spin_energy;
  out["H0"] = r.H0;
  out["E_restricted"] = nullable(r.E_restricted);
  if (r.inv_mass) {
    json m = json::array();
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k)
        m.push_back((*r.inv_mass)(i, k));
    out["inv_mass"] = m;
  } else {
    out["inv_mass"] = nullptr;
  }
  out["phi0"] = r.phi0;
  out["degenerate_direction"] = r.degenerate_direction();
  return out;
}

json to_json(const AlgebraReport &r) {
  json ids;
  for (const CheckEntry *e : {&r.su2_closure, &r.phi_with_phi0, &r.energy_with_constraints})
    ids[e->name] = {{"value", e->value}, {"tolerance", e->tolerance}, {"pass", e->pass()}};
  return {{"identity_residuals", ids}, {"scale", r.scale}, {"beta_used", r.beta_used}};
}

json to_json(const FlowReport &r) {
  return {{"kappa", r.kappa}, {"fit_residual", r.fit_residual}, {"beta_used", r.beta_used}};
}

json to_json(const ModelConstants &c) {
  return {{"R0", c.R0}, {"m0", c.m0}, {"t0", c.t0}, {"gamma", c.gamma},
          {"sigma", c.sigma}, {"E0", c.E0}, {"beta", c.beta}};
}

json to_json(const PhasePoint &point) {
  return {{"q", vec_json(point.q)}, {"p", vec_json(point.p)}, {"field", field_json(point.field)}};
}

json to_json(const ClassicalPoint &point) {
  return {{"z0", vec_json(point.z0)}, {"gamma", point.gamma}, {"field", field_json(point.field)}};
}

PhasePoint phase_point_from_json(const json &j) {
  if (!j.contains("q") || !j.contains("p") || !j.contains("field"))
    throw InvalidArgument("phase point needs 'q', 'p' and 'field'");
  return PhasePoint{vec_from_json(j["q"], "q"), vec_from_json(j["p"], "p"),
                    field_from_json(j["field"])};
}

ClassicalPoint classical_point_from_json(const json &j) {
  if (!j.contains("z0") || !j.contains("gamma") || !j.contains("field"))
    throw InvalidArgument("classical point needs 'z0', 'gamma' and 'field'");
  if (!j["gamma"].is_number())
    throw InvalidArgument("'gamma' must be a number");
  return ClassicalPoint{vec_from_json(j["z0"], "z0"), j["gamma"].get<double>(),
                        field_from_json(j["field"])};
}

Vec3 parse_vec3(const std::string &text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3)
    throw InvalidArgument("expected three comma-separated numbers, got '" + text + "'");
  return {parse_number(parts[0], "vector"), parse_number(parts[1], "vector"),
          parse_number(parts[2], "vector")};
}

namespace {

template <typename T>
T get_or(const json &section, const char *key, T fallback, const std::string &where) {
  if (!section.contains(key) || section[key].is_null())
    return fallback;
  try {
    return section[key].get<T>();
  } catch (const json::exception &) {
    throw InvalidArgument("config entry '" + where + "." + key + "' has the wrong type");
  }
}

const json &section(const json &doc, const char *name) {
  static const json empty = json::object();
  if (!doc.contains(name))
    return empty;
  if (!doc[name].is_object())
    throw InvalidArgument(std::string("config section '") + name + "' must be an object");
  return doc[name];
}

} // namespace

RunConfig parse_run_config(const json &doc) {
  if (!doc.is_object())
    throw InvalidArgument("config must be a JSON object");
  RunConfig cfg;

  const json &c = section(doc, "constants");
  cfg.constants = make_constants(get_or(c, "R0", 1.0, "constants"), get_or(c, "m0", 1.0, "constants"),
                                 get_or(c, "t0", 1.0, "constants"),
                                 get_or(c, "gamma", 1.0, "constants"),
                                 get_or(c, "sigma", -1, "constants"));

  const json &g = section(doc, "grid");
  cfg.n = get_or<Eigen::Index>(g, "N", 256, "grid");
  require_valid_size(cfg.n);

  const json &s = section(doc, "scenario");
  cfg.scenario = get_or<std::string>(s, "kind", cfg.scenario, "scenario");
  cfg.field_csv_in = get_or<std::string>(s, "field_csv", "", "scenario");
  if (s.contains("params")) {
    const json &p = s["params"];
    cfg.params.mode = get_or(p, "m", cfg.params.mode, "scenario.params");
    cfg.params.eps = get_or(p, "eps", cfg.params.eps, "scenario.params");
  }
  if (s.contains("basepoint"))
    cfg.basepoint = vec_from_json(s["basepoint"], "scenario.basepoint");

  const json &in = section(doc, "integrator");
  const auto method = get_or<std::string>(in, "method", "midpoint", "integrator");
  if (method == "midpoint")
    cfg.integrator = Integrator::ImplicitMidpoint;
  else if (method == "rk4")
    cfg.integrator = Integrator::Rk4Projected;
  else
    throw InvalidArgument("integrator.method must be 'midpoint' or 'rk4'");
  const double h = grid_step(cfg.n);
  cfg.dtau = get_or(in, "dtau", 0.0, "integrator");
  if (in.contains("dtau_over_h2"))
    cfg.dtau = get_or(in, "dtau_over_h2", 0.0, "integrator") * h * h;
  if (cfg.dtau == 0.0)
    cfg.dtau = default_dtau(cfg.n);
  if (!(cfg.dtau > 0.0))
    throw InvalidArgument("integrator.dtau must be positive");
  cfg.n_steps = get_or(in, "n_steps", cfg.n_steps, "integrator");
  if (in.contains("tau_horizon"))
    cfg.n_steps = static_cast<int>(std::ceil(get_or(in, "tau_horizon", 0.0, "integrator") / cfg.dtau - 1e-9));
  if (cfg.n_steps <= 0)
    throw InvalidArgument("integrator.n_steps must be positive");
  cfg.monitor_every = get_or(in, "monitor_every", 0, "integrator");
  cfg.tol = get_or(in, "tol", cfg.tol, "integrator");
  cfg.max_iter = get_or(in, "max_iter", cfg.max_iter, "integrator");

  const json &t = section(doc, "tolerances");
  cfg.field_tol.unit = get_or(t, "unit", cfg.field_tol.unit, "tolerances");
  cfg.field_tol.mean = get_or(t, "mean", cfg.field_tol.mean, "tolerances");

  const json &o = section(doc, "outputs");
  cfg.drift_csv = get_or<std::string>(o, "drift_csv", "", "outputs");
  cfg.field_csv = get_or<std::string>(o, "field_csv", "", "outputs");
  cfg.curve_csv = get_or<std::string>(o, "curve_csv", "", "outputs");
  cfg.report_json = get_or<std::string>(o, "report_json", "", "outputs");
  cfg.curve_obj = get_or<std::string>(o, "curve_obj", "", "outputs");
  cfg.curve_svg = get_or<std::string>(o, "curve_svg", "", "outputs");

  const json &ov = section(doc, "overrides");
  if (ov.contains("beta_override") && !ov["beta_override"].is_null())
    cfg.beta_override = get_or(ov, "beta_override", 0.0, "overrides");
  return cfg;
}

RunConfig load_run_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw InvalidArgument("cannot open config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error &e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_run_config(doc);
}

} // namespace filament
