#include "filament/error.hpp"
#include "filament/io.hpp"
#include "filament/verify.hpp"

#include "test_support.hpp"

#include <sstream>

using namespace filament;
using nlohmann::json;

TEST(FieldCsv, LosslessRoundTrip) {
  std::mt19937_64 rng(149);
  const SpinField f = random_admissible_field(64, rng);
  std::stringstream ss;
  write_field_csv(ss, f);
  const SpinField back = read_field_csv(ss);
  EXPECT_EQ((back.samples() - f.samples()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(FieldCsv, HeaderAndPrecision) {
  std::stringstream ss;
  write_field_csv(ss, make_scenario_field("circle", {}, 8));
  std::string header, row;
  std::getline(ss, header);
  std::getline(ss, row);
  EXPECT_EQ(header, "xi,j1,j2,j3");
  EXPECT_EQ(row, "0,1,0,0");
}

TEST(FieldCsv, MalformedInput) {
  std::stringstream bad_header("x,y,z\n");
  EXPECT_THROW(read_field_csv(bad_header), InvalidArgument);
  std::stringstream bad_number("xi,j1,j2,j3\n0,1,zero,0\n");
  EXPECT_THROW(read_field_csv(bad_number), InvalidArgument);
  std::stringstream short_row("xi,j1,j2,j3\n0,1,0\n");
  EXPECT_THROW(read_field_csv(short_row), InvalidArgument);
  std::stringstream odd("xi,j1,j2,j3\n0,1,0,0\n");
  EXPECT_THROW(read_field_csv(odd), InvalidArgument);
}

TEST(CurveExports, ObjAndSvg) {
  const ModelConstants c = make_constants(1, 1, 1, 1);
  const FilamentCurve curve = reconstruct_curve(make_scenario_field("circle", {}, 8), Vec3::Zero(), c);
  std::stringstream obj;
  write_curve_obj(obj, curve);
  const std::string text = obj.str();
  EXPECT_EQ(text.rfind("v ", 0), 0u);
  EXPECT_NE(text.find("l 1 2 3 4 5 6 7 8 1"), std::string::npos);
  std::stringstream svg;
  write_curve_svg(svg, curve);
  EXPECT_EQ(svg.str().rfind("<svg", 0), 0u);
  EXPECT_NE(svg.str().find("</svg>"), std::string::npos);
}

TEST(ReportJson, FieldsAndDegenerateMarker) {
  const ModelConstants c = make_constants(1, 1, 1, 1);
  const json ok = to_json(make_report(make_scenario_field("circle", {}, 32), Vec3(0, 0, 1), c));
  EXPECT_EQ(ok["inv_mass"].size(), 9u);
  EXPECT_FALSE(ok["degenerate_direction"].get<bool>());
  EXPECT_NEAR(ok["f"][2].get<double>(), -std::numbers::pi, 1e-12);

  const json deg = to_json(make_report(make_scenario_field("tilted_constant", {}, 32), Vec3(1, 0, 0), c));
  EXPECT_TRUE(deg["degenerate_direction"].get<bool>());
  EXPECT_TRUE(deg["E_restricted"].is_null());
}

TEST(PointJson, RoundTrip) {
  std::mt19937_64 rng(151);
  const PhasePoint p{Vec3(1, 2, 3), Vec3(-1, 0.5, 0.25), random_admissible_field(16, rng)};
  const PhasePoint back = phase_point_from_json(to_json(p));
  EXPECT_EQ((back.q - p.q).norm(), 0.0);
  EXPECT_EQ((back.p - p.p).norm(), 0.0);
  EXPECT_EQ((back.field.samples() - p.field.samples()).norm(), 0.0);

  const ClassicalPoint a{Vec3(4, 5, 6), -2.5, random_admissible_field(16, rng)};
  const ClassicalPoint b = classical_point_from_json(to_json(a));
  EXPECT_EQ(b.gamma, a.gamma);
  EXPECT_EQ((b.z0 - a.z0).norm(), 0.0);
}

TEST(ParseVec3, Values) {
  EXPECT_EQ(parse_vec3("1,-2.5,3e2"), Vec3(1, -2.5, 300));
  EXPECT_THROW(parse_vec3("1,2"), InvalidArgument);
  EXPECT_THROW(parse_vec3("a,b,c"), InvalidArgument);
}

TEST(RunConfigParse, Defaults) {
  const RunConfig cfg = parse_run_config(json::object());
  EXPECT_EQ(cfg.n, 256);
  EXPECT_EQ(cfg.integrator, Integrator::ImplicitMidpoint);
  EXPECT_DOUBLE_EQ(cfg.dtau, default_dtau(256));
}

TEST(RunConfigParse, HorizonAndMethod) {
  const json doc = json::parse(R"({
    "grid": {"N": 64},
    "integrator": {"method": "rk4", "dtau_over_h2": 0.1, "tau_horizon": 0.01},
    "overrides": {"beta_override": -3.0}
  })");
  const RunConfig cfg = parse_run_config(doc);
  const double h = grid_step(64);
  EXPECT_EQ(cfg.integrator, Integrator::Rk4Projected);
  EXPECT_DOUBLE_EQ(cfg.dtau, 0.1 * h * h);
  EXPECT_EQ(cfg.n_steps, static_cast<int>(std::ceil(0.01 / (0.1 * h * h) - 1e-9)));
  ASSERT_TRUE(cfg.beta_override.has_value());
  EXPECT_EQ(*cfg.beta_override, -3.0);
}

TEST(RunConfigParse, Errors) {
  try {
    parse_run_config(json::parse(R"({"grid": {"N": 63}})"));
    FAIL() << "odd N accepted";
  } catch (const InvalidArgument &e) {
    EXPECT_NE(std::string(e.what()).find("even"), std::string::npos);
  }
  EXPECT_THROW(parse_run_config(json::parse(R"({"constants": {"R0": -1}})")), InvalidArgument);
  EXPECT_THROW(parse_run_config(json::parse(R"({"integrator": {"method": "euler"}})")), InvalidArgument);
  EXPECT_THROW(parse_run_config(json::parse(R"({"integrator": {"n_steps": 0}})")), InvalidArgument);
  EXPECT_THROW(parse_run_config(json::parse(R"({"grid": {"N": "many"}})")), InvalidArgument);
  EXPECT_THROW(load_run_config("/nonexistent/config.json"), InvalidArgument);
}
