#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "steklov/cli.hpp"

using namespace steklov::cli;

namespace {

const char* ball_config = R"(# minimal ball
[geometry]
type = ball
curvature = -1
dim = 3
radius = 1

[method]
type = exact

[spectrum]
count = 50
)";

std::size_t error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  FAIL("config was accepted");
  return 0;
}

std::string fem_config(const std::string& curve, const std::string& checks, int refinement = 6, int count = 11) {
  return "[domain]\nname = t\n[geometry]\ntype = planar\ncurvature = 0\ncurve = " + curve +
         "\n[method]\ntype = fem\nrefinement = " + std::to_string(refinement) + "\n[spectrum]\ncount = " +
         std::to_string(count) + "\n[checks]\nlist = " + checks + "\n";
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("minimal ball") {
    const RunConfig c = parse_config(ball_config);
    CHECK(c.geometry == GeometryKind::Ball);
    CHECK(c.curvature == -1.0);
    CHECK(c.dim == 3);
    CHECK(c.radius == 1.0);
    CHECK(c.method == Method::Exact);
    CHECK(c.count == 50);
    CHECK(c.checks.empty());
    CHECK_FALSE(c.case_params.any());
  }
  SUBCASE("full fem config") {
    const RunConfig c = parse_config(
        "[domain]\nname = e\n[geometry]\ntype = planar\ncurve = ellipse 2 1  # comment\n"
        "[method]\ntype = fem\nrefinement = 5\nmass = lumped\n[spectrum]\ncount = 9\n"
        "[checks]\nlist = theorem1, proposition1 ,pohozaev\n[case]\nid = case1\na = auto\nkappa_plus = 1.5\n"
        "[output]\ndir = out/e\n");
    CHECK(c.curve.kind == CurveKind::Ellipse);
    CHECK(c.curve.params == std::vector<double>{2.0, 1.0});
    CHECK(c.refinement == 5);
    CHECK(c.mass == steklov::fem::MassMode::Lumped);
    CHECK(c.checks == std::vector<Check>{Check::Theorem1, Check::Proposition1, Check::Pohozaev});
    CHECK(c.case_params.id == steklov::spaceform::CaseId::Case1);
    CHECK_FALSE(c.case_params.a.has_value());
    CHECK(c.case_params.kappa_plus == 1.5);
    CHECK(c.output_dir == "out/e");
  }
  SUBCASE("line-numbered errors") {
    CHECK(error_line("[geometry]\ntype = ball\ncurvature = 0\ndim = 2\nradius = -1\n") == 5);
    CHECK(error_line("[geometry]\ntype = ball\ncolour = red\n") == 3);
    CHECK(error_line("[geometry]\ntype = ball\ndim = two\n") == 3);
    CHECK(error_line("[shapes]\n") == 1);
    CHECK(error_line("type = ball\n") == 1);
    CHECK(error_line("[geometry]\ntype = ball\ntype = ball\n") == 3);
    CHECK(error_line("[geometry]\njust words\n") == 2);
    CHECK(error_line(std::string(ball_config) + "[checks]\nlist = theorem1, nonsense\n") == 14);
    CHECK(error_line(std::string(ball_config) + "[checks]\nlist = pohozaev\n") == 14);
  }
  SUBCASE("invariants") {
    std::string fem_ball = ball_config;
    fem_ball.replace(fem_ball.find("type = exact"), 12, "type = fem");
    try {
      parse_config(fem_ball);
      FAIL("accepted");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()) == "line 9: fem requires planar geometry");
    }
    CHECK(error_line(fem_config("circle 1", "theorem1") + "[geometry]\n") == 14);
    CHECK_THROWS_AS(parse_config("[geometry]\ntype = planar\ndim = 3\ncurve = circle 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[geometry]\ntype = planar\ncurve = circle 1\n[method]\ntype = exact\n"
                                 "[spectrum]\ncount = 5\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(fem_config("polygon 0 0 1 0 0 1", "")), ConfigError);
    CHECK_THROWS_AS(parse_config(fem_config("ellipse 2", "")), ConfigError);
    CHECK_THROWS_AS(parse_config(fem_config("circle 1", "theorem1, theorem1")), ConfigError);
    CHECK_THROWS_AS(parse_config("[geometry]\ntype = ball\ndim = 3\nradius = 1\n[method]\ntype = exact\n"), ConfigError);
  }
}

TEST_CASE("runs and exit codes") {
  SUBCASE("hyperbolic disk, theorem1 and weyl") {
    RunConfig c = parse_config(
        "[geometry]\ntype = ball\ncurvature = -1\ndim = 2\nradius = 1\n[method]\ntype = exact\n"
        "[spectrum]\ncount = 40\n[checks]\nlist = theorem1, weyl\n");
    const RunResult r = run(c);
    CHECK(r.exit_code == 0);
    CHECK(r.error.empty());
    REQUIRE(r.files.contains("weyl_ratio.dat"));
    // ratios approach 2 pi: the last entry is within 1/j of it
    std::istringstream weyl(r.files.at("weyl_ratio.dat"));
    std::size_t j = 0;
    double ratio = 0.0;
    while (weyl >> j >> ratio) {}
    CHECK(j == 39);
    CHECK(std::abs(ratio - 2 * std::numbers::pi) / (2 * std::numbers::pi) <= 1.0 / 39 + 1e-12);
    const auto summary = nlohmann::json::parse(r.files.at("summary.json"));
    CHECK(summary["status"] == "PASS");
    CHECK(summary["failed"] == 0);
    CHECK(summary["checks"].size() == 3);
  }
  SUBCASE("flat ellipse fem") {
    const RunResult r = run(parse_config(fem_config("ellipse 2 1", "theorem1, proposition1, pohozaev")));
    CHECK(r.exit_code == 0);
    const auto summary = nlohmann::json::parse(r.files.at("summary.json"));
    CHECK(summary["case"]["kappa_plus"].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(summary["case"]["kappa_minus"].get<double>() == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(r.files.contains("identities_report.csv"));
  }
  SUBCASE("spherical cap past the hemisphere") {
    const RunResult r = run(parse_config(
        "[geometry]\ntype = ball\ncurvature = 1\ndim = 3\nradius = 1.6\n[method]\ntype = exact\n"
        "[spectrum]\ncount = 20\n[checks]\nlist = theorem1\n"));
    CHECK(r.exit_code == 2);
    CHECK(r.error.find("pi/(2 sqrt K)") != std::string::npos);
    CHECK(nlohmann::json::parse(r.files.at("summary.json"))["status"] == "FAILED");
  }
  SUBCASE("count beyond the boundary vertices is an input error") {
    CHECK(run(parse_config(fem_config("circle 1", "theorem1", 2, 17))).exit_code == 2);
  }
  SUBCASE("empty check list emits spectra only") {
    const RunResult r = run(parse_config(ball_config));
    CHECK(r.exit_code == 0);
    REQUIRE(r.checks.size() == 1);
    CHECK(r.checks[0].name == "hypotheses");
    CHECK(r.files.contains("spectrum_steklov.csv"));
    CHECK(r.files.contains("spectrum_laplacian.csv"));
    CHECK_FALSE(r.files.contains("identities_report.csv"));
  }
  SUBCASE("understated kappa_plus is caught") {
    const RunConfig c = parse_config(
        "[geometry]\ntype = ball\ncurvature = 0\ndim = 4\nradius = 1\n[method]\ntype = exact\n"
        "[spectrum]\ncount = 60\n[checks]\nlist = theorem1\n");
    CHECK(run(c).exit_code == 0);
    RunOptions probe;
    probe.kappa_scale = 0.5;
    const RunResult r = run(c, probe);
    CHECK(r.exit_code == 1);
    bool theorem_failed = false, hypotheses_failed = false;
    for (const auto& s : r.checks) {
      if (s.name == "theorem1") theorem_failed = !s.pass;
      if (s.name == "hypotheses") hypotheses_failed = !s.pass;
    }
    CHECK(theorem_failed);
    CHECK(hypotheses_failed);
  }
  SUBCASE("tolerance override") {
    RunOptions loose;
    loose.tolerance = 1e3;
    RunConfig c = parse_config(fem_config("circle 1", "theorem1", 3, 30));
    CHECK(run(c).exit_code == 1);  // coarse mesh, high modes: discretisation error exceeds the slack
    CHECK(run(c, loose).exit_code == 0);
  }
}

TEST_CASE("determinism and file output") {
  const RunConfig c = parse_config(fem_config("ellipse 2 1", "theorem1, q_bounds", 5, 9));
  const RunResult a = run(c), b = run(c);
  CHECK(a.files == b.files);
  const auto dir = std::filesystem::temp_directory_path() / "steklov_cli_test";
  std::filesystem::remove_all(dir);
  write_outputs(a, dir.string());
  for (const auto& [name, content] : a.files) {
    std::ifstream in(dir / name, std::ios::binary);
    std::ostringstream got;
    got << in.rdbuf();
    CHECK(got.str() == content);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("mesh dump") {
  std::ostringstream out;
  mesh_dump(parse_config(fem_config("circle 1", "", 1, 2)), out);
  std::istringstream in(out.str());
  std::size_t nv = 0;
  in >> nv;
  CHECK(nv > 8);
  CHECK_THROWS_AS(mesh_dump(parse_config(ball_config), out), ConfigError);
}

TEST_CASE("matrix layout") {
  const auto configs = matrix_configs();
  CHECK(configs.size() == 30);
  std::size_t fem = 0;
  for (const auto& c : configs) fem += c.method == Method::Fem;
  CHECK(fem == 3);
}
