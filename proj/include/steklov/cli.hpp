#pragma once

// Experiment runner behind steklov-lab: config parsing, single runs and the
// built-in test matrix. Runs produce their output files in memory so that a
// single collector writes them.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "steklov/fem2d.hpp"
#include "steklov/spaceform.hpp"

namespace steklov::cli {

/// Input error carrying the 1-based config line (0 when not tied to a line).
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::size_t line, const std::string& message);
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

enum class GeometryKind { Ball, Planar };
enum class CurveKind { Circle, GeodesicCircle, Ellipse, Polygon, Star };
enum class Method { Exact, Fem };
enum class Check { Theorem1, Corollary1, Weyl, Buser, Pohozaev, Proposition1, QBounds };

std::string to_string(Check c);

struct CurveSpec {
  CurveKind kind = CurveKind::Circle;
  std::vector<double> params;
};

struct CaseOverrides {
  std::optional<spaceform::CaseId> id;
  std::optional<double> a;
  std::optional<double> kappa_minus;
  std::optional<double> kappa_plus;
  bool any() const noexcept { return id || a || kappa_minus || kappa_plus; }
};

struct RunConfig {
  std::string name = "domain";
  GeometryKind geometry = GeometryKind::Ball;
  double curvature = 0.0;
  int dim = 2;          // ambient dimension n + 1
  double radius = 1.0;  // ball only
  CurveSpec curve;      // planar only
  Method method = Method::Exact;
  int refinement = 6;
  fem::MassMode mass = fem::MassMode::Consistent;
  std::size_t count = 50;
  std::vector<Check> checks;
  CaseOverrides case_params;
  std::string output_dir;
};

/// Sections `[domain] [geometry] [method] [spectrum] [checks] [case] [output]`
/// with `key = value` lines and `#` comments. Throws ConfigError.
RunConfig parse_config(const std::string& text);

fem::BoundaryCurve make_curve(const CurveSpec& spec, const fem::ConformalMetric& metric);

struct RunOptions {
  std::optional<double> tolerance;  // absolute slack for the bound checks
  double kappa_scale = 1.0;         // multiplies kappa_plus after case selection
};

struct CheckSummary {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct RunResult {
  int exit_code = 0;
  std::string error;  // set when the run stopped early
  std::vector<CheckSummary> checks;
  std::map<std::string, std::string> files;  // file name -> content
};

/// Exit codes: 0 every check passes, 1 a check fails or the computation
/// breaks down, 2 input error. Never throws.
RunResult run(const RunConfig& config, const RunOptions& options = {});

/// Writes every file of `result` into `dir`, creating it.
void write_outputs(const RunResult& result, const std::string& dir);

/// Mesh of a planar FEM config in the plain-text mesh format.
void mesh_dump(const RunConfig& config, std::ostream& out);

/// The built-in matrix of balls and FEM domains.
std::vector<RunConfig> matrix_configs();

struct MatrixOptions {
  RunOptions run;
  std::size_t jobs = 0;  // 0: hardware concurrency
  std::optional<std::string> out_dir;
};

/// Runs every matrix entry on a worker pool, prints one line per
/// (domain, check) in matrix order, returns 0 or 1.
int test_matrix(const MatrixOptions& options, std::ostream& out);

}  // namespace steklov::cli
