#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "steklov/cli.hpp"

namespace {

steklov::cli::RunConfig load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw steklov::cli::ConfigError(0, "cannot open config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return steklov::cli::parse_config(text.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steklov / boundary-Laplacian eigenvalue comparison lab"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_dir;
  std::size_t jobs = 0;
  double tolerance = 0.0;
  double kappa_scale = 1.0;
  app.add_option("--out", out_dir, "Output directory (overrides the config)");
  app.add_option("--jobs", jobs, "Worker threads for the matrix (default: logical processors)");
  auto* tol = app.add_option("--tolerance", tolerance, "Absolute slack for the bound checks")->check(CLI::NonNegativeNumber);
  app.add_option("--kappa-scale", kappa_scale, "Multiply kappa_plus after case selection")->check(CLI::PositiveNumber);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run one configuration");
  run->add_option("config", config_path, "Config file")->required();
  auto* matrix = app.add_subcommand("matrix", "Run the built-in test matrix");
  std::string dump_path;
  auto* dump = app.add_subcommand("mesh-dump", "Print the mesh of a planar fem config");
  dump->add_option("config", dump_path, "Config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  steklov::cli::RunOptions options;
  if (*tol) options.tolerance = tolerance;
  options.kappa_scale = kappa_scale;

  try {
    if (*run) {
      const auto cfg = load(config_path);
      const auto result = steklov::cli::run(cfg, options);
      const std::string dir = !out_dir.empty() ? out_dir : !cfg.output_dir.empty() ? cfg.output_dir : "steklov_out";
      steklov::cli::write_outputs(result, dir);
      for (const auto& c : result.checks)
        std::cout << cfg.name << ' ' << c.name << ' ' << (c.pass ? "PASS" : "FAIL") << ' ' << c.detail << '\n';
      if (!result.error.empty()) std::cerr << "error: " << result.error << '\n';
      return result.exit_code;
    }
    if (*matrix) {
      steklov::cli::MatrixOptions m;
      m.run = options;
      m.jobs = jobs;
      if (!out_dir.empty()) m.out_dir = out_dir;
      return steklov::cli::test_matrix(m, std::cout);
    }
    if (*dump) {
      steklov::cli::mesh_dump(load(dump_path), std::cout);
      return 0;
    }
  } catch (const steklov::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
