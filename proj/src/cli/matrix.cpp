#include <atomic>
#include <filesystem>
#include <ostream>
#include <thread>

#include "steklov/cli.hpp"

namespace steklov::cli {

namespace {

std::string radius_tag(double r) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%g", r);
  return buf;
}

}  // namespace

std::vector<RunConfig> matrix_configs() {
  std::vector<RunConfig> out;
  const struct {
    double K;
    const char* tag;
    double radii[3];
  } families[] = {{0.0, "euclid", {0.5, 1.0, 2.0}}, {-1.0, "hyper", {0.5, 1.0, 2.0}}, {1.0, "sphere", {0.4, 0.8, 1.2}}};
  for (int n = 1; n <= 3; ++n)
    for (const auto& f : families)
      for (double R : f.radii) {
        RunConfig c;
        c.name = std::string(f.tag) + "_ball_n" + std::to_string(n) + "_R" + radius_tag(R);
        c.geometry = GeometryKind::Ball;
        c.curvature = f.K;
        c.dim = n + 1;
        c.radius = R;
        c.method = Method::Exact;
        c.count = 401;
        c.checks = {Check::Theorem1, Check::Corollary1, Check::Weyl, Check::Buser};
        out.push_back(c);
      }
  auto fem_entry = [](std::string name, double K, CurveSpec curve) {
    RunConfig c;
    c.name = std::move(name);
    c.geometry = GeometryKind::Planar;
    c.curvature = K;
    c.curve = std::move(curve);
    c.method = Method::Fem;
    c.refinement = 6;
    c.count = 11;
    c.checks = {Check::Theorem1, Check::Proposition1, Check::Pohozaev, Check::QBounds};
    return c;
  };
  out.push_back(fem_entry("fem_flat_disk", 0.0, {CurveKind::Circle, {1.0}}));
  out.push_back(fem_entry("fem_flat_ellipse", 0.0, {CurveKind::Ellipse, {2.0, 1.0}}));
  out.push_back(fem_entry("fem_hyper_disk_R1", -1.0, {CurveKind::GeodesicCircle, {1.0}}));
  return out;
}

int test_matrix(const MatrixOptions& options, std::ostream& out) {
  const std::vector<RunConfig> configs = matrix_configs();
  std::vector<RunResult> results(configs.size());
  std::size_t jobs = options.jobs ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, configs.size());
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < jobs; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) results[i] = run(configs[i], options.run);
      });
  }
  int code = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const RunResult& r = results[i];
    if (!r.error.empty()) out << configs[i].name << " run FAIL " << r.error << '\n';
    for (const CheckSummary& c : r.checks)
      out << configs[i].name << ' ' << c.name << ' ' << (c.pass ? "PASS" : "FAIL") << ' ' << c.detail << '\n';
    if (r.exit_code != 0) code = 1;
    if (options.out_dir) write_outputs(r, (std::filesystem::path(*options.out_dir) / configs[i].name).string());
  }
  return code;
}

}  // namespace steklov::cli
