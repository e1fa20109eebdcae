// Acceptance suite: one line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "steklov/bounds.hpp"
#include "steklov/exact_spectra.hpp"
#include "steklov/fem2d.hpp"
#include "steklov/identity_checks.hpp"
#include "steklov/linalg.hpp"

using namespace steklov;
using spaceform::CaseId;
using spaceform::CurvatureCase;
using spaceform::SpaceForm;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Outcome {
  bool pass;
  std::string detail;
};

struct ExactDomain {
  std::string name;
  exact::BallDomain ball;
};

std::vector<ExactDomain> exact_matrix() {
  std::vector<ExactDomain> out;
  const struct {
    double K;
    const char* tag;
    double radii[3];
  } families[] = {{0.0, "euclid", {0.5, 1.0, 2.0}}, {-1.0, "hyper", {0.5, 1.0, 2.0}}, {1.0, "sphere", {0.4, 0.8, 1.2}}};
  for (int n = 1; n <= 3; ++n)
    for (const auto& f : families)
      for (double R : f.radii)
        out.push_back({std::string(f.tag) + "_n" + std::to_string(n) + "_R" + fmt(R), exact::BallDomain(SpaceForm(f.K, n + 1), R)});
  return out;
}

struct ExactTables {
  SpectrumTable sigma;
  SpectrumTable lambda;
  CurvatureCase cs;
  double area;
};

ExactTables tables(const exact::BallDomain& b, std::size_t count) {
  const auto d = bounds::DomainDescriptor::ball(b.space().curvature(), b.n(), b.radius());
  return {exact::steklov_ball_spectrum(b, count).truncated(count), exact::boundary_laplacian_spectrum(b, count).truncated(count),
          bounds::auto_case(d), exact::boundary_area(b)};
}

// 1. radial Riccati integration against k/R in flat space
Outcome euclidean_exactness() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n)
    for (double R : {0.5, 1.0, 2.0}) {
      const exact::BallDomain b(SpaceForm(0.0, n + 1), R);
      for (int k = 1; k <= 40; ++k) worst = std::max(worst, std::abs(exact::radial_log_derivative(b, k) * R / k - 1.0));
    }
  const double t = seconds_since(t0);
  return {worst <= 1e-10 && t < 5.0, "max_rel_err=" + fmt(worst) + " time=" + fmt(t) + "s"};
}

// 2. 2D space forms: the conformal map to the flat disk gives sigma_k = k / sn_K(R)
Outcome space_form_oracle() {
  double worst = 0.0;
  for (double R : {0.5, 1.0, 2.0}) {
    const exact::BallDomain b(SpaceForm(-1.0, 2), R);
    for (int k = 1; k <= 40; ++k) worst = std::max(worst, std::abs(exact::radial_log_derivative(b, k) * std::sinh(R) / k - 1.0));
  }
  for (double R : {0.4, 0.8, 1.2}) {
    const exact::BallDomain b(SpaceForm(1.0, 2), R);
    for (int k = 1; k <= 40; ++k) worst = std::max(worst, std::abs(exact::radial_log_derivative(b, k) * std::sin(R) / k - 1.0));
  }
  return {worst <= 1e-8, "max_rel_err=" + fmt(worst)};
}

// 3. Theorem 1 on the exact matrix, j <= 100, plus sigma_j = sqrt(lambda_j) on 2D curved disks
Outcome theorem1_exact(const std::vector<ExactDomain>& matrix) {
  std::size_t violations = 0, records = 0;
  double coincidence = 0.0;
  for (const auto& d : matrix) {
    const auto t = tables(d.ball, 101);
    const auto r = bounds::check_theorem1(t.cs, t.sigma, t.lambda, 100, bounds::exact_tolerance);
    violations += r.violations();
    records += r.records().size();
    if (d.ball.n() == 1 && d.ball.space().curvature() != 0.0)
      for (std::size_t j = 0; j <= 100; ++j)
        coincidence = std::max(coincidence, std::abs(t.sigma.at(j) - std::sqrt(t.lambda.at(j))));
  }
  return {violations == 0 && coincidence <= 1e-8, "domains=" + std::to_string(matrix.size()) + " records=" +
                                                      std::to_string(records) + " violations=" + std::to_string(violations) +
                                                      " max|sigma-sqrt(lambda)|_2D=" + fmt(coincidence)};
}

double disk_error(int ref) {
  const fem::SteklovProblem p(fem::build_mesh(fem::BoundaryCurve::circle(1.0), ref), fem::ConformalMetric::euclidean());
  const auto s = fem::steklov_spectrum_fem(p, 11);
  double err = 0.0;
  for (std::size_t j = 1; j <= 10; ++j) {
    const double exact = std::ceil(j / 2.0);
    err = std::max(err, std::abs(s.at(j) - exact) / exact);
  }
  return err;
}

// 4. FEM convergence on the flat unit disk
Outcome fem_convergence() {
  const auto t0 = Clock::now();
  const double e4 = disk_error(4), e5 = disk_error(5), e6 = disk_error(6);
  const double t = seconds_since(t0);
  const bool pass = e4 / e5 >= 3.0 && e5 / e6 >= 3.0 && e6 <= 0.01 && t < 60.0;
  return {pass, "err4=" + fmt(e4) + " err5=" + fmt(e5) + " err6=" + fmt(e6) + " factors=" + fmt(e4 / e5) + "," +
                    fmt(e5 / e6) + " time=" + fmt(t) + "s"};
}

struct FemDomain {
  std::string name;
  fem::BoundaryCurve curve;
  fem::ConformalMetric metric;
};

std::vector<FemDomain> fem_domains() {
  return {{"flat_disk", fem::BoundaryCurve::circle(1.0), fem::ConformalMetric::euclidean()},
          {"flat_ellipse", fem::BoundaryCurve::ellipse(2.0, 1.0), fem::ConformalMetric::euclidean()},
          {"hyper_disk_R1", fem::BoundaryCurve::circle(std::tanh(0.5)), fem::ConformalMetric::hyperbolic()}};
}

CurvatureCase fem_case(const FemDomain& d) {
  const auto kr = fem::metric_curvature_range(d.curve, d.metric);
  return bounds::auto_case(bounds::DomainDescriptor::curve(d.metric.curvature(), kr.min, kr.max));
}

// 5. Theorem 1 and the boundary-energy inequalities on FEM spectra, j <= 10
Outcome fem_bounds() {
  std::string detail;
  bool pass = true;
  for (const auto& d : fem_domains()) {
    const fem::SteklovProblem p(fem::build_mesh(d.curve, 6), d.metric);
    const auto cs = fem_case(d);
    const double tol = bounds::fem_slack_fraction * bounds::effective_kappa(cs).kappa_tilde;
    const auto pairs = fem::steklov_eigenpairs(p, 11);
    const auto sigma = fem::to_spectrum_table(pairs.values);
    const auto lambda = fem::boundary_laplacian_spectrum_curve(fem::g_length(d.curve, d.metric), 11);
    const auto t1 = bounds::check_theorem1(cs, sigma, lambda, 10, tol);
    const auto p1 = identity::proposition1_check(p, cs, pairs, tol);
    pass = pass && t1.passed() && p1.report.passed();
    detail += d.name + ":kappa_plus=" + fmt(cs.kappa_plus()) + ",t1_viol=" + std::to_string(t1.violations()) +
              ",p1_viol=" + std::to_string(p1.report.violations()) + " ";
  }
  return {pass, detail};
}

// 6. Pohozaev identity on the flat unit disk
Outcome pohozaev() {
  const auto curve = fem::BoundaryCurve::circle(1.0);
  const auto g = fem::ConformalMetric::euclidean();
  const CurvatureCase cs(CaseId::Case1, 1.0, 1.0, 1.0, 1);
  double position_ratio = 0.0;
  std::vector<double> res, hm;
  for (int ref = 4; ref <= 6; ++ref) {
    const fem::Mesh mesh = fem::build_mesh(curve, ref);
    const auto K = fem::assemble_stiffness(mesh);
    std::vector<double> b1(mesh.boundary().size()), b2(b1.size());
    for (std::size_t k = 0; k < b1.size(); ++k) {
      const auto p = mesh.vertices()[mesh.boundary()[k]];
      b1[k] = p.x;
      b2[k] = p.x * p.x - p.y * p.y;
    }
    const auto u1 = fem::harmonic_extension(mesh, K, b1);
    const auto u2 = fem::harmonic_extension(mesh, K, b2);
    const auto d0 = identity::distance_to_boundary(mesh, curve, g);
    const auto pos = identity::pohozaev_residual(mesh, g, K, u1, identity::position_field(mesh));
    const auto tr = identity::pohozaev_residual(mesh, g, K, u2, identity::build_F_field(mesh, g, cs, 0.5, d0));
    if (ref == 6) position_ratio = std::abs(pos.residual) / pos.i4;
    res.push_back(std::abs(tr.residual));
    hm.push_back(tr.h_mesh);
  }
  const double order = std::log(res[0] / res[2]) / std::log(hm[0] / hm[2]);
  const bool decreasing = res[1] < res[0] && res[2] < res[1];
  return {position_ratio <= 1e-3 && decreasing && order >= 1.0,
          "position_residual/I4=" + fmt(position_ratio) + " truncated=" + fmt(res[0]) + "," + fmt(res[1]) + "," +
              fmt(res[2]) + " order=" + fmt(order)};
}

// 7. Weyl ratio within 10% of 2 pi on the top quartile of 400 eigenvalues
Outcome weyl(const std::vector<ExactDomain>& matrix) {
  std::size_t failing = 0;
  double worst = 0.0, worst_euclid = 0.0;
  std::string worst_name;
  for (const auto& d : matrix) {
    const auto t = tables(d.ball, 401);
    const double dev = bounds::weyl_band_deviation(t.sigma, t.area, d.ball.n(), 301, 400);
    if (dev > 0.1) ++failing;
    if (dev > worst) worst = dev, worst_name = d.name;
    if (d.ball.space().curvature() == 0.0) worst_euclid = std::max(worst_euclid, dev);
  }
  return {failing == 0, "failing_domains=" + std::to_string(failing) + "/" + std::to_string(matrix.size()) +
                            " worst=" + fmt(worst) + "(" + worst_name + ") worst_euclidean=" + fmt(worst_euclid)};
}

// 8. Corollary constant: finite, < 5% drift over the upper half, below sqrt(fitted_c) + 10%
Outcome corollary(const std::vector<ExactDomain>& matrix) {
  std::size_t drift_fail = 0, cross_fail = 0;
  double worst = 0.0;
  std::string worst_name;
  for (const auto& d : matrix) {
    const auto t = tables(d.ball, 401);
    const auto fit = bounds::check_corollary1(t.cs, t.sigma, t.area, 400);
    const auto bus = bounds::check_buser(t.lambda, t.area, d.ball.n(), 400);
    if (!std::isfinite(fit.fitted) || fit.drift >= 0.05) ++drift_fail;
    if (fit.fitted > 1.1 * std::sqrt(bus.fitted)) ++cross_fail;
    if (fit.drift > worst) worst = fit.drift, worst_name = d.name;
  }
  return {drift_fail == 0 && cross_fail == 0, "drift_failures=" + std::to_string(drift_fail) + "/" +
                                                  std::to_string(matrix.size()) + " worst_drift=" + fmt(worst) + "(" +
                                                  worst_name + ") cross_report_failures=" + std::to_string(cross_fail)};
}

// 9. Generalised eigensolver on random pencils
Outcome eigensolver() {
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> normal;
  double worst_res = 0.0, worst_orth = 0.0;
  for (std::size_t n : {1u, 2u, 3u, 10u, 50u, 100u, 200u}) {
    linalg::SymMatrix a(n), b(n);
    linalg::Matrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) a(i, j) = normal(rng);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g(i, j) = normal(rng);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        double s = i == j ? static_cast<double>(n) : 0.0;
        for (std::size_t k = 0; k < n; ++k) s += g(i, k) * g(j, k);
        b(i, j) = s;
      }
    const auto e = linalg::sym_generalized_eig(a, b, n);
    const double norm_a = a.frobenius_norm();
    std::vector<std::vector<double>> bx(n);
    for (std::size_t k = 0; k < n; ++k) {
      const auto x = e.vectors.col(k);
      const auto ax = a.multiply(x);
      bx[k] = b.multiply(x);
      double r = 0.0;
      for (std::size_t i = 0; i < n; ++i) r += std::pow(ax[i] - e.values[k] * bx[k][i], 2);
      worst_res = std::max(worst_res, std::sqrt(r) / norm_a);
    }
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l) {
        double s = 0.0;
        const auto x = e.vectors.col(l);
        for (std::size_t i = 0; i < n; ++i) s += x[i] * bx[k][i];
        worst_orth = std::max(worst_orth, std::abs(s - (k == l ? 1.0 : 0.0)));
      }
  }
  return {worst_res <= 1e-8 && worst_orth <= 1e-8, "max_residual/|A|=" + fmt(worst_res) + " max_orth_err=" + fmt(worst_orth)};
}

// 10. Halving kappa_plus on the flat ellipse must produce a theorem1 violation
Outcome falsification() {
  const auto d = fem_domains()[1];
  const fem::SteklovProblem p(fem::build_mesh(d.curve, 6), d.metric);
  const auto cs = fem_case(d);
  const auto sigma = fem::steklov_spectrum_fem(p, 11);
  const auto lambda = fem::boundary_laplacian_spectrum_curve(fem::g_length(d.curve, d.metric), 11);
  auto violations = [&](double kappa_plus) {
    const auto c = cs.with_kappa_plus_unchecked(kappa_plus);
    return bounds::check_theorem1(c, sigma, lambda, 10, bounds::fem_slack_fraction * kappa_plus).violations();
  };
  const std::size_t probe = violations(0.5 * cs.kappa_plus());
  // largest kappa_plus that still produces a violation
  double lo = 1e-6, hi = cs.kappa_plus();
  if (violations(lo) > 0)
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (violations(mid) > 0 ? lo : hi) = mid;
    }
  return {probe > 0, "kappa_plus=" + fmt(cs.kappa_plus()) + " probe=" + fmt(0.5 * cs.kappa_plus()) +
                         " violations=" + std::to_string(probe) + " detection_threshold=" + fmt(lo)};
}

}  // namespace

int main() {
  const auto matrix = exact_matrix();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"euclidean_exactness", euclidean_exactness},
      {"space_form_oracle", space_form_oracle},
      {"theorem1_exact_matrix", [&] { return theorem1_exact(matrix); }},
      {"fem_convergence", fem_convergence},
      {"fem_bound_checks", fem_bounds},
      {"pohozaev_identity", pohozaev},
      {"weyl_asymptotics", [&] { return weyl(matrix); }},
      {"corollary_constant", [&] { return corollary(matrix); }},
      {"eigensolver_properties", eigensolver},
      {"falsification_probe", falsification},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("criterion %zu %s %s %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
