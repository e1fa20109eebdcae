#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "steklov/error.hpp"
#include "steklov/identity_checks.hpp"

using namespace steklov;
using namespace steklov::fem;
using namespace steklov::identity;
using spaceform::CaseId;
using spaceform::CurvatureCase;
using std::numbers::pi;

namespace {

std::vector<double> nodal(const Mesh& mesh, double (*f)(Point)) {
  std::vector<double> u(mesh.vertex_count());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = f(mesh.vertices()[i]);
  return u;
}

double re_z(Point p) { return p.x; }
double re_z2(Point p) { return p.x * p.x - p.y * p.y; }

Point centroid(const Mesh& m, std::size_t t) {
  const auto& tri = m.triangles()[t];
  const auto v = m.vertices();
  return (1.0 / 3.0) * (v[tri[0]] + v[tri[1]] + v[tri[2]]);
}

const CurvatureCase unit_case1(CaseId::Case1, 1.0, 1.0, 1.0, 1);

}  // namespace

TEST_CASE("distance to the boundary") {
  SUBCASE("flat disk") {
    const auto curve = BoundaryCurve::circle(1.0);
    const Mesh mesh = build_mesh(curve, 4);
    const auto d = distance_to_boundary(mesh, curve, ConformalMetric::euclidean());
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (mesh.on_boundary(i)) CHECK(d[i] == 0.0);
      else CHECK(d[i] == doctest::Approx(1.0 - norm(mesh.vertices()[i])).epsilon(1e-14));
    }
  }
  SUBCASE("Poincare disk of geodesic radius 1") {
    const auto curve = BoundaryCurve::circle(std::tanh(0.5));
    const Mesh mesh = build_mesh(curve, 4);
    const auto d = distance_to_boundary(mesh, curve, ConformalMetric::hyperbolic());
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (mesh.on_boundary(i)) continue;
      const double r = norm(mesh.vertices()[i]);
      CHECK(d[i] == doctest::Approx(1.0 - 2.0 * std::atanh(r)).epsilon(1e-12));
    }
  }
  SUBCASE("segment distance on a polygon") {
    const auto curve = BoundaryCurve::polyline({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
    const Mesh mesh = build_mesh(curve, 3);
    const auto d = distance_to_boundary(mesh, curve, ConformalMetric::euclidean());
    for (std::size_t i = 0; i < d.size(); ++i) {
      const Point p = mesh.vertices()[i];
      CHECK(d[i] == doctest::Approx(1.0 - std::max(std::abs(p.x), std::abs(p.y))).epsilon(1e-12));
      CHECK(d[i] >= 0.0);
    }
  }
  SUBCASE("smooth non-circular curves use segment distance") {
    const auto curve = BoundaryCurve::ellipse(2.0, 1.0);
    const Mesh mesh = build_mesh(curve, 4);
    const auto d = distance_to_boundary(mesh, curve, ConformalMetric::euclidean());
    const double inradius = *std::max_element(d.begin(), d.end());
    CHECK(inradius == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("truncated field F") {
  const auto curve = BoundaryCurve::circle(1.0);
  const Mesh mesh = build_mesh(curve, 6);
  const auto g = ConformalMetric::euclidean();
  const auto d0 = distance_to_boundary(mesh, curve, g);
  const auto F = build_F_field(mesh, g, unit_case1, 0.3, d0);
  std::size_t checked = 0;
  for (std::size_t t = 0; t < mesh.triangles().size(); ++t) {
    const Point c = centroid(mesh, t);
    const double r = norm(c);
    const auto& tri = mesh.triangles()[t];
    const bool inside = d0[tri[0]] < 0.3 || d0[tri[1]] < 0.3 || d0[tri[2]] < 0.3;
    CHECK(static_cast<bool>(F.support[t]) == inside);
    if (!inside) {
      CHECK(F.value[t].x == 0.0);
      CHECK(F.value[t].y == 0.0);
      continue;
    }
    if (std::abs(r - 0.9) < 0.01) {
      // eta = d^2/2 so grad eta = d grad d with d = 0.2, pointing outward
      CHECK(metric_norm(F, mesh, g, t) == doctest::Approx(0.2).epsilon(0.05));
      CHECK(dot(F.value[t], (1.0 / r) * c) / norm(F.value[t]) > 0.99);
      ++checked;
    }
  }
  CHECK(checked > 0);
  // boundary trace: <F, nu> -> h
  for (std::size_t k = 0; k < F.boundary_trace.size(); ++k) {
    const Point a = mesh.vertices()[mesh.boundary()[k]];
    CHECK(dot(F.boundary_trace[k], (1.0 / norm(a)) * a) == doctest::Approx(0.3).epsilon(0.03));
  }

  SUBCASE("Case2 boundary value sqrt(a) sin(sqrt(a) h)") {
    const CurvatureCase c2(CaseId::Case2, 1.0, 1.0, 1.0, 1);
    const auto F2 = build_F_field(mesh, g, c2, pi / 6, d0);
    for (const Point f : F2.boundary_trace) CHECK(norm(f) == doctest::Approx(0.5).epsilon(0.02));
  }
  SUBCASE("metric field scales by rho^-2 and has unit-speed distance") {
    const auto hcurve = BoundaryCurve::circle(std::tanh(0.5));
    const Mesh hm = build_mesh(hcurve, 6);
    const auto hg = ConformalMetric::hyperbolic();
    const auto hd = distance_to_boundary(hm, hcurve, hg);
    const CurvatureCase hc(CaseId::Case1, 1.0, 1 / std::tanh(1.0), 1 / std::tanh(1.0), 1);
    const auto HF = build_F_field(hm, hg, hc, 0.5, hd);
    for (std::size_t k = 0; k < HF.boundary_trace.size(); ++k) {
      const std::size_t a = hm.boundary()[k], b = hm.boundary()[(k + 1) % hm.boundary().size()];
      const Point m = 0.5 * (hm.vertices()[a] + hm.vertices()[b]);
      CHECK(hg.factor(m) * norm(HF.boundary_trace[k]) == doctest::Approx(0.5).epsilon(0.03));
    }
  }
  SUBCASE("h is validated") {
    CHECK_THROWS_AS(build_F_field(mesh, g, unit_case1, 0.0, d0), DomainError);
    CHECK_THROWS_AS(build_F_field(mesh, g, unit_case1, 1.0, d0), DomainError);
    const CurvatureCase wide(CaseId::Case1, 0.01, 0.1, 0.1, 1);  // hbar = 10 > inradius 1
    CHECK_THROWS_AS(build_F_field(mesh, g, wide, 1.5, d0), DomainError);
    CHECK_THROWS_AS(build_F_field(mesh, g, unit_case1, 0.5, std::span(d0).first(4)), DomainError);
  }
}

TEST_CASE("Pohozaev residual") {
  const auto curve = BoundaryCurve::circle(1.0);
  const auto g = ConformalMetric::euclidean();

  SUBCASE("constant u") {
    const Mesh mesh = build_mesh(curve, 4);
    const auto K = assemble_stiffness(mesh);
    const std::vector<double> u(mesh.vertex_count(), 0.0);
    const auto r = pohozaev_residual(mesh, g, K, u, position_field(mesh));
    CHECK(r.i1 == 0.0);
    CHECK(r.i2 == 0.0);
    CHECK(r.i3 == 0.0);
    CHECK(r.i4 == 0.0);
    CHECK(r.residual == 0.0);
    const std::vector<double> c(mesh.vertex_count(), 3.0);
    const auto rc = pohozaev_residual(mesh, g, K, c, position_field(mesh));
    CHECK(std::abs(rc.residual) < 1e-20);
    CHECK(std::abs(rc.i4) < 1e-20);
  }
  SUBCASE("position field, u = Re z: every term is pi") {
    double previous = 1.0;
    for (int ref = 4; ref <= 6; ++ref) {
      const Mesh mesh = build_mesh(curve, ref);
      const auto u = nodal(mesh, re_z);
      const auto r = pohozaev_residual(mesh, g, assemble_stiffness(mesh), u, position_field(mesh));
      for (double term : {r.i1, r.i2, r.i3, r.i4}) CHECK(term == doctest::Approx(pi).epsilon(0.01));
      CHECK(std::abs(r.residual) < previous);
      previous = std::abs(r.residual);
      if (ref == 6) {
        CHECK(std::abs(r.residual) <= 1e-3 * r.i4);
        CHECK(r.h_mesh == doctest::Approx(mesh.max_edge_length()));
      }
    }
  }
  SUBCASE("truncated field, u = Re z: annulus integrals") {
    const double h = 0.5;
    const Mesh mesh = build_mesh(curve, 6);
    const auto d0 = distance_to_boundary(mesh, curve, g);
    const auto r = pohozaev_residual(mesh, g, assemble_stiffness(mesh), nodal(mesh, re_z),
                                     build_F_field(mesh, g, unit_case1, h, d0));
    const double ring = 1.0 - (1.0 - h) * (1.0 - h);
    CHECK(r.i1 == doctest::Approx(pi * h).epsilon(0.02));
    CHECK(r.i2 == doctest::Approx(pi * h).epsilon(0.02));
    CHECK(r.i3 == doctest::Approx(pi * (h * h + ring) / 2).epsilon(0.02));
    CHECK(r.i4 == doctest::Approx(pi * (h * h + ring) / 2).epsilon(0.02));
  }
  SUBCASE("truncated field, u = Re z^2: order >= 1") {
    std::vector<double> res, hm;
    for (int ref = 4; ref <= 6; ++ref) {
      const Mesh mesh = build_mesh(curve, ref);
      const auto d0 = distance_to_boundary(mesh, curve, g);
      const auto r = pohozaev_residual(mesh, g, assemble_stiffness(mesh), nodal(mesh, re_z2),
                                       build_F_field(mesh, g, unit_case1, 0.5, d0));
      res.push_back(std::abs(r.residual));
      hm.push_back(r.h_mesh);
    }
    for (std::size_t k = 1; k < res.size(); ++k) {
      const double order = std::log(res[k - 1] / res[k]) / std::log(hm[k - 1] / hm[k]);
      CHECK(order >= 1.0);
    }
  }
  SUBCASE("metric terms cancel in the residual") {
    const auto hcurve = BoundaryCurve::circle(0.5);
    const Mesh mesh = build_mesh(hcurve, 5);
    const auto K = assemble_stiffness(mesh);
    const auto u = nodal(mesh, re_z2);
    const auto F = position_field(mesh);
    const auto flat = pohozaev_residual(mesh, g, K, u, F);
    const auto hyp = pohozaev_residual(mesh, ConformalMetric::hyperbolic(), K, u, F);
    const auto sph = pohozaev_residual(mesh, ConformalMetric::spherical(2.0), K, u, F);
    CHECK(hyp.i1 == doctest::Approx(flat.i1));
    CHECK(hyp.i3 != doctest::Approx(flat.i3));
    CHECK(hyp.residual == doctest::Approx(flat.residual).epsilon(1e-9).scale(1.0));
    CHECK(sph.residual == doctest::Approx(flat.residual).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("weak normal derivative") {
  const auto curve = BoundaryCurve::circle(1.0);
  const Mesh mesh = build_mesh(curve, 6);
  const auto q = weak_normal_derivative(mesh, assemble_stiffness(mesh), nodal(mesh, re_z2));
  // d_r (r^2 cos 2 theta) = 2 cos 2 theta on the unit circle
  double err = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    const Point p = mesh.vertices()[mesh.boundary()[k]];
    err = std::max(err, std::abs(q[k] - 2.0 * re_z2(p)));
  }
  CHECK(err < 0.02);
}

TEST_CASE("Q-form integral") {
  const auto curve = BoundaryCurve::circle(1.0);
  const auto g = ConformalMetric::euclidean();
  const Mesh mesh = build_mesh(curve, 6);
  const auto d0 = distance_to_boundary(mesh, curve, g);

  SUBCASE("constant u") {
    const std::vector<double> u(mesh.vertex_count(), 0.0);
    const auto q = q_integral_check(mesh, g, unit_case1, u, 0.5, d0);
    CHECK(q.value == 0.0);
    CHECK(q.lo == 0.0);
    CHECK(q.hi == 0.0);
    CHECK(q.pass);
  }
  SUBCASE("u = Re z within [-pi, pi]") {
    const auto q = q_integral_check(mesh, g, unit_case1, nodal(mesh, re_z), 0.5, d0);
    CHECK(q.dirichlet == doctest::Approx(pi).epsilon(1e-3));
    CHECK(q.lo == doctest::Approx(-q.dirichlet));
    CHECK(q.hi == doctest::Approx(q.dirichlet));
    CHECK(q.pass);
    CHECK(q.slack > 0.0);
  }
  SUBCASE("hyperbolic disk first eigenfunction") {
    const auto hcurve = BoundaryCurve::circle(std::tanh(0.5));
    const auto hg = ConformalMetric::hyperbolic();
    const SteklovProblem P(build_mesh(hcurve, 6), hg);
    const auto pairs = steklov_eigenpairs(P, 2);
    const auto u = P.elimination.extend(pairs.vectors.col(1));
    const auto hd = distance_to_boundary(P.mesh, hcurve, hg);
    const CurvatureCase hc(CaseId::Case1, 1.0, 1 / std::tanh(1.0), 1 / std::tanh(1.0), 1);
    const double hbar = spaceform::max_tube_width(hc);
    const auto q = q_integral_check(P.mesh, hg, hc, u, 0.5 * hbar, hd);
    CHECK(q.pass);
    CHECK(q.slack >= 0.0);
    // Dirichlet energy of an M_b-normalised eigenfunction is sigma
    CHECK(q.dirichlet == doctest::Approx(pairs.values[1]).epsilon(1e-9));
    const auto sweep = q_integral_sweep(P.mesh, hg, hc, u, hd);
    REQUIRE(sweep.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(sweep[k].h == doctest::Approx(h_sweep_fractions[k] * hbar));
      CHECK(sweep[k].pass);
    }
  }
}

TEST_CASE("boundary energy equivalence on eigenfunctions") {
  const auto g = ConformalMetric::euclidean();
  SUBCASE("flat unit disk") {
    const SteklovProblem P(build_mesh(BoundaryCurve::circle(1.0), 6), g);
    const auto pairs = steklov_eigenpairs(P, 11);
    const auto res = proposition1_check(P, unit_case1, pairs, 0.01);
    REQUIRE(res.rows.size() == 11);
    CHECK(res.report.passed());
    CHECK(res.rows[0].tangential == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(res.rows[0].flux == 0.0);
    // j = 1: T = N = 1, slack of the first inequality = n kappa sqrt(N) = 1
    CHECK(res.rows[1].tangential == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(res.rows[1].flux == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(res.report.records()[2].slack == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(res.report.records()[1].slack == doctest::Approx(1.0).epsilon(1e-9));  // j = 0: kappa/2 + kappa/2
    CHECK(res.max_flux_rel_error <= flux_consistency_tolerance);
  }
  SUBCASE("flat ellipse and hyperbolic disk") {
    const auto ellipse = BoundaryCurve::ellipse(2.0, 1.0);
    const SteklovProblem E(build_mesh(ellipse, 6), g);
    const auto kr = metric_curvature_range(ellipse, g);
    const CurvatureCase ec(CaseId::Case1, kr.min * kr.min, kr.min, kr.max, 1);
    const auto er = proposition1_check(E, ec, steklov_eigenpairs(E, 11), 0.01 * kr.max);
    CHECK(er.report.passed());
    CHECK(er.max_flux_rel_error <= flux_consistency_tolerance);

    const auto hg = ConformalMetric::hyperbolic();
    const SteklovProblem H(build_mesh(BoundaryCurve::circle(std::tanh(0.5)), 6), hg);
    const double kt = 1 / std::tanh(1.0);
    const auto hr = proposition1_check(H, CurvatureCase(CaseId::Case1, 1.0, kt, kt, 1),
                                       steklov_eigenpairs(H, 11), 0.01 * kt);
    CHECK(hr.report.passed());
    // sigma_k = k / sinh 1 and T = k^2 / sinh^2 1 in the limit
    CHECK(hr.rows[1].tangential == doctest::Approx(1 / std::pow(std::sinh(1.0), 2)).epsilon(1e-3));
  }
}

TEST_CASE("identities CSV") {
  std::ostringstream out;
  const std::vector<IdentityRow> rows{{"pohozaev", 0.5, 0, 1.0, 0.0, 0.0, -2.5e-4, true}};
  write_identity_csv(out, "disk", 6, rows);
  CHECK(out.str() ==
        "domain,refinement,h,j,check,value,lo,hi,residual,pass\n"
        "disk,6,5.0000000000000000e-01,0,pohozaev,1.0000000000000000e+00,0.0000000000000000e+00,"
        "0.0000000000000000e+00,-2.5000000000000001e-04,1\n");
}
