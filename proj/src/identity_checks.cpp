#include "steklov/identity_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <unordered_map>

#include "steklov/error.hpp"
#include "steklov/report_format.hpp"

namespace steklov::identity {

using fem::ConformalMetric;
using fem::Mesh;
using fem::Point;

namespace {

double point_segment_distance(Point p, Point a, Point b, Point& closest) {
  const Point e = b - a;
  const double len2 = dot(e, e);
  const double t = len2 > 0.0 ? std::clamp(dot(p - a, e) / len2, 0.0, 1.0) : 0.0;
  closest = a + t * e;
  return fem::norm(p - closest);
}

// Triangle owning each boundary edge (boundary[k], boundary[k+1]).
std::vector<std::size_t> boundary_edge_triangles(const Mesh& mesh) {
  const std::size_t nv = mesh.vertex_count();
  std::unordered_map<std::size_t, std::size_t> owner;
  const auto tris = mesh.triangles();
  for (std::size_t t = 0; t < tris.size(); ++t)
    for (int e = 0; e < 3; ++e) {
      const std::size_t i = tris[t][e], j = tris[t][(e + 1) % 3];
      if (mesh.on_boundary(i) && mesh.on_boundary(j)) owner.emplace(i * nv + j, t);
    }
  const auto ring = mesh.boundary();
  std::vector<std::size_t> out(ring.size());
  for (std::size_t k = 0; k < ring.size(); ++k) {
    const auto it = owner.find(ring[k] * nv + ring[(k + 1) % ring.size()]);
    if (it == owner.end()) throw MeshError("boundary edge without owning triangle");
    out[k] = it->second;
  }
  return out;
}

Point centroid(const Mesh& mesh, std::size_t t) {
  const auto v = mesh.vertices();
  const auto& tri = mesh.triangles()[t];
  return (1.0 / 3.0) * (v[tri[0]] + v[tri[1]] + v[tri[2]]);
}

// Least-squares gradient of a nodal field at each vertex from its one-ring.
std::vector<Point> recover_gradient(const Mesh& mesh, std::span<const double> f) {
  const std::size_t nv = mesh.vertex_count();
  std::vector<std::array<double, 5>> normal(nv, {0, 0, 0, 0, 0});  // sxx sxy syy bx by
  std::vector<Point> area_avg(nv);
  std::vector<double> area_sum(nv, 0.0);
  const auto v = mesh.vertices();
  for (std::size_t t = 0; t < mesh.triangles().size(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const double area = mesh.triangle_area(t);
    const Point g = fem::element_gradient(mesh, t, f);
    for (int a = 0; a < 3; ++a) {
      area_avg[tri[a]] = area_avg[tri[a]] + area * g;
      area_sum[tri[a]] += area;
      // each interior edge is seen twice; the duplicate weight is harmless
      for (int b = 0; b < 3; ++b) {
        if (a == b) continue;
        const Point d = v[tri[b]] - v[tri[a]];
        const double df = f[tri[b]] - f[tri[a]];
        auto& s = normal[tri[a]];
        s[0] += d.x * d.x;
        s[1] += d.x * d.y;
        s[2] += d.y * d.y;
        s[3] += d.x * df;
        s[4] += d.y * df;
      }
    }
  }
  std::vector<Point> g(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    const auto& s = normal[i];
    const double det = s[0] * s[2] - s[1] * s[1];
    if (det > 1e-12 * (s[0] + s[2]) * (s[0] + s[2]))
      g[i] = {(s[2] * s[3] - s[1] * s[4]) / det, (s[0] * s[4] - s[1] * s[3]) / det};
    else
      g[i] = (1.0 / area_sum[i]) * area_avg[i];
  }
  return g;
}

std::array<double, 4> flat_identity() { return {1.0, 0.0, 0.0, 1.0}; }

double trace(const std::array<double, 4>& m) { return m[0] + m[3]; }

double quadratic(const std::array<double, 4>& m, Point x) {
  return x.x * (m[0] * x.x + m[1] * x.y) + x.y * (m[2] * x.x + m[3] * x.y);
}

}  // namespace

std::vector<double> distance_to_boundary(const Mesh& mesh, const fem::BoundaryCurve& curve,
                                         const ConformalMetric& metric) {
  const auto v = mesh.vertices();
  std::vector<double> d(mesh.vertex_count(), 0.0);
  const bool flat = metric.model() == ConformalMetric::Model::Euclidean;
  const Point c = curve.center();
  if (curve.kind() == fem::BoundaryCurve::Kind::Circle && (flat || (c.x == 0.0 && c.y == 0.0))) {
    const double R = curve.circle_radius();
    const double outer = metric.geodesic_radius(R);
    for (std::size_t i = 0; i < d.size(); ++i)
      if (!mesh.on_boundary(i))
        d[i] = flat ? R - fem::norm(v[i] - c) : outer - metric.geodesic_radius(fem::norm(v[i]));
  } else {
    const auto ring = mesh.boundary();
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (mesh.on_boundary(i)) continue;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < ring.size(); ++k) {
        Point q;
        const double dist = point_segment_distance(v[i], v[ring[k]], v[ring[(k + 1) % ring.size()]], q);
        best = std::min(best, dist * metric.factor(0.5 * (v[i] + q)));
      }
      d[i] = best;
    }
  }
  for (double& x : d) x = std::max(x, 0.0);
  return d;
}

VectorFieldOnMesh build_F_field(const Mesh& mesh, const ConformalMetric& metric,
                                const spaceform::CurvatureCase& c, double h,
                                std::span<const double> d0) {
  if (d0.size() != mesh.vertex_count()) throw DomainError("distance field size does not match the mesh");
  const double hbar = spaceform::max_tube_width(c);
  if (!(h > 0.0) || !(h < hbar))
    throw DomainError("tube width h = " + std::to_string(h) + " outside (0, " + std::to_string(hbar) + ")");
  const double inradius = *std::max_element(d0.begin(), d0.end());
  if (h > inradius)
    throw DomainError("tube width h = " + std::to_string(h) + " exceeds the inradius " + std::to_string(inradius));

  const std::size_t nv = mesh.vertex_count(), nt = mesh.triangles().size();
  std::vector<double> d(nv), raw(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    raw[i] = h - d0[i];
    d[i] = std::max(raw[i], 0.0);
  }
  const std::vector<Point> grad = recover_gradient(mesh, raw);
  std::vector<double> gx(nv), gy(nv);
  for (std::size_t i = 0; i < nv; ++i) gx[i] = grad[i].x, gy[i] = grad[i].y;

  VectorFieldOnMesh F;
  F.value.assign(nt, Point{});
  F.jacobian.assign(nt, {0, 0, 0, 0});
  F.support.assign(nt, 0);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles()[t];
    if (!(d0[tri[0]] < h || d0[tri[1]] < h || d0[tri[2]] < h)) continue;
    F.support[t] = 1;
    const Point p = centroid(mesh, t);
    const double rho = metric.factor(p);
    const double inv2 = 1.0 / (rho * rho);
    const Point phi = metric.grad_log_factor(p);
    const double dc = (d[tri[0]] + d[tri[1]] + d[tri[2]]) / 3.0;
    const double e1 = spaceform::eta_prime(c, dc), e2 = spaceform::eta_second(c, dc);
    const Point g = fem::element_gradient(mesh, t, d);
    const Point hx = fem::element_gradient(mesh, t, gx), hy = fem::element_gradient(mesh, t, gy);
    const double hxy = 0.5 * (hx.y + hy.x);
    const std::array<double, 4> hess{hx.x, hxy, hxy, hy.y};
    F.value[t] = (inv2 * e1) * g;
    // d_j F^i = rho^-2 (eta'' d_i d_j + eta' d_ij - 2 eta' d_i phi_j)
    const double gi[2] = {g.x, g.y}, pj[2] = {phi.x, phi.y};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        F.jacobian[t][2 * i + j] = inv2 * (e2 * gi[i] * gi[j] + e1 * hess[2 * i + j] - 2.0 * e1 * gi[i] * pj[j]);
  }

  const auto ring = mesh.boundary();
  const auto owners = boundary_edge_triangles(mesh);
  const auto v = mesh.vertices();
  F.boundary_trace.resize(ring.size());
  for (std::size_t k = 0; k < ring.size(); ++k) {
    const std::size_t a = ring[k], b = ring[(k + 1) % ring.size()], t = owners[k];
    const Point m = 0.5 * (v[a] + v[b]);
    const double rho = metric.factor(m);
    const double dm = 0.5 * (d[a] + d[b]);
    F.boundary_trace[k] = (spaceform::eta_prime(c, dm) / (rho * rho)) * fem::element_gradient(mesh, t, d);
  }
  return F;
}

VectorFieldOnMesh position_field(const Mesh& mesh) {
  const std::size_t nt = mesh.triangles().size();
  VectorFieldOnMesh F;
  F.value.resize(nt);
  F.jacobian.assign(nt, flat_identity());
  F.support.assign(nt, 1);
  for (std::size_t t = 0; t < nt; ++t) F.value[t] = centroid(mesh, t);
  const auto ring = mesh.boundary();
  const auto v = mesh.vertices();
  F.boundary_trace.resize(ring.size());
  for (std::size_t k = 0; k < ring.size(); ++k)
    F.boundary_trace[k] = 0.5 * (v[ring[k]] + v[ring[(k + 1) % ring.size()]]);
  return F;
}

double metric_norm(const VectorFieldOnMesh& F, const Mesh& mesh, const ConformalMetric& metric,
                   std::size_t t) {
  return metric.factor(centroid(mesh, t)) * fem::norm(F.value[t]);
}

std::vector<double> weak_normal_derivative(const Mesh& mesh, const linalg::CsrMatrix& stiffness,
                                           std::span<const double> u) {
  const auto ring = mesh.boundary();
  const std::size_t n = ring.size();
  std::vector<double> rhs(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const auto cols = stiffness.row_cols(ring[k]);
    const auto vals = stiffness.row_values(ring[k]);
    for (std::size_t e = 0; e < cols.size(); ++e) rhs[k] += vals[e] * u[cols[e]];
  }
  const auto mass = fem::assemble_boundary_mass(mesh, ConformalMetric::euclidean()).to_sym();
  return linalg::spd_solve(mass, rhs);
}

IdentityResidual pohozaev_residual(const Mesh& mesh, const ConformalMetric& metric,
                                   const linalg::CsrMatrix& stiffness, std::span<const double> u,
                                   const VectorFieldOnMesh& F) {
  if (u.size() != mesh.vertex_count()) throw DomainError("nodal field size does not match the mesh");
  IdentityResidual r;
  r.h_mesh = mesh.max_edge_length();
  const auto v = mesh.vertices();
  const auto ring = mesh.boundary();
  const auto owners = boundary_edge_triangles(mesh);
  const std::vector<double> q = weak_normal_derivative(mesh, stiffness, u);
  for (std::size_t k = 0; k < ring.size(); ++k) {
    const std::size_t l = (k + 1) % ring.size();
    const Point e = v[ring[l]] - v[ring[k]];
    const double len = fem::norm(e);
    const Point nu{e.y / len, -e.x / len};
    const Point gu = fem::element_gradient(mesh, owners[k], u);
    const Point f = F.boundary_trace[k];
    r.i1 += len * 0.5 * (q[k] + q[l]) * dot(f, gu);
    r.i2 += 0.5 * len * dot(gu, gu) * dot(f, nu);
  }
  for (std::size_t t = 0; t < mesh.triangles().size(); ++t) {
    if (!F.support[t]) continue;
    const double area = mesh.triangle_area(t);
    const Point gu = fem::element_gradient(mesh, t, u);
    const double g2 = dot(gu, gu);
    const double f_phi = dot(F.value[t], metric.grad_log_factor(centroid(mesh, t)));
    r.i3 += 0.5 * area * g2 * (trace(F.jacobian[t]) + 2.0 * f_phi);
    r.i4 += area * (quadratic(F.jacobian[t], gu) + f_phi * g2);
  }
  r.residual = r.i1 - r.i2 + r.i3 - r.i4;
  return r;
}

QIntegral q_integral_check(const Mesh& mesh, const ConformalMetric& metric,
                           const spaceform::CurvatureCase& c, std::span<const double> u, double h,
                           std::span<const double> d0, double slack_fraction) {
  if (u.size() != mesh.vertex_count()) throw DomainError("nodal field size does not match the mesh");
  const VectorFieldOnMesh F = build_F_field(mesh, metric, c, h, d0);
  QIntegral out;
  out.h = h;
  for (std::size_t t = 0; t < mesh.triangles().size(); ++t) {
    const double area = mesh.triangle_area(t);
    const Point gu = fem::element_gradient(mesh, t, u);
    const double g2 = dot(gu, gu);
    out.dirichlet += area * g2;
    // |grad_g u|^2 div_g F - 2 grad_g F(grad_g u, grad_g u): the phi terms cancel
    if (F.support[t]) out.value += area * (g2 * trace(F.jacobian[t]) - 2.0 * quadratic(F.jacobian[t], gu));
  }
  const auto b = spaceform::q_form_bounds(c, out.dirichlet);
  out.lo = b.lo;
  out.hi = b.hi;
  out.slack = std::min(out.value - out.lo, out.hi - out.value);
  out.pass = out.slack >= -slack_fraction * out.dirichlet;
  return out;
}

std::vector<QIntegral> q_integral_sweep(const Mesh& mesh, const ConformalMetric& metric,
                                        const spaceform::CurvatureCase& c, std::span<const double> u,
                                        std::span<const double> d0, std::span<const double> fractions) {
  const double hbar = spaceform::max_tube_width(c);
  const double inradius = *std::max_element(d0.begin(), d0.end());
  std::vector<QIntegral> out;
  for (double f : fractions) {
    const double h = f * hbar;
    if (h > inradius) continue;
    out.push_back(q_integral_check(mesh, metric, c, u, h, d0));
  }
  return out;
}

Proposition1Result proposition1_check(const fem::SteklovProblem& problem,
                                      const spaceform::CurvatureCase& c,
                                      const linalg::EigenPairs& pairs, double tolerance) {
  const Mesh& mesh = problem.mesh;
  const auto v = mesh.vertices();
  const auto ring = mesh.boundary();
  const std::size_t n = ring.size();
  const double kt = bounds::effective_kappa(c).kappa_tilde;
  const double dim = c.n();

  std::vector<double> edge_g(n), lumped(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const Point a = v[ring[k]], b = v[ring[(k + 1) % n]];
    edge_g[k] = fem::norm(b - a) * problem.metric.factor(0.5 * (a + b));
    lumped[k] += 0.5 * edge_g[k];
    lumped[(k + 1) % n] += 0.5 * edge_g[k];
  }

  Proposition1Result out{{}, bounds::BoundReport(tolerance), 0.0};
  for (std::size_t j = 0; j < pairs.values.size(); ++j) {
    const auto x = pairs.vectors.col(j);
    Proposition1Row row;
    row.j = j;
    row.sigma = j == 0 ? 0.0 : std::max(pairs.values[j], 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const double du = x[(k + 1) % n] - x[k];
      row.tangential += du * du / edge_g[k];
    }
    row.flux = row.sigma * row.sigma;
    const std::vector<double> sx = problem.dtn.multiply(x);
    for (std::size_t k = 0; k < n; ++k) row.flux_direct += sx[k] * sx[k] / lumped[k];
    row.flux_rel_error = row.flux > 0.0 ? std::abs(row.flux_direct - row.flux) / row.flux : 0.0;
    if (j > 0) out.max_flux_rel_error = std::max(out.max_flux_rel_error, row.flux_rel_error);
    const double rn = std::sqrt(row.flux);
    out.report.add(j, row.sigma, row.tangential, "proposition1_i", row.tangential, row.flux + dim * kt * rn);
    out.report.add(j, row.sigma, row.tangential, "proposition1_ii", rn,
                   0.5 * kt + std::sqrt(0.25 * kt * kt + row.tangential));
    out.rows.push_back(row);
  }
  return out;
}

void write_identity_csv(std::ostream& out, const std::string& domain, int refinement,
                        std::span<const IdentityRow> rows, bool header) {
  if (header) out << "domain,refinement,h,j,check,value,lo,hi,residual,pass\n";
  for (const IdentityRow& r : rows)
    out << domain << ',' << refinement << ',' << sci(r.h) << ',' << r.j << ',' << r.check << ','
        << sci(r.value) << ',' << sci(r.lo) << ',' << sci(r.hi) << ',' << sci(r.residual) << ','
        << (r.pass ? 1 : 0) << '\n';
}

}  // namespace steklov::identity
