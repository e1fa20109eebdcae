#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <variant>

#include "steklov/error.hpp"
#include "steklov/fem2d.hpp"
#include "steklov/kernels.hpp"

namespace steklov::fem {

using linalg::CsrMatrix;
using linalg::SymMatrix;
using linalg::Triplet;

ElementGeometry element_geometry(const Mesh& mesh, std::size_t t) {
  const Triangle& tri = mesh.triangles()[t];
  const auto v = mesh.vertices();
  const Point p0 = v[tri[0]], p1 = v[tri[1]], p2 = v[tri[2]];
  const double d = cross(p1 - p0, p2 - p0);
  ElementGeometry g;
  g.area = 0.5 * d;
  g.grad[0] = {(p1.y - p2.y) / d, (p2.x - p1.x) / d};
  g.grad[1] = {(p2.y - p0.y) / d, (p0.x - p2.x) / d};
  g.grad[2] = {(p0.y - p1.y) / d, (p1.x - p0.x) / d};
  return g;
}

Point element_gradient(const Mesh& mesh, std::size_t t, std::span<const double> u) {
  const ElementGeometry g = element_geometry(mesh, t);
  const Triangle& tri = mesh.triangles()[t];
  return u[tri[0]] * g.grad[0] + u[tri[1]] * g.grad[1] + u[tri[2]] * g.grad[2];
}

CsrMatrix assemble_stiffness(const Mesh& mesh) {
  std::vector<Triplet> entries;
  entries.reserve(9 * mesh.triangles().size());
  for (std::size_t t = 0; t < mesh.triangles().size(); ++t) {
    const ElementGeometry g = element_geometry(mesh, t);
    const Triangle& tri = mesh.triangles()[t];
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) entries.push_back({tri[i], tri[j], g.area * dot(g.grad[i], g.grad[j])});
  }
  return CsrMatrix(mesh.vertex_count(), mesh.vertex_count(), std::move(entries));
}

CsrMatrix assemble_boundary_mass(const Mesh& mesh, const ConformalMetric& metric, MassMode mode) {
  const auto ring = mesh.boundary();
  const auto v = mesh.vertices();
  const std::size_t n = ring.size();
  for (std::size_t k = 0; k < n; ++k)
    if (!metric.valid_at(v[ring[k]]))
      throw DomainError("metric undefined at boundary vertex " + std::to_string(ring[k]));
  std::vector<Triplet> entries;
  entries.reserve(4 * n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t l = (k + 1) % n;
    const Point a = v[ring[k]], b = v[ring[l]];
    const double w = norm(b - a) * metric.factor(0.5 * (a + b));
    if (mode == MassMode::Consistent) {
      entries.push_back({k, k, w / 3.0});
      entries.push_back({l, l, w / 3.0});
      entries.push_back({k, l, w / 6.0});
      entries.push_back({l, k, w / 6.0});
    } else {
      entries.push_back({k, k, w / 2.0});
      entries.push_back({l, l, w / 2.0});
    }
  }
  return CsrMatrix(n, n, std::move(entries));
}

struct InteriorElimination::Impl {
  std::vector<std::size_t> boundary;
  std::vector<std::size_t> interior;
  CsrMatrix a_bb;
  CsrMatrix a_bi;  // row b is column b of A_ib
  std::variant<linalg::Cholesky, linalg::ProfileCholesky> factor;

  Impl(const Mesh& mesh, const CsrMatrix& a, const SolverOptions& opts)
      : boundary(mesh.boundary().begin(), mesh.boundary().end()),
        interior(mesh.interior().begin(), mesh.interior().end()),
        a_bb(a.block(boundary, boundary)),
        a_bi(a.block(boundary, interior)),
        factor(make_factor(a.block(interior, interior), opts)) {}

  static std::variant<linalg::Cholesky, linalg::ProfileCholesky> make_factor(const CsrMatrix& a_ii,
                                                                             const SolverOptions& opts) {
    try {
      if (a_ii.rows() < opts.dense_threshold) return linalg::Cholesky(a_ii.to_sym());
      return linalg::ProfileCholesky(a_ii);
    } catch (const NotPositiveDefinite& e) {
      throw MeshError(std::string("interior block is singular, the mesh is broken: ") + e.what());
    }
  }

  // w <- L^{-1} P column b of A_ib; returns the first possibly nonzero index.
  std::size_t forward_column(std::size_t b, std::span<double> w) const {
    std::fill(w.begin(), w.end(), 0.0);
    const auto cols = a_bi.row_cols(b);
    const auto vals = a_bi.row_values(b);
    if (const auto* pc = std::get_if<linalg::ProfileCholesky>(&factor)) {
      const auto inv = pc->inverse_permutation();
      std::size_t start = w.size();
      for (std::size_t k = 0; k < cols.size(); ++k) {
        w[inv[cols[k]]] = vals[k];
        start = std::min(start, inv[cols[k]]);
      }
      if (start < w.size()) pc->forward_permuted(w, start);
      return std::min(start, w.size());
    }
    for (std::size_t k = 0; k < cols.size(); ++k) w[cols[k]] = vals[k];
    std::get<linalg::Cholesky>(factor).forward(w);
    return 0;
  }

  void solve(std::span<double> x) const {
    if (const auto* pc = std::get_if<linalg::ProfileCholesky>(&factor))
      pc->solve(x);
    else
      std::get<linalg::Cholesky>(factor).solve(x);
  }
};

InteriorElimination::InteriorElimination(const Mesh& mesh, const CsrMatrix& stiffness, const SolverOptions& opts) {
  if (stiffness.rows() != mesh.vertex_count() || stiffness.cols() != mesh.vertex_count())
    throw MeshError("stiffness matrix does not match the mesh");
  if (mesh.interior().empty()) throw MeshError("mesh has no interior vertices");
  impl_ = std::make_unique<Impl>(mesh, stiffness, opts);
}

InteriorElimination::~InteriorElimination() = default;
InteriorElimination::InteriorElimination(InteriorElimination&&) noexcept = default;
InteriorElimination& InteriorElimination::operator=(InteriorElimination&&) noexcept = default;

bool InteriorElimination::dense() const noexcept { return std::holds_alternative<linalg::Cholesky>(impl_->factor); }

std::vector<double> InteriorElimination::extend(std::span<const double> f) const {
  const Impl& m = *impl_;
  if (f.size() != m.boundary.size()) throw DomainError("boundary data size does not match the ring");
  std::vector<double> rhs(m.interior.size(), 0.0);
  for (std::size_t b = 0; b < m.boundary.size(); ++b) {
    const auto cols = m.a_bi.row_cols(b);
    const auto vals = m.a_bi.row_values(b);
    for (std::size_t k = 0; k < cols.size(); ++k) rhs[cols[k]] -= vals[k] * f[b];
  }
  m.solve(rhs);
  std::vector<double> u(m.boundary.size() + m.interior.size());
  for (std::size_t b = 0; b < m.boundary.size(); ++b) u[m.boundary[b]] = f[b];
  for (std::size_t i = 0; i < m.interior.size(); ++i) u[m.interior[i]] = rhs[i];
  return u;
}

SymMatrix InteriorElimination::schur_complement() const {
  const Impl& m = *impl_;
  const std::size_t nb = m.boundary.size(), ni = m.interior.size();
  linalg::Matrix w(ni, nb);
  std::vector<std::size_t> start(nb);
  for (std::size_t b = 0; b < nb; ++b) start[b] = m.forward_column(b, w.col(b));
  SymMatrix s(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    const auto row = s.row(i);
    for (std::size_t j = 0; j <= i; ++j) {
      const std::size_t lo = std::max(start[i], start[j]);
      const double g = lo < ni ? kernels::dot(w.col(i).subspan(lo), w.col(j).subspan(lo)) : 0.0;
      row[j] = m.a_bb.at(i, j) - g;
    }
  }
  return s;
}

SymMatrix dtn_matrix(const CsrMatrix& stiffness, const Mesh& mesh, const SolverOptions& opts) {
  return InteriorElimination(mesh, stiffness, opts).schur_complement();
}

std::vector<double> harmonic_extension(const Mesh& mesh, const CsrMatrix& stiffness,
                                       std::span<const double> boundary_values) {
  return InteriorElimination(mesh, stiffness).extend(boundary_values);
}

SteklovProblem::SteklovProblem(Mesh m, ConformalMetric g, MassMode mode, const SolverOptions& opts)
    : mesh(std::move(m)),
      metric(g),
      stiffness(assemble_stiffness(mesh)),
      boundary_mass(assemble_boundary_mass(mesh, metric, mode)),
      elimination(mesh, stiffness, opts),
      dtn(elimination.schur_complement()) {}

linalg::EigenPairs steklov_eigenpairs(const SteklovProblem& problem, std::size_t count) {
  const std::size_t n = problem.dtn.size();
  if (count == 0 || count > n)
    throw DomainError("requested " + std::to_string(count) + " Steklov pairs from a ring of " + std::to_string(n));
  return linalg::sym_generalized_eig(problem.dtn, problem.boundary_mass.to_sym(), count);
}

SpectrumTable to_spectrum_table(std::span<const double> values) {
  if (values.empty()) throw DomainError("empty eigenvalue list");
  if (!(std::abs(values[0]) <= 1e-9))
    throw Error("lowest Steklov value " + std::to_string(values[0]) + " is not zero");
  std::vector<SpectrumEntry> entries{{0.0, 1, 0}};
  for (std::size_t k = 1; k < values.size(); ++k) entries.push_back({std::max(values[k], 0.0), 1, k});
  return SpectrumTable(SpectrumKind::Steklov, std::move(entries));
}

SpectrumTable steklov_spectrum_fem(const SteklovProblem& problem, std::size_t count) {
  return to_spectrum_table(steklov_eigenpairs(problem, count).values);
}

SpectrumTable boundary_laplacian_spectrum_curve(double g_length, std::size_t count) {
  if (!(g_length > 0.0)) throw DomainError("curve length must be positive");
  if (count == 0) throw DomainError("spectrum count must be >= 1");
  std::vector<SpectrumEntry> entries{{0.0, 1, 0}};
  for (std::size_t m = 1, total = 1; total < count; ++m, total += 2)
    entries.push_back({std::pow(2.0 * std::numbers::pi * m / g_length, 2), 2, m});
  return SpectrumTable(SpectrumKind::BoundaryLaplacian, std::move(entries));
}

}  // namespace steklov::fem
