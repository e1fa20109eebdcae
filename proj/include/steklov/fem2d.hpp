#pragma once

// P1 finite elements on planar triangulations carrying a conformal metric
// rho^2 (dx^2 + dy^2). In two dimensions the Dirichlet energy is conformally
// invariant, so the stiffness matrix is the flat one and only the boundary
// measure rho ds sees the metric.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "steklov/linalg.hpp"
#include "steklov/sparse.hpp"
#include "steklov/spectrum.hpp"

namespace steklov::fem {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double norm(Point a);

/// Closed boundary curve. Circle and StarShaped curves are smooth and are
/// parametrised by the polar angle theta about their centre; StarShaped
/// curves interpolate r(theta_i) on a uniform grid trigonometrically.
class BoundaryCurve {
public:
  enum class Kind { Circle, StarShaped, Polyline };

  static BoundaryCurve circle(double radius, Point center = {});
  /// radii[i] = r(2 pi i / size), all strictly positive.
  static BoundaryCurve star_shaped(std::vector<double> radii, Point center = {});
  /// Ellipse with the given semi-axes, sampled as a star-shaped curve.
  static BoundaryCurve ellipse(double semi_x, double semi_y, std::size_t samples = 512);
  /// Simple closed polygon, star-shaped about its area centroid. Either orientation.
  static BoundaryCurve polyline(std::vector<Point> vertices);

  Kind kind() const noexcept { return kind_; }
  bool smooth() const noexcept { return kind_ != Kind::Polyline; }
  Point center() const noexcept { return center_; }
  double circle_radius() const;
  std::span<const double> radial_samples() const noexcept { return radii_; }
  /// Counter-clockwise polygon vertices (Polyline only).
  std::span<const Point> polyline_vertices() const noexcept { return vertices_; }

  /// Smooth curves only: r(theta) and its first two derivatives.
  double radial(double theta, int derivative = 0) const;
  Point position(double theta) const;
  /// dP/dtheta and d2P/dtheta2.
  Point velocity(double theta) const;
  Point acceleration(double theta) const;
  Point outward_normal(double theta) const;
  /// Flat signed curvature, positive where the curve is convex.
  double flat_curvature(double theta) const;

  double area() const;
  double flat_length() const;

private:
  BoundaryCurve() = default;

  Kind kind_ = Kind::Circle;
  Point center_{};
  std::vector<double> radii_;
  std::vector<double> cos_coef_;  // trigonometric interpolant of r
  std::vector<double> sin_coef_;
  std::vector<Point> vertices_;
};

/// rho^2 |dx|^2 on a planar model of the space form of curvature K.
class ConformalMetric {
public:
  enum class Model { Euclidean, Poincare, Stereographic };

  static ConformalMetric euclidean();
  /// Curvature -a on the unit disk: rho = 2 / (sqrt(a) (1 - |x|^2)).
  static ConformalMetric hyperbolic(double a = 1.0);
  /// Curvature +a on the plane: rho = 2 / (sqrt(a) (1 + |x|^2)).
  static ConformalMetric spherical(double a = 1.0);
  /// Model for curvature K (Euclidean when |K| is below the flat threshold).
  static ConformalMetric for_curvature(double K);

  Model model() const noexcept { return model_; }
  double curvature() const noexcept;
  double a() const noexcept { return a_; }

  bool valid_at(Point p) const noexcept;
  /// rho(p); throws DomainError outside the model's domain.
  double factor(Point p) const;
  /// grad log rho.
  Point grad_log_factor(Point p) const;

  /// Geodesic distance from the origin of a point at planar radius r, and its inverse.
  double geodesic_radius(double r) const;
  double planar_radius(double geodesic) const;

private:
  ConformalMetric(Model m, double a) : model_(m), a_(a) {}
  Model model_;
  double a_;
};

/// Metric length of a curve: spectral quadrature for smooth curves,
/// Gauss-Legendre per edge for polygons.
double g_length(const BoundaryCurve& curve, const ConformalMetric& metric);

struct CurvatureRange {
  double min;
  double max;
};

/// Range of the geodesic curvature (kappa_flat + d_nu log rho) / rho of a smooth curve.
CurvatureRange metric_curvature_range(const BoundaryCurve& curve, const ConformalMetric& metric,
                                      std::size_t samples = 4096);

using Triangle = std::array<std::size_t, 3>;

/// Immutable triangulation with a distinguished boundary ring.
class Mesh {
public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  /// Validates positive orientation, and that `boundary_ring` lists exactly
  /// the edges owned by one triangle, once each, counter-clockwise.
  Mesh(std::vector<Point> vertices, std::vector<Triangle> triangles,
       std::vector<std::size_t> boundary_ring);

  std::span<const Point> vertices() const noexcept { return vertices_; }
  std::span<const Triangle> triangles() const noexcept { return triangles_; }
  std::span<const std::size_t> boundary() const noexcept { return boundary_; }
  std::span<const std::size_t> interior() const noexcept { return interior_; }
  std::size_t boundary_index(std::size_t v) const noexcept { return boundary_index_[v]; }
  std::size_t interior_index(std::size_t v) const noexcept { return interior_index_[v]; }
  bool on_boundary(std::size_t v) const noexcept { return boundary_index_[v] != npos; }

  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  double triangle_area(std::size_t t) const;
  double area() const;
  double max_edge_length() const;

private:
  std::vector<Point> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<std::size_t> boundary_;
  std::vector<std::size_t> interior_;
  std::vector<std::size_t> boundary_index_;
  std::vector<std::size_t> interior_index_;
};

/// Boundary vertex count for smooth curves is base * 2^refinement.
inline constexpr std::size_t mesh_base = 4;

/// Ring triangulation: homothetic copies of the boundary around the centre,
/// closed by a fan. Polylines get 2^refinement sub-edges per polygon edge.
Mesh build_mesh(const BoundaryCurve& curve, int refinement);

/// "n", n lines "x y", "m", m lines "i j k" (0-based).
void write_mesh(std::ostream& out, const Mesh& mesh);

/// P1 barycentric gradients and area of triangle t.
struct ElementGeometry {
  double area;
  std::array<Point, 3> grad;
};
ElementGeometry element_geometry(const Mesh& mesh, std::size_t t);

/// Piecewise-constant gradient of a nodal field on triangle t.
Point element_gradient(const Mesh& mesh, std::size_t t, std::span<const double> u);

/// Flat P1 stiffness matrix over all vertices.
linalg::CsrMatrix assemble_stiffness(const Mesh& mesh);

enum class MassMode { Consistent, Lumped };

/// Boundary mass on the ring (indexed by boundary_index) with edge weights
/// |e| rho(midpoint). Throws DomainError if the metric is invalid at a boundary vertex.
linalg::CsrMatrix assemble_boundary_mass(const Mesh& mesh, const ConformalMetric& metric,
                                         MassMode mode = MassMode::Consistent);

struct SolverOptions {
  std::size_t dense_threshold = 3000;  // interior unknowns below this use dense Cholesky
};

/// Factorised interior block A_ii with the coupling A_ib, for harmonic
/// extension and the Schur complement.
class InteriorElimination {
public:
  InteriorElimination(const Mesh& mesh, const linalg::CsrMatrix& stiffness,
                      const SolverOptions& opts = {});
  ~InteriorElimination();
  InteriorElimination(InteriorElimination&&) noexcept;
  InteriorElimination& operator=(InteriorElimination&&) noexcept;

  bool dense() const noexcept;

  /// Nodal field equal to f on the ring and discrete-harmonic inside.
  std::vector<double> extend(std::span<const double> boundary_values) const;

  /// S = A_bb - A_bi A_ii^{-1} A_ib.
  linalg::SymMatrix schur_complement() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Discrete Dirichlet-to-Neumann matrix.
linalg::SymMatrix dtn_matrix(const linalg::CsrMatrix& stiffness, const Mesh& mesh,
                             const SolverOptions& opts = {});

std::vector<double> harmonic_extension(const Mesh& mesh, const linalg::CsrMatrix& stiffness,
                                       std::span<const double> boundary_values);

/// Everything needed for the Steklov pencil (S, M_b) on one mesh and metric.
struct SteklovProblem {
  SteklovProblem(Mesh mesh, ConformalMetric metric, MassMode mode = MassMode::Consistent,
                 const SolverOptions& opts = {});

  Mesh mesh;
  ConformalMetric metric;
  linalg::CsrMatrix stiffness;
  linalg::CsrMatrix boundary_mass;
  InteriorElimination elimination;
  linalg::SymMatrix dtn;
};

/// Lowest `count` pairs of S x = sigma M_b x, vectors M_b-orthonormal.
linalg::EigenPairs steklov_eigenpairs(const SteklovProblem& problem, std::size_t count);

/// Spectrum table of the first `count` FEM Steklov values; sigma_0 is snapped to 0
/// after checking it is below 1e-9.
SpectrumTable steklov_spectrum_fem(const SteklovProblem& problem, std::size_t count);
SpectrumTable to_spectrum_table(std::span<const double> values);

/// 0 and the pairs (2 pi m / L)^2 of a closed curve of metric length L.
SpectrumTable boundary_laplacian_spectrum_curve(double g_length, std::size_t count);

}  // namespace steklov::fem
