#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "steklov/error.hpp"
#include "steklov/fem2d.hpp"
#include "steklov/spaceform.hpp"

namespace steklov::fem {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::size_t quadrature_points(std::size_t samples) { return std::max<std::size_t>(4096, 8 * samples); }

bool segments_cross(Point p1, Point p2, Point q1, Point q2) {
  const double d1 = cross(p2 - p1, q1 - p1), d2 = cross(p2 - p1, q2 - p1);
  const double d3 = cross(q2 - q1, p1 - q1), d4 = cross(q2 - q1, p2 - q1);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

// 5-point Gauss-Legendre on [0, 1]
constexpr std::array<double, 5> gl_nodes{0.046910077030668, 0.230765344947158, 0.5,
                                         0.769234655052842, 0.953089922969332};
constexpr std::array<double, 5> gl_weights{0.118463442528095, 0.239314335249683, 0.284444444444444,
                                           0.239314335249683, 0.118463442528095};

}  // namespace

double norm(Point a) { return std::hypot(a.x, a.y); }

BoundaryCurve BoundaryCurve::circle(double radius, Point center) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("circle radius must be positive");
  BoundaryCurve c;
  c.kind_ = Kind::Circle;
  c.center_ = center;
  c.radii_ = {radius};
  c.cos_coef_ = {radius};
  c.sin_coef_ = {0.0};
  return c;
}

BoundaryCurve BoundaryCurve::star_shaped(std::vector<double> radii, Point center) {
  const std::size_t m = radii.size();
  if (m < 3) throw DomainError("star-shaped curve needs at least 3 radial samples");
  for (double r : radii)
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("star-shaped radial samples must be positive");
  BoundaryCurve c;
  c.kind_ = Kind::StarShaped;
  c.center_ = center;
  c.radii_ = std::move(radii);
  const std::size_t top = m / 2;
  c.cos_coef_.assign(top + 1, 0.0);
  c.sin_coef_.assign(top + 1, 0.0);
  for (std::size_t k = 0; k <= top; ++k) {
    double ca = 0.0, sa = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double t = two_pi * static_cast<double>((k * i) % m) / static_cast<double>(m);
      ca += c.radii_[i] * std::cos(t);
      sa += c.radii_[i] * std::sin(t);
    }
    c.cos_coef_[k] = 2.0 * ca / m;
    c.sin_coef_[k] = 2.0 * sa / m;
  }
  c.cos_coef_[0] *= 0.5;
  if (m % 2 == 0) {
    c.cos_coef_[top] *= 0.5;
    c.sin_coef_[top] = 0.0;
  }
  const std::size_t check = quadrature_points(m);
  for (std::size_t q = 0; q < check; ++q)
    if (!(c.radial(two_pi * q / check) > 0.0))
      throw DomainError("interpolated radial function is not positive");
  return c;
}

BoundaryCurve BoundaryCurve::ellipse(double semi_x, double semi_y, std::size_t samples) {
  if (!(semi_x > 0.0) || !(semi_y > 0.0)) throw DomainError("ellipse semi-axes must be positive");
  std::vector<double> r(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = two_pi * i / samples;
    r[i] = semi_x * semi_y / std::hypot(semi_y * std::cos(t), semi_x * std::sin(t));
  }
  return star_shaped(std::move(r));
}

BoundaryCurve BoundaryCurve::polyline(std::vector<Point> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) throw DomainError("polyline needs at least 3 vertices");
  double twice_area = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    twice_area += cross(vertices[i], vertices[(i + 1) % n]);
    scale = std::max(scale, norm(vertices[i] - vertices[0]));
  }
  if (!(std::abs(twice_area) > 1e-12 * scale * scale)) throw DomainError("polyline encloses zero area");
  if (twice_area < 0.0) std::reverse(vertices.begin(), vertices.end());
  for (std::size_t i = 0; i < n; ++i)
    if (norm(vertices[(i + 1) % n] - vertices[i]) == 0.0) throw DomainError("polyline has a repeated vertex");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_cross(vertices[i], vertices[i + 1], vertices[j], vertices[(j + 1) % n]))
        throw DomainError("polyline is not simple: edges " + std::to_string(i) + " and " + std::to_string(j) +
                          " cross");
    }
  // area centroid
  double a = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point p = vertices[i], q = vertices[(i + 1) % n];
    const double w = cross(p, q);
    a += w;
    cx += (p.x + q.x) * w;
    cy += (p.y + q.y) * w;
  }
  const Point c{cx / (3.0 * a), cy / (3.0 * a)};
  for (std::size_t i = 0; i < n; ++i)
    if (!(cross(vertices[i] - c, vertices[(i + 1) % n] - c) > 0.0))
      throw DomainError("polyline must be star-shaped about its centroid");
  BoundaryCurve curve;
  curve.kind_ = Kind::Polyline;
  curve.center_ = c;
  curve.vertices_ = std::move(vertices);
  return curve;
}

double BoundaryCurve::circle_radius() const {
  if (kind_ != Kind::Circle) throw DomainError("curve is not a circle");
  return radii_[0];
}

double BoundaryCurve::radial(double theta, int derivative) const {
  if (kind_ == Kind::Polyline) throw DomainError("polyline has no smooth parametrisation");
  if (kind_ == Kind::Circle) return derivative == 0 ? radii_[0] : 0.0;
  const double c1 = std::cos(theta), s1 = std::sin(theta);
  double ck = 1.0, sk = 0.0, sum = 0.0;
  for (std::size_t k = 0; k < cos_coef_.size(); ++k) {
    const double kk = static_cast<double>(k);
    switch (derivative) {
      case 0: sum += cos_coef_[k] * ck + sin_coef_[k] * sk; break;
      case 1: sum += kk * (sin_coef_[k] * ck - cos_coef_[k] * sk); break;
      default: sum -= kk * kk * (cos_coef_[k] * ck + sin_coef_[k] * sk); break;
    }
    const double next = ck * c1 - sk * s1;
    sk = sk * c1 + ck * s1;
    ck = next;
  }
  return sum;
}

Point BoundaryCurve::position(double theta) const {
  const double r = radial(theta);
  return center_ + Point{r * std::cos(theta), r * std::sin(theta)};
}

Point BoundaryCurve::velocity(double theta) const {
  const double r = radial(theta), dr = radial(theta, 1);
  const Point e{std::cos(theta), std::sin(theta)}, e_perp{-e.y, e.x};
  return dr * e + r * e_perp;
}

Point BoundaryCurve::acceleration(double theta) const {
  const double r = radial(theta), dr = radial(theta, 1), d2r = radial(theta, 2);
  const Point e{std::cos(theta), std::sin(theta)}, e_perp{-e.y, e.x};
  return (d2r - r) * e + 2.0 * dr * e_perp;
}

Point BoundaryCurve::outward_normal(double theta) const {
  const Point v = velocity(theta);
  return (1.0 / norm(v)) * Point{v.y, -v.x};
}

double BoundaryCurve::flat_curvature(double theta) const {
  const Point v = velocity(theta);
  return cross(v, acceleration(theta)) / std::pow(norm(v), 3);
}

double BoundaryCurve::area() const {
  if (kind_ == Kind::Polyline) {
    double a = 0.0;
    for (std::size_t i = 0; i < vertices_.size(); ++i) a += cross(vertices_[i], vertices_[(i + 1) % vertices_.size()]);
    return 0.5 * a;
  }
  if (kind_ == Kind::Circle) return std::numbers::pi * radii_[0] * radii_[0];
  const std::size_t q = quadrature_points(radii_.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < q; ++i) sum += std::pow(radial(two_pi * i / q), 2);
  return 0.5 * sum * two_pi / q;
}

double BoundaryCurve::flat_length() const {
  return g_length(*this, ConformalMetric::euclidean());
}

ConformalMetric ConformalMetric::euclidean() { return {Model::Euclidean, 0.0}; }

ConformalMetric ConformalMetric::hyperbolic(double a) {
  if (!(a > 0.0)) throw DomainError("hyperbolic model needs a > 0");
  return {Model::Poincare, a};
}

ConformalMetric ConformalMetric::spherical(double a) {
  if (!(a > 0.0)) throw DomainError("spherical model needs a > 0");
  return {Model::Stereographic, a};
}

ConformalMetric ConformalMetric::for_curvature(double K) {
  if (std::abs(K) < spaceform::flat_threshold) return euclidean();
  return K < 0.0 ? hyperbolic(-K) : spherical(K);
}

double ConformalMetric::curvature() const noexcept {
  switch (model_) {
    case Model::Poincare: return -a_;
    case Model::Stereographic: return a_;
    default: return 0.0;
  }
}

bool ConformalMetric::valid_at(Point p) const noexcept {
  return model_ != Model::Poincare || dot(p, p) < 1.0;
}

double ConformalMetric::factor(Point p) const {
  const double r2 = dot(p, p);
  switch (model_) {
    case Model::Euclidean: return 1.0;
    case Model::Poincare:
      if (!(r2 < 1.0)) throw DomainError("point outside the Poincare disk");
      return 2.0 / (std::sqrt(a_) * (1.0 - r2));
    case Model::Stereographic: return 2.0 / (std::sqrt(a_) * (1.0 + r2));
  }
  return 1.0;
}

Point ConformalMetric::grad_log_factor(Point p) const {
  const double r2 = dot(p, p);
  switch (model_) {
    case Model::Euclidean: return {};
    case Model::Poincare:
      if (!(r2 < 1.0)) throw DomainError("point outside the Poincare disk");
      return (2.0 / (1.0 - r2)) * p;
    case Model::Stereographic: return (-2.0 / (1.0 + r2)) * p;
  }
  return {};
}

double ConformalMetric::geodesic_radius(double r) const {
  if (r < 0.0) throw DomainError("planar radius must be nonnegative");
  switch (model_) {
    case Model::Euclidean: return r;
    case Model::Poincare:
      if (!(r < 1.0)) throw DomainError("planar radius outside the Poincare disk");
      return 2.0 / std::sqrt(a_) * std::atanh(r);
    case Model::Stereographic: return 2.0 / std::sqrt(a_) * std::atan(r);
  }
  return r;
}

double ConformalMetric::planar_radius(double geodesic) const {
  if (geodesic < 0.0) throw DomainError("geodesic radius must be nonnegative");
  const double s = std::sqrt(a_);
  switch (model_) {
    case Model::Euclidean: return geodesic;
    case Model::Poincare: return std::tanh(0.5 * s * geodesic);
    case Model::Stereographic:
      if (!(s * geodesic < std::numbers::pi)) throw DomainError("geodesic radius beyond the antipode");
      return std::tan(0.5 * s * geodesic);
  }
  return geodesic;
}

double g_length(const BoundaryCurve& curve, const ConformalMetric& metric) {
  if (curve.kind() == BoundaryCurve::Kind::Polyline) {
    const auto v = curve.polyline_vertices();
    double total = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Point p = v[i], q = v[(i + 1) % v.size()];
      double edge = 0.0;
      for (std::size_t g = 0; g < gl_nodes.size(); ++g)
        edge += gl_weights[g] * metric.factor(p + gl_nodes[g] * (q - p));
      total += edge * norm(q - p);
    }
    return total;
  }
  const std::size_t q = quadrature_points(curve.radial_samples().size());
  double sum = 0.0;
  for (std::size_t i = 0; i < q; ++i) {
    const double t = two_pi * i / q;
    sum += metric.factor(curve.position(t)) * norm(curve.velocity(t));
  }
  return sum * two_pi / q;
}

CurvatureRange metric_curvature_range(const BoundaryCurve& curve, const ConformalMetric& metric,
                                      std::size_t samples) {
  if (!curve.smooth()) throw DomainError("curvature range needs a smooth curve");
  if (samples == 0) throw DomainError("curvature range needs samples");
  CurvatureRange out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = two_pi * i / samples;
    const Point p = curve.position(t);
    const double k = (curve.flat_curvature(t) + dot(metric.grad_log_factor(p), curve.outward_normal(t))) /
                     metric.factor(p);
    out.min = std::min(out.min, k);
    out.max = std::max(out.max, k);
  }
  return out;
}

}  // namespace steklov::fem
