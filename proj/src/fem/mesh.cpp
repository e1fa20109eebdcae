#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>
#include <unordered_map>

#include "steklov/error.hpp"
#include "steklov/fem2d.hpp"

namespace steklov::fem {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

struct RingPoint {
  Point p;
  double angle;  // polar angle about the mesh centre
};

using Ring = std::vector<RingPoint>;

// Parameter of a boundary point as a function of the arc-length fraction u.
class ArcLengthMap {
public:
  explicit ArcLengthMap(const BoundaryCurve& curve) : curve_(curve) {
    if (curve.smooth()) {
      const std::size_t q = 8192;
      theta_.resize(q + 1);
      s_.resize(q + 1);
      s_[0] = 0.0;
      double prev = norm(curve.velocity(0.0));
      for (std::size_t i = 1; i <= q; ++i) {
        theta_[i] = two_pi * i / q;
        const double cur = norm(curve.velocity(theta_[i]));
        s_[i] = s_[i - 1] + 0.5 * (prev + cur) * (two_pi / q);
        prev = cur;
      }
    } else {
      const auto v = curve.polyline_vertices();
      s_.assign(1, 0.0);
      for (std::size_t i = 0; i < v.size(); ++i) s_.push_back(s_.back() + norm(v[(i + 1) % v.size()] - v[i]));
    }
  }

  double total() const { return s_.back(); }

  // Point on the curve at arc-length fraction u in [0, 1).
  Point at(double u) const {
    const double target = u * s_.back();
    const auto it = std::upper_bound(s_.begin(), s_.end(), target);
    const std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - s_.begin(), 1) - 1, s_.size() - 2);
    const double w = (target - s_[i]) / (s_[i + 1] - s_[i]);
    if (curve_.smooth()) return curve_.position(theta_[i] + w * (theta_[i + 1] - theta_[i]));
    const auto v = curve_.polyline_vertices();
    return v[i] + w * (v[(i + 1) % v.size()] - v[i]);
  }

private:
  const BoundaryCurve& curve_;
  std::vector<double> theta_;
  std::vector<double> s_;
};

double polar_angle(Point p, Point c) { return std::atan2(p.y - c.y, p.x - c.x); }

// Triangulates the annulus between an inner and an outer ring by merging
// the two angular sequences.
void stitch(const Ring& inner, std::size_t inner_offset, const Ring& outer, std::size_t outer_offset,
            std::span<const Point> vertices, std::vector<Triangle>& triangles) {
  const std::size_t ma = inner.size(), mb = outer.size();
  auto unroll = [](const Ring& ring, std::size_t start, double reference) {
    std::vector<double> a(ring.size() + 1);
    a[0] = ring[start].angle + two_pi * std::round((reference - ring[start].angle) / two_pi);
    for (std::size_t k = 1; k <= ring.size(); ++k) {
      double next = ring[(start + k) % ring.size()].angle;
      while (next <= a[k - 1]) next += two_pi;
      a[k] = next;
    }
    return a;
  };
  const std::vector<double> alpha = unroll(inner, 0, inner[0].angle);
  std::size_t start = 0;
  double best = 1e300;
  for (std::size_t j = 0; j < mb; ++j) {
    const double d = std::abs(std::remainder(outer[j].angle - alpha[0], two_pi));
    if (d < best) best = d, start = j;
  }
  const std::vector<double> beta = unroll(outer, start, alpha[0]);

  auto emit = [&](std::size_t a, std::size_t b, std::size_t c) {
    const double area2 = cross(vertices[b] - vertices[a], vertices[c] - vertices[a]);
    if (area2 == 0.0) throw MeshError("degenerate triangle while stitching rings");
    triangles.push_back(area2 > 0.0 ? Triangle{a, b, c} : Triangle{a, c, b});
  };
  std::size_t i = 0, j = 0;
  while (i < ma || j < mb) {
    const std::size_t ai = inner_offset + i % ma, bj = outer_offset + (start + j) % mb;
    const bool advance_inner = j == mb || (i < ma && alpha[i + 1] <= beta[j + 1]);
    if (advance_inner) {
      emit(ai, inner_offset + (i + 1) % ma, bj);
      ++i;
    } else {
      emit(ai, outer_offset + (start + j + 1) % mb, bj);
      ++j;
    }
  }
}

}  // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<Triangle> triangles, std::vector<std::size_t> boundary_ring)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)), boundary_(std::move(boundary_ring)) {
  const std::size_t nv = vertices_.size();
  if (triangles_.empty()) throw MeshError("mesh has no triangles");
  if (boundary_.size() < 3) throw MeshError("boundary ring needs at least 3 vertices");
  std::vector<char> used(nv, 0);
  std::unordered_map<std::uint64_t, int> directed;  // key u*nv+v -> count
  directed.reserve(3 * triangles_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const Triangle& tri = triangles_[t];
    for (std::size_t k = 0; k < 3; ++k) {
      if (tri[k] >= nv) throw MeshError("triangle " + std::to_string(t) + " references a missing vertex");
      used[tri[k]] = 1;
    }
    if (!(triangle_area(t) > 0.0))
      throw MeshError("triangle " + std::to_string(t) + " is not positively oriented");
    for (std::size_t k = 0; k < 3; ++k) {
      const std::uint64_t key = static_cast<std::uint64_t>(tri[k]) * nv + tri[(k + 1) % 3];
      if (++directed[key] > 1) throw MeshError("edge used twice with the same orientation");
    }
  }
  for (std::size_t v = 0; v < nv; ++v)
    if (!used[v]) throw MeshError("vertex " + std::to_string(v) + " belongs to no triangle");

  boundary_index_.assign(nv, npos);
  interior_index_.assign(nv, npos);
  for (std::size_t k = 0; k < boundary_.size(); ++k) {
    const std::size_t v = boundary_[k];
    if (v >= nv) throw MeshError("boundary ring references a missing vertex");
    if (boundary_index_[v] != npos) throw MeshError("boundary ring visits a vertex twice");
    boundary_index_[v] = k;
  }
  std::size_t boundary_edges = 0;
  for (const auto& [key, count] : directed)
    if (!directed.contains(key % nv * nv + key / nv)) ++boundary_edges;
  if (boundary_edges != boundary_.size()) throw MeshError("boundary ring does not cover the mesh boundary");
  for (std::size_t k = 0; k < boundary_.size(); ++k) {
    const std::uint64_t u = boundary_[k], v = boundary_[(k + 1) % boundary_.size()];
    if (!directed.contains(u * nv + v) || directed.contains(v * nv + u))
      throw MeshError("boundary ring edge " + std::to_string(k) + " is not a counter-clockwise boundary edge");
  }
  for (std::size_t v = 0; v < nv; ++v)
    if (boundary_index_[v] == npos) {
      interior_index_[v] = interior_.size();
      interior_.push_back(v);
    }
}

double Mesh::triangle_area(std::size_t t) const {
  const Triangle& tri = triangles_[t];
  return 0.5 * cross(vertices_[tri[1]] - vertices_[tri[0]], vertices_[tri[2]] - vertices_[tri[0]]);
}

double Mesh::area() const {
  double a = 0.0;
  for (std::size_t t = 0; t < triangles_.size(); ++t) a += triangle_area(t);
  return a;
}

double Mesh::max_edge_length() const {
  double m = 0.0;
  for (const Triangle& tri : triangles_)
    for (std::size_t k = 0; k < 3; ++k) m = std::max(m, norm(vertices_[tri[(k + 1) % 3]] - vertices_[tri[k]]));
  return m;
}

Mesh build_mesh(const BoundaryCurve& curve, int refinement) {
  if (refinement < 0 || refinement > 12) throw DomainError("refinement must lie in [0, 12]");
  const Point c = curve.center();
  const ArcLengthMap arc(curve);

  Ring boundary;
  if (curve.smooth()) {
    const std::size_t n = mesh_base << refinement;
    for (std::size_t j = 0; j < n; ++j) {
      const Point p = arc.at(static_cast<double>(j) / n);
      boundary.push_back({p, polar_angle(p, c)});
    }
  } else {
    const auto v = curve.polyline_vertices();
    const std::size_t sub = std::size_t{1} << refinement;
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t k = 0; k < sub; ++k) {
        const Point p = v[i] + (static_cast<double>(k) / sub) * (v[(i + 1) % v.size()] - v[i]);
        boundary.push_back({p, polar_angle(p, c)});
      }
  }
  const std::size_t n = boundary.size();
  double mean_radius = 0.0;
  for (const RingPoint& rp : boundary) mean_radius += norm(rp.p - c);
  mean_radius /= n;
  const std::size_t layers =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(n * mean_radius / arc.total())));

  std::vector<Point> vertices{c};
  std::vector<Triangle> triangles;
  std::vector<Ring> rings;
  std::vector<std::size_t> offsets;
  for (std::size_t i = 1; i < layers; ++i) {
    const double t = static_cast<double>(i) / layers;
    const std::size_t m = std::max<std::size_t>(3, static_cast<std::size_t>(std::lround(double(n) * i / layers)));
    const double shift = (layers - i) % 2 == 1 ? 0.5 : 0.0;
    Ring ring;
    for (std::size_t j = 0; j < m; ++j) {
      const Point b = arc.at((j + shift) / m);
      ring.push_back({c + t * (b - c), polar_angle(b, c)});
    }
    offsets.push_back(vertices.size());
    for (const RingPoint& rp : ring) vertices.push_back(rp.p);
    rings.push_back(std::move(ring));
  }
  offsets.push_back(vertices.size());
  for (const RingPoint& rp : boundary) vertices.push_back(rp.p);
  rings.push_back(boundary);

  // fan around the centre
  {
    const Ring& first = rings.front();
    for (std::size_t j = 0; j < first.size(); ++j) {
      const std::size_t a = offsets[0] + j, b = offsets[0] + (j + 1) % first.size();
      const double area2 = cross(vertices[a] - c, vertices[b] - c);
      if (area2 == 0.0) throw MeshError("degenerate fan triangle");
      triangles.push_back(area2 > 0.0 ? Triangle{0, a, b} : Triangle{0, b, a});
    }
  }
  for (std::size_t r = 1; r < rings.size(); ++r) stitch(rings[r - 1], offsets[r - 1], rings[r], offsets[r], vertices, triangles);

  std::vector<std::size_t> ring(n);
  for (std::size_t j = 0; j < n; ++j) ring[j] = offsets.back() + j;
  return Mesh(std::move(vertices), std::move(triangles), std::move(ring));
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  const auto prec = out.precision(17);
  out << mesh.vertex_count() << '\n';
  for (const Point& p : mesh.vertices()) out << p.x << ' ' << p.y << '\n';
  out << mesh.triangles().size() << '\n';
  for (const Triangle& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out.precision(prec);
}

}  // namespace steklov::fem
