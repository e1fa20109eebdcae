#include "steklov/spaceform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "steklov/error.hpp"

namespace steklov::spaceform {
namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// sqrt(a) <= kappa_minus is an equality for the extremal choice a = kappa_minus^2.
bool leq_rel(double x, double y) { return x <= y + 1e-12 * std::max(1.0, std::abs(y)); }

}  // namespace

SpaceForm::SpaceForm(double curvature, int ambient_dim)
    : curvature_(curvature), ambient_dim_(ambient_dim) {
  if (ambient_dim < 2) throw DomainError("space form needs ambient dimension >= 2");
  if (!std::isfinite(curvature)) throw DomainError("space form curvature must be finite");
}

CurvatureSign SpaceForm::sign() const noexcept {
  if (std::abs(curvature_) < flat_threshold) return CurvatureSign::Zero;
  return curvature_ < 0.0 ? CurvatureSign::Negative : CurvatureSign::Positive;
}

CurvatureCase::CurvatureCase(CaseId id, double a, double kappa_minus, double kappa_plus, int n)
    : id_(id), a_(a), kappa_minus_(kappa_minus), kappa_plus_(kappa_plus), n_(n) {
  if (n < 1) throw DomainError("boundary dimension n must be >= 1");
  if (!(a > 0.0)) throw DomainError("curvature bound a must be positive");
  if (!leq_rel(kappa_minus, kappa_plus))
    throw DomainError("kappa_minus must not exceed kappa_plus");
  if (id == CaseId::Case1 && !leq_rel(std::sqrt(a), kappa_minus))
    throw DomainError("Case1 requires sqrt(a) <= kappa_minus (got a=" + std::to_string(a) +
                      ", kappa_minus=" + std::to_string(kappa_minus) + ")");
  if (id == CaseId::Case2 && kappa_minus < 0.0)
    throw DomainError("Case2 requires kappa_minus >= 0");
}

CurvatureCase CurvatureCase::with_kappa_plus_unchecked(double kappa_plus) const {
  CurvatureCase c = *this;
  c.kappa_plus_ = kappa_plus;
  return c;
}

double generalized_sin(double K, double t) {
  if (std::abs(K) < flat_threshold) return t;
  if (K > 0.0) {
    const double s = std::sqrt(K);
    return std::sin(s * t) / s;
  }
  const double s = std::sqrt(-K);
  return std::sinh(s * t) / s;
}

double generalized_cos(double K, double t) {
  if (std::abs(K) < flat_threshold) return 1.0;
  if (K > 0.0) return std::cos(std::sqrt(K) * t);
  return std::cosh(std::sqrt(-K) * t);
}

double comparison_f(const ComparisonProfile& p, double t) {
  if (std::abs(p.k) < flat_threshold) return 1.0 - p.theta * t;
  if (p.k > 0.0) {
    const double s = std::sqrt(p.k);
    return std::cos(s * t) - p.theta / s * std::sin(s * t);
  }
  const double s = std::sqrt(-p.k);
  return std::cosh(s * t) - p.theta / s * std::sinh(s * t);
}

double first_zero(const ComparisonProfile& p) {
  if (std::abs(p.k) < flat_threshold) return p.theta > 0.0 ? 1.0 / p.theta : inf;
  if (p.k > 0.0) {
    // tan(s t) = s / theta on (0, pi/s)
    const double s = std::sqrt(p.k);
    return std::atan2(s, p.theta) / s;
  }
  // tanh(s t) = s / theta, solvable only when theta > s
  const double s = std::sqrt(-p.k);
  if (p.theta <= s) return inf;
  return std::atanh(s / p.theta) / s;
}

double max_tube_width(const CurvatureCase& c) {
  if (c.id() == CaseId::Case1) {
    if (!(c.kappa_plus() > 0.0)) throw DomainError("Case1 tube width needs kappa_plus > 0");
    return 1.0 / c.kappa_plus();
  }
  const double s = std::sqrt(c.a());
  // tan(s hbar) = s / kappa_plus, with the kappa_plus = 0 limit pi/(2s)
  return std::atan2(s, c.kappa_plus()) / s;
}

double eta(const CurvatureCase& c, double d) {
  if (d < 0.0) throw DomainError("eta: distance must be nonnegative");
  if (c.id() == CaseId::Case1) return 0.5 * d * d;
  return 1.0 - std::cos(std::sqrt(c.a()) * d);
}

double eta_prime(const CurvatureCase& c, double d) {
  if (c.id() == CaseId::Case1) return d;
  const double s = std::sqrt(c.a());
  return s * std::sin(s * d);
}

double eta_second(const CurvatureCase& c, double d) {
  if (c.id() == CaseId::Case1) return 1.0;
  return c.a() * std::cos(std::sqrt(c.a()) * d);
}

HessianEtaBounds hessian_eta_bounds(const CurvatureCase& c, double d0, double h) {
  const double hbar = max_tube_width(c);
  if (!(h < hbar)) throw DomainError("hessian_eta_bounds: h must be below the tube width");
  if (d0 < 0.0 || d0 > h) throw DomainError("hessian_eta_bounds: need 0 <= d0 <= h");
  const double d = h - d0;
  HessianEtaBounds b{};
  if (c.id() == CaseId::Case1) {
    b.rho_normal = 1.0;
    b.rho_lo = std::max(0.0, std::sqrt(c.a()) * d);
    b.rho_hi_raw = d / (hbar - d0);
    b.rho_hi = std::min(1.0, b.rho_hi_raw);
  } else {
    const double s = std::sqrt(c.a());
    b.rho_normal = c.a() * std::cos(s * d);
    b.rho_lo = 0.0;
    b.rho_hi_raw = c.a() * std::sin(s * d) / std::tan(s * (hbar - d0));
    b.rho_hi = std::min(b.rho_normal, b.rho_hi_raw);
  }
  return b;
}

double geodesic_sphere_curvature(const SpaceForm& sf, double R) {
  if (!(R > 0.0)) throw DomainError("geodesic sphere radius must be positive");
  const double K = sf.curvature();
  if (std::abs(K) < flat_threshold) return 1.0 / R;
  if (K < 0.0) {
    const double s = std::sqrt(-K);
    return s / std::tanh(s * R);
  }
  const double s = std::sqrt(K);
  if (!(s * R < std::numbers::pi)) throw DomainError("geodesic sphere radius exceeds pi/sqrt(K)");
  return s / std::tan(s * R);
}

QBounds q_form_bounds(const CurvatureCase& c, double grad_sq) {
  const double scale = c.id() == CaseId::Case1 ? 1.0 : c.a();
  return {-scale * grad_sq, c.n() * scale * grad_sq};
}

}  // namespace steklov::spaceform
