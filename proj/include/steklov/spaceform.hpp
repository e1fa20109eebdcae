#pragma once

// Closed-form geometry of the constant-curvature model spaces: the radius
// function sn_K, the Hessian comparison profile, the tube width, the
// boundary potential eta and the eigenvalue sandwich for its Hessian.

#include <cstddef>

namespace steklov::spaceform {

/// |K| below this is treated as flat.
inline constexpr double flat_threshold = 1e-12;

enum class CurvatureSign { Negative, Zero, Positive };

/// Ambient model of constant sectional curvature and dimension n+1.
class SpaceForm {
public:
  /// Throws DomainError when ambient_dim < 2.
  SpaceForm(double curvature, int ambient_dim);

  double curvature() const noexcept { return curvature_; }
  int ambient_dim() const noexcept { return ambient_dim_; }
  /// Dimension n of boundary hypersurfaces.
  int boundary_dim() const noexcept { return ambient_dim_ - 1; }
  CurvatureSign sign() const noexcept;

private:
  double curvature_;
  int ambient_dim_;
};

/// Kasue comparison profile: k bounds sectional curvature, theta bounds II.
struct ComparisonProfile {
  double k;
  double theta;
};

enum class CaseId { Case1, Case2 };

/// Hypotheses of the two curvature regimes:
///   Case1: -a <= K <= 0, sqrt(a) <= kappa_minus <= II <= kappa_plus
///   Case2:  0 < K <= a,        0 <= kappa_minus <= II <= kappa_plus
class CurvatureCase {
public:
  /// Throws DomainError when the invariants of the chosen case fail.
  CurvatureCase(CaseId id, double a, double kappa_minus, double kappa_plus, int n);

  CaseId id() const noexcept { return id_; }
  double a() const noexcept { return a_; }
  double kappa_minus() const noexcept { return kappa_minus_; }
  double kappa_plus() const noexcept { return kappa_plus_; }
  int n() const noexcept { return n_; }

  /// Same hypotheses with kappa_plus replaced; no invariant check (used by falsification probes).
  CurvatureCase with_kappa_plus_unchecked(double kappa_plus) const;

private:
  CurvatureCase() = default;
  CaseId id_ = CaseId::Case1;
  double a_ = 0.0;
  double kappa_minus_ = 0.0;
  double kappa_plus_ = 0.0;
  int n_ = 1;
};

/// sn_K(t): sin(sqrt(K) t)/sqrt(K), t, or sinh(sqrt(-K) t)/sqrt(-K).
double generalized_sin(double K, double t);
/// sn_K'(t)
double generalized_cos(double K, double t);

double comparison_f(const ComparisonProfile& p, double t);
/// First t > 0 with f(t) = 0, +infinity if none.
double first_zero(const ComparisonProfile& p);

/// Width hbar of the tube on which eta is defined.
double max_tube_width(const CurvatureCase& c);

/// eta(d) and its first two derivatives in d.
double eta(const CurvatureCase& c, double d);
double eta_prime(const CurvatureCase& c, double d);
double eta_second(const CurvatureCase& c, double d);

struct HessianEtaBounds {
  double rho_lo;
  double rho_hi;         // clamped to the final bound
  double rho_hi_raw;     // intermediate bound before clamping
  double rho_normal;
};

/// Sandwich for the tangential eigenvalues of Hess(eta) at distance d0 from the boundary.
HessianEtaBounds hessian_eta_bounds(const CurvatureCase& c, double d0, double h);

/// Principal curvature of the geodesic sphere of radius R.
double geodesic_sphere_curvature(const SpaceForm& sf, double R);

struct QBounds {
  double lo;
  double hi;
};

/// Pointwise bounds on |grad u|^2 Lap(eta) - 2 Hess(eta)(grad u, grad u).
QBounds q_form_bounds(const CurvatureCase& c, double grad_sq);

}  // namespace steklov::spaceform
