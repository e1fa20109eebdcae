#pragma once

// Discrete versions of the integral identities behind the boundary-energy
// equivalence: the Pohozaev identity for a vector field F, the truncated
// field F = grad_g eta(h - d0), the Q-form integral over the tube, and the
// tangential/normal energy comparison for Steklov eigenfunctions.
//
// The metric is g = rho^2 |dx|^2 with phi = log rho. Every integral is reduced
// to flat quadrature as follows (vectors are stored by flat components):
//   |grad_g u|_g^2 dv_g            = |grad u|^2 dx
//   <F, grad_g u>_g                = F . grad u
//   d_nu_g u dsigma_g              = d_nu u ds
//   <F, nu_g>_g dsigma_g           = rho^2 (F . nu) ds
//   |grad_g u|_g^2 <F, nu_g>_g dsigma_g = |grad u|^2 (F . nu) ds
//   div_g F                        = div F + 2 F . grad phi
//   grad_g F(grad_g u, grad_g u) dv_g = (grad u^T DF grad u + (F . grad phi)|grad u|^2) dx
// with DF_ij = d_j F^i. The phi terms of I3 and I4 cancel in the residual,
// which is therefore metric independent, but each term keeps them.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "steklov/bounds.hpp"
#include "steklov/fem2d.hpp"
#include "steklov/spaceform.hpp"

namespace steklov::identity {

/// Per-triangle constant field with a per-triangle Jacobian, plus its trace at
/// the midpoint of each boundary edge (edge k joins boundary[k] and boundary[k+1]).
struct VectorFieldOnMesh {
  std::vector<fem::Point> value;
  std::vector<std::array<double, 4>> jacobian;  // row-major, d_j F^i
  std::vector<fem::Point> boundary_trace;
  std::vector<char> support;  // zero value and Jacobian where 0
};

struct IdentityResidual {
  double i1 = 0.0;  // boundary flux term
  double i2 = 0.0;  // boundary gradient term
  double i3 = 0.0;  // divergence term
  double i4 = 0.0;  // Hessian term
  double residual = 0.0;  // i1 - i2 + i3 - i4
  double h_mesh = 0.0;
};

/// Metric distance from each vertex to the boundary curve.
std::vector<double> distance_to_boundary(const fem::Mesh& mesh, const fem::BoundaryCurve& curve,
                                         const fem::ConformalMetric& metric);

/// F = grad_g eta(d), d = max(h - d0, 0), from the P1 interpolant of d and a
/// least-squares recovered Hessian. Throws DomainError unless
/// 0 < h < max_tube_width(c) and h <= max(d0).
VectorFieldOnMesh build_F_field(const fem::Mesh& mesh, const fem::ConformalMetric& metric,
                                const spaceform::CurvatureCase& c, double h,
                                std::span<const double> d0);

/// F(x) = x in flat components, DF = I.
VectorFieldOnMesh position_field(const fem::Mesh& mesh);

/// |F|_g on triangle t.
double metric_norm(const VectorFieldOnMesh& F, const fem::Mesh& mesh,
                   const fem::ConformalMetric& metric, std::size_t t);

/// Nodal outward normal derivative on the ring (flat, per unit flat length),
/// extracted weakly as M^-1 (A u)_boundary with the flat consistent boundary mass.
std::vector<double> weak_normal_derivative(const fem::Mesh& mesh, const linalg::CsrMatrix& stiffness,
                                           std::span<const double> u);

/// Midpoint quadrature of the four Pohozaev terms for a discrete harmonic u.
IdentityResidual pohozaev_residual(const fem::Mesh& mesh, const fem::ConformalMetric& metric,
                                   const linalg::CsrMatrix& stiffness, std::span<const double> u,
                                   const VectorFieldOnMesh& F);

struct QIntegral {
  double h = 0.0;
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double dirichlet = 0.0;  // integral of |grad_g u|^2 dv_g
  double slack = 0.0;      // min(value - lo, hi - value)
  bool pass = true;
};

/// Default slack for the Q-form integral, as a fraction of the Dirichlet energy.
inline constexpr double q_slack_fraction = 0.01;

/// Integral of |grad u|^2 Lap(eta) - 2 Hess(eta)(grad u, grad u) over the
/// tube, against the pointwise bounds times the Dirichlet energy.
QIntegral q_integral_check(const fem::Mesh& mesh, const fem::ConformalMetric& metric,
                           const spaceform::CurvatureCase& c, std::span<const double> u, double h,
                           std::span<const double> d0, double slack_fraction = q_slack_fraction);

inline constexpr std::array<double, 4> h_sweep_fractions{0.25, 0.5, 0.75, 0.95};

/// q_integral_check at h = f * hbar for each fraction, skipping h beyond the inradius.
std::vector<QIntegral> q_integral_sweep(const fem::Mesh& mesh, const fem::ConformalMetric& metric,
                                        const spaceform::CurvatureCase& c, std::span<const double> u,
                                        std::span<const double> d0,
                                        std::span<const double> fractions = h_sweep_fractions);

struct Proposition1Row {
  std::size_t j = 0;
  double sigma = 0.0;
  double tangential = 0.0;   // integral of |grad_Sigma u|^2
  double flux = 0.0;         // integral of (d_nu u)^2 = sigma^2
  double flux_direct = 0.0;  // lumped quadrature of the weak normal derivative
  double flux_rel_error = 0.0;
};

struct Proposition1Result {
  std::vector<Proposition1Row> rows;
  bounds::BoundReport report;  // ids proposition1_i and proposition1_ii
  double max_flux_rel_error = 0.0;
};

inline constexpr double flux_consistency_tolerance = 0.02;

/// Both boundary-energy inequalities for each M_b-normalised eigenpair, with
/// kappa = effective kappa of the case and additive slack `tolerance`.
Proposition1Result proposition1_check(const fem::SteklovProblem& problem,
                                      const spaceform::CurvatureCase& c,
                                      const linalg::EigenPairs& pairs, double tolerance);

/// One row of identities_report.csv.
struct IdentityRow {
  std::string check;
  double h = 0.0;
  std::size_t j = 0;
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double residual = 0.0;
  bool pass = true;
};

/// Header `domain,refinement,h,j,check,value,lo,hi,residual,pass`.
void write_identity_csv(std::ostream& out, const std::string& domain, int refinement,
                        std::span<const IdentityRow> rows, bool header = true);

}  // namespace steklov::identity
