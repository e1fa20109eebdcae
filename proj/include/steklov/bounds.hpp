#pragma once

// Mechanical checks of the Steklov / boundary-Laplacian comparison
// inequalities, the Weyl ratio, empirical constant fits and hypothesis
// validation.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "steklov/spaceform.hpp"
#include "steklov/spectrum.hpp"

namespace steklov::bounds {

struct EffectiveKappa {
  spaceform::CaseId case_id;
  double kappa_tilde;  // kappa_plus (Case1) or sqrt(a + kappa_plus^2) (Case2)
};

EffectiveKappa effective_kappa(const spaceform::CurvatureCase& c);

struct BoundRecord {
  std::size_t j;
  double sigma;
  double lambda;
  std::string ineq_id;
  double lhs;
  double rhs;
  double slack;  // rhs - lhs
  bool pass;     // slack >= -tolerance
};

class BoundReport {
public:
  explicit BoundReport(double tolerance = 0.0) : tolerance_(tolerance) {}

  void add(std::size_t j, double sigma, double lambda, std::string ineq_id, double lhs, double rhs);
  void append(const BoundReport& other);

  double tolerance() const noexcept { return tolerance_; }
  const std::vector<BoundRecord>& records() const noexcept { return records_; }
  std::size_t violations() const noexcept;
  bool passed() const noexcept { return violations() == 0; }
  /// Smallest slack over all records (+inf when empty).
  double worst_slack() const noexcept;
  /// Record index of the first failing row.
  std::optional<std::size_t> first_violation() const noexcept;

  /// `j,sigma,lambda,ineq_id,lhs,rhs,slack,pass`, header included when asked.
  void write_csv(std::ostream& out, bool header = true) const;

private:
  double tolerance_;
  std::vector<BoundRecord> records_;
};

/// Exact-backend and FEM default tolerances.
inline constexpr double exact_tolerance = 1e-9;
inline constexpr double fem_slack_fraction = 0.01;

/// (i) lambda <= sigma^2 + n kt sigma, (ii) sigma <= kt/2 + sqrt(kt^2/4 + lambda),
/// (iii) |sigma - sqrt(lambda)| <= max(n/2, 1) kt, for 0 <= j <= j_max.
/// Throws DomainError when either table is shorter than j_max + 1.
BoundReport check_theorem1(const spaceform::CurvatureCase& c, const SpectrumTable& sigma,
                           const SpectrumTable& lambda, std::size_t j_max, double tolerance);

/// Result of an empirical constant fit max_j g(j) over 1 <= j <= j_max.
struct ConstantFit {
  double fitted = 0.0;
  std::size_t argmax = 0;
  /// Fit restricted to j <= j_max/2.
  double half_range_fit = 0.0;
  /// (fitted - half_range_fit) / fitted: growth of the running maximum over the upper half.
  double drift = 0.0;
  BoundReport report;
};

/// fitted_C = max_j (sigma_j - kt)_+ (|Sigma|/j)^{1/n}.
ConstantFit check_corollary1(const spaceform::CurvatureCase& c, const SpectrumTable& sigma, double boundary_area,
                             std::size_t j_max);

/// fitted_c = max_j lambda_j (|Sigma|/j)^{2/n}.
ConstantFit check_buser(const SpectrumTable& lambda, double boundary_area, int n, std::size_t j_max);

/// sigma_j (omega_n |Sigma| / j)^{1/n}, which tends to 2 pi.
double weyl_ratio(const SpectrumTable& sigma, double boundary_area, int n, std::size_t j);

/// (j, ratio) for 1 <= j <= j_max.
std::vector<std::pair<std::size_t, double>> weyl_series(const SpectrumTable& sigma, double boundary_area, int n,
                                                        std::size_t j_max);

/// Largest |ratio - 2 pi| / (2 pi) over j in [j_lo, j_hi].
double weyl_band_deviation(const SpectrumTable& sigma, double boundary_area, int n, std::size_t j_lo,
                           std::size_t j_hi);

/// What is known about the domain: its ambient curvature and dimension and
/// the range of its principal curvatures. Balls also carry their radius.
struct DomainDescriptor {
  double ambient_curvature;
  int n;
  double kappa_min;
  double kappa_max;
  std::optional<double> ball_radius;

  static DomainDescriptor ball(double K, int n, double R);
  static DomainDescriptor curve(double K, double kappa_min, double kappa_max);
};

struct HypothesisItem {
  std::string clause;
  bool ok;
  std::string detail;
};

struct Checklist {
  std::vector<HypothesisItem> items;
  bool ok() const noexcept;
  /// Clause of the first failing item, empty when all pass.
  std::string first_failure() const;
};

/// Case hypotheses, ambient curvature range, principal curvature range,
/// Gauss-equation sign of the boundary's intrinsic curvature, cap radius.
Checklist validate_hypotheses(const spaceform::CurvatureCase& c, const DomainDescriptor& d);

/// Case1 (K <= 0) with a = -K, or a = kappa_min^2 when flat; Case2 (K > 0) with a = K.
/// Throws DomainError when the domain satisfies neither case.
spaceform::CurvatureCase auto_case(const DomainDescriptor& d);

}  // namespace steklov::bounds
