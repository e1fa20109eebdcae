#include "steklov/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "steklov/error.hpp"
#include "steklov/exact_spectra.hpp"
#include "steklov/report_format.hpp"

namespace steklov::bounds {

using spaceform::CaseId;
using spaceform::CurvatureCase;

EffectiveKappa effective_kappa(const CurvatureCase& c) {
  if (c.id() == CaseId::Case1) return {c.id(), c.kappa_plus()};
  return {c.id(), std::sqrt(c.a() + c.kappa_plus() * c.kappa_plus())};
}

void BoundReport::add(std::size_t j, double sigma, double lambda, std::string ineq_id, double lhs, double rhs) {
  const double slack = rhs - lhs;
  records_.push_back({j, sigma, lambda, std::move(ineq_id), lhs, rhs, slack, slack >= -tolerance_});
}

void BoundReport::append(const BoundReport& other) {
  records_.insert(records_.end(), other.records_.begin(), other.records_.end());
}

std::size_t BoundReport::violations() const noexcept {
  return static_cast<std::size_t>(std::count_if(records_.begin(), records_.end(), [](const BoundRecord& r) { return !r.pass; }));
}

double BoundReport::worst_slack() const noexcept {
  double w = std::numeric_limits<double>::infinity();
  for (const BoundRecord& r : records_) w = std::min(w, r.slack);
  return w;
}

std::optional<std::size_t> BoundReport::first_violation() const noexcept {
  for (std::size_t k = 0; k < records_.size(); ++k)
    if (!records_[k].pass) return k;
  return std::nullopt;
}

void BoundReport::write_csv(std::ostream& out, bool header) const {
  if (header) out << "j,sigma,lambda,ineq_id,lhs,rhs,slack,pass\n";
  for (const BoundRecord& r : records_)
    out << r.j << ',' << sci(r.sigma) << ',' << sci(r.lambda) << ',' << r.ineq_id << ',' << sci(r.lhs) << ','
        << sci(r.rhs) << ',' << sci(r.slack) << ',' << (r.pass ? 1 : 0) << '\n';
}

BoundReport check_theorem1(const CurvatureCase& c, const SpectrumTable& sigma, const SpectrumTable& lambda,
                           std::size_t j_max, double tolerance) {
  if (sigma.flattened_size() <= j_max || lambda.flattened_size() <= j_max)
    throw DomainError("spectrum tables do not cover j_max = " + std::to_string(j_max));
  const double kt = effective_kappa(c).kappa_tilde;
  const int n = c.n();
  const double gap_bound = std::max(0.5 * n, 1.0) * kt;
  BoundReport report(tolerance);
  for (std::size_t j = 0; j <= j_max; ++j) {
    const double s = sigma.at(j), l = lambda.at(j);
    report.add(j, s, l, "theorem1_i", l, s * s + n * kt * s);
    report.add(j, s, l, "theorem1_ii", s, 0.5 * kt + std::sqrt(0.25 * kt * kt + l));
    report.add(j, s, l, "theorem1_iii", std::abs(s - std::sqrt(l)), gap_bound);
  }
  return report;
}

namespace {

template <typename Term>
ConstantFit fit_constant(std::size_t j_max, const std::string& id, Term term) {
  if (j_max < 1) throw DomainError("constant fit needs j_max >= 1");
  ConstantFit fit;
  std::vector<double> values(j_max + 1, 0.0);
  for (std::size_t j = 1; j <= j_max; ++j) {
    values[j] = term(j);
    if (values[j] > fit.fitted) fit.fitted = values[j], fit.argmax = j;
    if (j <= std::max<std::size_t>(1, j_max / 2)) fit.half_range_fit = fit.fitted;
  }
  fit.drift = fit.fitted > 0.0 ? (fit.fitted - fit.half_range_fit) / fit.fitted : 0.0;
  for (std::size_t j = 1; j <= j_max; ++j) fit.report.add(j, 0.0, 0.0, id, values[j], fit.fitted);
  return fit;
}

}  // namespace

ConstantFit check_corollary1(const CurvatureCase& c, const SpectrumTable& sigma, double boundary_area,
                             std::size_t j_max) {
  if (sigma.flattened_size() <= j_max) throw DomainError("Steklov table does not cover j_max");
  if (!(boundary_area > 0.0)) throw DomainError("boundary area must be positive");
  const double kt = effective_kappa(c).kappa_tilde;
  const double inv_n = 1.0 / c.n();
  ConstantFit fit = fit_constant(j_max, "corollary1_fit", [&](std::size_t j) {
    return std::max(0.0, sigma.at(j) - kt) * std::pow(boundary_area / j, inv_n);
  });
  BoundReport with_sigma;
  for (const BoundRecord& r : fit.report.records()) with_sigma.add(r.j, sigma.at(r.j), 0.0, r.ineq_id, r.lhs, r.rhs);
  fit.report = std::move(with_sigma);
  return fit;
}

ConstantFit check_buser(const SpectrumTable& lambda, double boundary_area, int n, std::size_t j_max) {
  if (lambda.flattened_size() <= j_max) throw DomainError("Laplacian table does not cover j_max");
  if (!(boundary_area > 0.0)) throw DomainError("boundary area must be positive");
  if (n < 1) throw DomainError("dimension must be >= 1");
  const double p = 2.0 / n;
  ConstantFit fit = fit_constant(j_max, "buser_fit",
                                 [&](std::size_t j) { return lambda.at(j) * std::pow(boundary_area / j, p); });
  BoundReport with_lambda;
  for (const BoundRecord& r : fit.report.records()) with_lambda.add(r.j, 0.0, lambda.at(r.j), r.ineq_id, r.lhs, r.rhs);
  fit.report = std::move(with_lambda);
  return fit;
}

double weyl_ratio(const SpectrumTable& sigma, double boundary_area, int n, std::size_t j) {
  if (j < 1) throw DomainError("Weyl ratio needs j >= 1");
  return sigma.at(j) * std::pow(exact::unit_ball_volume(n) * boundary_area / j, 1.0 / n);
}

std::vector<std::pair<std::size_t, double>> weyl_series(const SpectrumTable& sigma, double boundary_area, int n,
                                                        std::size_t j_max) {
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t j = 1; j <= j_max; ++j) out.emplace_back(j, weyl_ratio(sigma, boundary_area, n, j));
  return out;
}

double weyl_band_deviation(const SpectrumTable& sigma, double boundary_area, int n, std::size_t j_lo,
                           std::size_t j_hi) {
  const double two_pi = 2.0 * std::numbers::pi;
  double worst = 0.0;
  for (std::size_t j = std::max<std::size_t>(1, j_lo); j <= j_hi; ++j)
    worst = std::max(worst, std::abs(weyl_ratio(sigma, boundary_area, n, j) - two_pi) / two_pi);
  return worst;
}

DomainDescriptor DomainDescriptor::ball(double K, int n, double R) {
  const double k = spaceform::geodesic_sphere_curvature(spaceform::SpaceForm(K, n + 1), R);
  return {K, n, k, k, R};
}

DomainDescriptor DomainDescriptor::curve(double K, double kappa_min, double kappa_max) {
  return {K, 1, kappa_min, kappa_max, std::nullopt};
}

bool Checklist::ok() const noexcept {
  return std::all_of(items.begin(), items.end(), [](const HypothesisItem& i) { return i.ok; });
}

std::string Checklist::first_failure() const {
  for (const HypothesisItem& i : items)
    if (!i.ok) return i.clause + (i.detail.empty() ? "" : " (" + i.detail + ")");
  return {};
}

namespace {

bool leq(double x, double y) { return x <= y + 1e-9 * std::max(1.0, std::abs(y)); }

}  // namespace

Checklist validate_hypotheses(const CurvatureCase& c, const DomainDescriptor& d) {
  Checklist out;
  auto item = [&](std::string clause, bool ok, std::string detail) {
    out.items.push_back({std::move(clause), ok, std::move(detail)});
  };
  const double K = d.ambient_curvature, a = c.a();
  item("dimension matches", c.n() == d.n, "case n=" + std::to_string(c.n()) + ", domain n=" + std::to_string(d.n));
  item("kappa_minus <= kappa_plus", leq(c.kappa_minus(), c.kappa_plus()),
       sci(c.kappa_minus()) + " vs " + sci(c.kappa_plus()));
  if (c.id() == CaseId::Case1) {
    item("-a <= K <= 0", leq(-a, K) && leq(K, 0.0), "K=" + sci(K) + ", a=" + sci(a));
    item("sqrt(a) <= kappa_minus", leq(std::sqrt(a), c.kappa_minus()),
         sci(std::sqrt(a)) + " vs " + sci(c.kappa_minus()));
  } else {
    item("0 < K <= a", K > 0.0 && leq(K, a), "K=" + sci(K) + ", a=" + sci(a));
    item("kappa_minus >= 0", c.kappa_minus() >= 0.0, sci(c.kappa_minus()));
  }
  item("II >= kappa_minus", leq(c.kappa_minus(), d.kappa_min), "min II=" + sci(d.kappa_min));
  item("II <= kappa_plus", leq(d.kappa_max, c.kappa_plus()), "max II=" + sci(d.kappa_max));
  // Gauss equation: sectional curvature of the boundary is K + k_i k_j >= K + kappa_min^2 for convex boundaries.
  const double gauss = K + d.kappa_min * d.kappa_min;
  item("boundary curvature K + II^2 >= 0", d.kappa_min >= 0.0 && gauss >= -1e-12, "K + kappa_min^2=" + sci(gauss));
  if (d.ball_radius && K > 0.0)
    item("cap radius below pi/(2 sqrt a)", *d.ball_radius < std::numbers::pi / (2.0 * std::sqrt(a)),
         "R=" + sci(*d.ball_radius));
  return out;
}

CurvatureCase auto_case(const DomainDescriptor& d) {
  const double K = d.ambient_curvature;
  if (std::abs(K) < spaceform::flat_threshold) {
    if (!(d.kappa_min > 0.0)) throw DomainError("flat domain needs a strictly convex boundary for Case1");
    return CurvatureCase(CaseId::Case1, d.kappa_min * d.kappa_min, d.kappa_min, d.kappa_max, d.n);
  }
  if (K < 0.0) {
    if (d.kappa_min < std::sqrt(-K) * (1.0 - 1e-12))
      throw DomainError("hyperbolic domain is not horo-convex: kappa_min=" + sci(d.kappa_min) +
                        " < sqrt(-K)=" + sci(std::sqrt(-K)));
    return CurvatureCase(CaseId::Case1, -K, std::max(d.kappa_min, std::sqrt(-K)), d.kappa_max, d.n);
  }
  if (d.kappa_min < 0.0) throw DomainError("spherical domain boundary must be convex");
  return CurvatureCase(CaseId::Case2, K, d.kappa_min, d.kappa_max, d.n);
}

}  // namespace steklov::bounds
