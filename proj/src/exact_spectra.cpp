#include "steklov/exact_spectra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "steklov/error.hpp"

namespace steklov::exact {

using spaceform::flat_threshold;
using spaceform::generalized_cos;
using spaceform::generalized_sin;

BallDomain::BallDomain(spaceform::SpaceForm space, double radius)
    : space_(space), radius_(radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("ball radius must be positive");
  const double K = space_.curvature();
  if (K >= flat_threshold && !(radius < std::numbers::pi / (2.0 * std::sqrt(K))))
    throw DomainError("spherical cap radius " + std::to_string(radius) +
                      " must stay below pi/(2 sqrt K)");
}

double BallDomain::boundary_radius() const {
  return generalized_sin(space_.curvature(), radius_);
}

double BallDomain::boundary_curvature() const {
  return spaceform::geodesic_sphere_curvature(space_, radius_);
}

namespace {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

std::uint64_t spherical_harmonic_multiplicity(int n, int k) {
  if (n < 1 || k < 0) throw DomainError("spherical harmonic multiplicity needs n >= 1, k >= 0");
  if (k == 0) return 1;
  if (k == 1) return static_cast<std::uint64_t>(n) + 1;
  const auto nn = static_cast<std::uint64_t>(n);
  const auto kk = static_cast<std::uint64_t>(k);
  return binomial(nn + kk, nn) - binomial(nn + kk - 2, nn);
}

double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double unit_sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
}

SpectrumTable boundary_laplacian_spectrum(const BallDomain& ball, std::size_t count) {
  if (count == 0) throw DomainError("spectrum count must be >= 1");
  const int n = ball.n();
  const double s2 = std::pow(ball.boundary_radius(), 2);
  std::vector<SpectrumEntry> entries;
  std::size_t total = 0;
  for (int k = 0; total < count; ++k) {
    const auto mult = spherical_harmonic_multiplicity(n, k);
    entries.push_back({static_cast<double>(k) * (k + n - 1) / s2, mult, static_cast<std::size_t>(k)});
    total += mult;
  }
  return SpectrumTable(SpectrumKind::BoundaryLaplacian, std::move(entries));
}

// The Riccati equation for w = f'/f,
//   w' = -n (s'/s) w - w^2 + mu / s^2,   mu = k (k + n - 1),
// is integrated for v = r w in the log radius x = ln r:
//   dv/dx = v - n (r s'/s) v - v^2 + mu (r/s)^2.
// v(0+) = k, and in flat space v == k is an exact equilibrium.
double radial_log_derivative(const BallDomain& ball, int k, const RadialOptions& opts) {
  if (k < 1) throw DomainError("radial_log_derivative needs degree k >= 1");
  const double K = ball.space().curvature();
  const int n = ball.n();
  const double R = ball.radius();
  const double mu = static_cast<double>(k) * (k + n - 1);
  const bool flat = std::abs(K) < flat_threshold;

  auto rhs = [&](double x, double v) {
    if (flat) return v - n * v - v * v + mu;
    const double r = std::exp(x);
    const double s = generalized_sin(K, r);
    const double ds = generalized_cos(K, r);
    const double q = r / s;
    return v - n * (q * ds) * v - v * v + mu * q * q;
  };
  auto rk4 = [&](double x, double v, double h) {
    const double k1 = rhs(x, v);
    const double k2 = rhs(x + 0.5 * h, v + 0.5 * h * k1);
    const double k3 = rhs(x + 0.5 * h, v + 0.5 * h * k2);
    const double k4 = rhs(x + h, v + h * k3);
    return v + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };

  const double x_end = std::log(R);
  double x = std::log(opts.start_fraction * R);
  double v = k;
  const double span = x_end - x;
  // linearised decay rate about the equilibrium is 2k + n - 1
  double h = std::min(span / 64.0, 0.5 / (2.0 * k + n));
  const double h_min = 1e-14 * span;

  for (std::size_t step = 0; x_end - x > h_min; ++step) {
    if (step >= opts.max_steps)
      throw IntegrationError("radial ODE exceeded step budget at degree " + std::to_string(k));
    const bool last = h >= x_end - x;
    if (last) h = x_end - x;
    const double full = rk4(x, v, h);
    const double half = rk4(x + 0.5 * h, rk4(x, v, 0.5 * h), 0.5 * h);
    const double err = std::abs(half - full) / 15.0;
    const double scale = std::max(1.0, std::abs(half));
    if (!std::isfinite(full) || !std::isfinite(half)) {
      h *= 0.25;
    } else if (err <= opts.step_tolerance * scale) {
      x = last ? x_end : x + h;
      v = half + (half - full) / 15.0;
      const double grow = err > 0.0 ? 0.9 * std::pow(opts.step_tolerance * scale / err, 0.2) : 4.0;
      h *= std::clamp(grow, 0.2, 4.0);
    } else {
      h *= std::clamp(0.9 * std::pow(opts.step_tolerance * scale / err, 0.2), 0.1, 0.5);
    }
    if (h < h_min)
      throw IntegrationError("radial ODE step underflow at degree " + std::to_string(k));
  }
  const double sigma = v / R;
  if (!std::isfinite(sigma) || sigma <= 0.0)
    throw IntegrationError("radial ODE produced invalid log-derivative at degree " +
                           std::to_string(k));
  return sigma;
}

SpectrumTable steklov_ball_spectrum(const BallDomain& ball, std::size_t count,
                                    const RadialOptions& opts) {
  if (count == 0) throw DomainError("spectrum count must be >= 1");
  const int n = ball.n();
  std::vector<SpectrumEntry> entries{{0.0, 1, 0}};
  std::size_t total = 1;
  for (int k = 1; total < count; ++k) {
    const double sigma = radial_log_derivative(ball, k, opts);
    if (sigma <= entries.back().value)
      throw Error("Steklov values not strictly increasing at degree " + std::to_string(k));
    const auto mult = spherical_harmonic_multiplicity(n, k);
    entries.push_back({sigma, mult, static_cast<std::size_t>(k)});
    total += mult;
  }
  return SpectrumTable(SpectrumKind::Steklov, std::move(entries));
}

double boundary_area(const BallDomain& ball) {
  return unit_sphere_area(ball.n()) * std::pow(ball.boundary_radius(), ball.n());
}

}  // namespace steklov::exact
