#pragma once

// Steklov and boundary-Laplacian spectra of geodesic balls in the space forms,
// from spherical-harmonic separation and a radial Riccati integration.

#include <cstddef>
#include <cstdint>

#include "steklov/spaceform.hpp"
#include "steklov/spectrum.hpp"

namespace steklov::exact {

/// Geodesic ball of radius R in a space form; caps must stay inside a hemisphere.
class BallDomain {
public:
  /// Throws DomainError for R <= 0 or R >= pi/(2 sqrt K) when K > 0.
  BallDomain(spaceform::SpaceForm space, double radius);

  const spaceform::SpaceForm& space() const noexcept { return space_; }
  double radius() const noexcept { return radius_; }
  int n() const noexcept { return space_.boundary_dim(); }
  /// sn_K(R), the radius of the boundary sphere as a round sphere.
  double boundary_radius() const;
  /// Principal curvature of the boundary sphere.
  double boundary_curvature() const;

private:
  spaceform::SpaceForm space_;
  double radius_;
};

/// Dimension of degree-k spherical harmonics on S^n.
std::uint64_t spherical_harmonic_multiplicity(int n, int k);

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);
/// Area of the unit sphere S^n in R^{n+1}.
double unit_sphere_area(int n);

SpectrumTable boundary_laplacian_spectrum(const BallDomain& ball, std::size_t count);

struct RadialOptions {
  double start_fraction = 1e-6;  // launch radius = start_fraction * R
  double step_tolerance = 1e-12;
  std::size_t max_steps = 200000;
};

/// sigma_k = f'(R)/f(R) for the degree-k separated harmonic f(r) Y_k.
/// Throws IntegrationError when the integrator fails.
double radial_log_derivative(const BallDomain& ball, int k, const RadialOptions& opts = {});

SpectrumTable steklov_ball_spectrum(const BallDomain& ball, std::size_t count,
                                    const RadialOptions& opts = {});

/// |Sigma| = |S^n| sn_K(R)^n.
double boundary_area(const BallDomain& ball);

}  // namespace steklov::exact
