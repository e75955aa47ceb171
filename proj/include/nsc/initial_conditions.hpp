#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "nsc/spectral.hpp"

namespace nsc {

/// u = (sin x1 cos x2 cos x3, -cos x1 sin x2 cos x3, 0) in coordinates scaled to 2 pi.
inline VectorField taylor_green(const GridSpec& g) {
  const double s = g.wavenumber_unit();
  auto u1 = ScalarField::from_function(g, [s](double x, double y, double z) {
    return std::sin(s * x) * std::cos(s * y) * std::cos(s * z);
  });
  auto u2 = ScalarField::from_function(g, [s](double x, double y, double z) {
    return -std::cos(s * x) * std::sin(s * y) * std::cos(s * z);
  });
  return VectorField(std::move(u1), std::move(u2), ScalarField(g));
}

/// Visits every integer wavevector with |k_i| <= kmax in one half space
/// (k1 > 0, or k1 == 0 and (k2, k3) lexicographically positive). The order is
/// independent of the grid, so a seeded generator yields the same function on
/// any grid that resolves kmax.
template <class Fn>
void for_each_half_space_mode(int kmax, Fn&& fn) {
  for (int k3 = -kmax; k3 <= kmax; ++k3)
    for (int k2 = -kmax; k2 <= kmax; ++k2)
      for (int k1 = 0; k1 <= kmax; ++k1) {
        if (k1 == 0 && (k2 < 0 || (k2 == 0 && k3 <= 0))) continue;
        fn(k1, k2, k3);
      }
}

/// Parameters of the seeded random trigonometric polynomial family.
struct BandLimitedFamily {
  int kmax = 4;         ///< largest |k_i| present
  double decay = 1.0;   ///< coefficient scale (1 + |k|^2)^(-decay)
  double mean = 0.0;    ///< zero-mode value
};

/// Random real trigonometric polynomial with modes |k_i| <= kmax.
inline ScalarField random_band_limited(const GridSpec& g, const BandLimitedFamily& family,
                                       std::mt19937_64& rng) {
  g.validate();
  require(family.kmax >= 1, "band-limited family needs kmax >= 1");
  require(2 * family.kmax < g.n1 && 2 * family.kmax < g.n2 && 2 * family.kmax < g.n3,
          "band-limited family: kmax must stay below the Nyquist wavenumber");
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralScalarField spec(g);
  for_each_half_space_mode(family.kmax, [&](int k1, int k2, int k3) {
    const double re = normal(rng);
    const double im = normal(rng);
    const double scale =
        std::pow(1.0 + double(k1 * k1 + k2 * k2 + k3 * k3), -family.decay);
    spec.set_mode(k1, k2, k3, scale * Complex(re, im));
  });
  spec.coeffs[0] = family.mean;
  return inverse(spec);
}

struct RandomSolenoidalParams {
  double spectrum_slope = -5.0 / 3.0;  ///< E(k) ~ k^slope above the peak
  double k_peak = 2.0;                 ///< E(k) ~ k^4 below the peak
  double amplitude = 1.0;              ///< overall velocity scale factor
  std::uint64_t seed = 0;
};

/// Shell spectrum shape: k^4 rising to k_peak, then k^slope.
inline double spectrum_shape(double k, const RandomSolenoidalParams& p) {
  const double x = k / p.k_peak;
  return x <= 1.0 ? std::pow(x, 4.0) : std::pow(x, p.spectrum_slope);
}

/// Divergence-free, zero-mean, dealiased random velocity with the given shell spectrum.
inline VectorField random_solenoidal(const GridSpec& g, const RandomSolenoidalParams& p) {
  g.validate();
  const int band = std::min({g.n1, g.n2, g.n3}) / 3;
  require(p.k_peak > 0.0 && p.k_peak <= band,
          "random_solenoidal: k_peak must lie inside the dealiased band (<= " +
              std::to_string(band) + ")");
  std::mt19937_64 rng(p.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralVectorField spec(g);
  for_each_half_space_mode(band, [&](int k1, int k2, int k3) {
    const double kk = std::sqrt(double(k1 * k1 + k2 * k2 + k3 * k3));
    // Per-mode variance spreads the shell energy over its ~4 pi k^2 modes.
    const double scale = std::sqrt(spectrum_shape(kk, p) / (4.0 * std::numbers::pi * kk * kk));
    for (int i = 0; i < 3; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      spec[i].set_mode(k1, k2, k3, p.amplitude * scale * Complex(re, im));
    }
  });
  spec = leray_project(dealias(spec));
  remove_mean(spec);
  return inverse(spec);
}

}  // namespace nsc
