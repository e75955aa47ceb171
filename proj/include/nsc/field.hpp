#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "nsc/grid.hpp"

namespace nsc {

using Complex = std::complex<double>;

/// Real point values on a periodic grid.
struct ScalarField {
  GridSpec grid;
  std::vector<double> samples;

  ScalarField() = default;
  explicit ScalarField(const GridSpec& g) : grid(g), samples(g.size(), 0.0) { g.validate(); }

  /// Samples f(x1, x2, x3) at x_m = m * L / n.
  template <class F>
  static ScalarField from_function(const GridSpec& g, F&& f) {
    ScalarField out(g);
    const double h1 = g.spacing(Axis::x1), h2 = g.spacing(Axis::x2), h3 = g.spacing(Axis::x3);
    for (int i3 = 0; i3 < g.n3; ++i3)
      for (int i2 = 0; i2 < g.n2; ++i2)
        for (int i1 = 0; i1 < g.n1; ++i1)
          out.samples[g.index(i1, i2, i3)] = f(i1 * h1, i2 * h2, i3 * h3);
    return out;
  }

  double& operator()(int i1, int i2, int i3) { return samples[grid.index(i1, i2, i3)]; }
  double operator()(int i1, int i2, int i3) const { return samples[grid.index(i1, i2, i3)]; }

  bool finite() const {
    return std::all_of(samples.begin(), samples.end(), [](double v) { return std::isfinite(v); });
  }

  ScalarField& operator*=(double c) {
    for (double& v : samples) v *= c;
    return *this;
  }
  friend ScalarField operator*(double c, ScalarField f) { return f *= c; }
};

/// Three velocity components on one grid.
struct VectorField {
  GridSpec grid;
  std::array<ScalarField, 3> components;

  VectorField() = default;
  explicit VectorField(const GridSpec& g)
      : grid(g), components{ScalarField(g), ScalarField(g), ScalarField(g)} {}
  VectorField(ScalarField a, ScalarField b, ScalarField c)
      : grid(a.grid), components{std::move(a), std::move(b), std::move(c)} {
    require(components[1].grid == grid && components[2].grid == grid,
            "vector components must share one grid");
  }

  ScalarField& operator[](int i) { return components[static_cast<std::size_t>(i)]; }
  const ScalarField& operator[](int i) const { return components[static_cast<std::size_t>(i)]; }

  bool finite() const {
    return std::all_of(components.begin(), components.end(),
                       [](const ScalarField& c) { return c.finite(); });
  }

  VectorField& operator*=(double c) {
    for (auto& comp : components) comp *= c;
    return *this;
  }
  friend VectorField operator*(double c, VectorField f) { return f *= c; }
};

/// Fourier coefficients of a real field in Hermitian-half storage (k1 >= 0).
///
/// Normalised so that a constant field c has zero-mode coefficient c, i.e.
/// f(x) = sum_k c_k exp(i 2 pi k.x / L).
struct SpectralScalarField {
  GridSpec grid;
  std::vector<Complex> coeffs;

  SpectralScalarField() = default;
  explicit SpectralScalarField(const GridSpec& g) : grid(g), coeffs(g.spectral_size()) {
    g.validate();
  }

  /// Coefficient at integer wavevector k with |k_i| <= n_i / 2; negative k1 is
  /// reconstructed by conjugation.
  Complex coeff(int k1, int k2, int k3) const {
    require(std::abs(k1) <= grid.n1 / 2 && std::abs(k2) <= grid.n2 / 2 &&
                std::abs(k3) <= grid.n3 / 2,
            "wavevector outside the resolved band");
    if (k1 < 0) {
      return std::conj(coeffs[grid.spectral_index(-k1, slot_of(-k2, grid.n2), slot_of(-k3, grid.n3))]);
    }
    return coeffs[grid.spectral_index(k1, slot_of(k2, grid.n2), slot_of(k3, grid.n3))];
  }

  /// Sets coefficient c at k and conj(c) at -k, keeping the field real.
  void set_mode(int k1, int k2, int k3, Complex c) {
    require(std::abs(k1) < grid.n1 / 2 && std::abs(k2) < grid.n2 / 2 &&
                std::abs(k3) < grid.n3 / 2,
            "set_mode: wavevector must lie strictly inside the Nyquist band");
    if (k1 < 0) {
      k1 = -k1;
      k2 = -k2;
      k3 = -k3;
      c = std::conj(c);
    }
    coeffs[grid.spectral_index(k1, slot_of(k2, grid.n2), slot_of(k3, grid.n3))] = c;
    if (k1 == 0) {
      coeffs[grid.spectral_index(0, slot_of(-k2, grid.n2), slot_of(-k3, grid.n3))] =
          (k2 == 0 && k3 == 0) ? Complex(c.real(), 0.0) : std::conj(c);
    }
  }

  SpectralScalarField& operator*=(double c) {
    for (auto& v : coeffs) v *= c;
    return *this;
  }
};

struct SpectralVectorField {
  GridSpec grid;
  std::array<SpectralScalarField, 3> components;

  SpectralVectorField() = default;
  explicit SpectralVectorField(const GridSpec& g)
      : grid(g),
        components{SpectralScalarField(g), SpectralScalarField(g), SpectralScalarField(g)} {}

  SpectralScalarField& operator[](int i) { return components[static_cast<std::size_t>(i)]; }
  const SpectralScalarField& operator[](int i) const {
    return components[static_cast<std::size_t>(i)];
  }

  bool finite() const {
    for (const auto& c : components)
      for (const auto& v : c.coeffs)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }
};

/// Calls fn(index, j1, j2, j3) for every stored spectral slot.
template <class Fn>
void for_each_mode(const GridSpec& g, Fn&& fn) {
  std::size_t idx = 0;
  const int h1 = g.half_n1();
  for (int j3 = 0; j3 < g.n3; ++j3)
    for (int j2 = 0; j2 < g.n2; ++j2)
      for (int j1 = 0; j1 < h1; ++j1, ++idx) fn(idx, j1, j2, j3);
}

/// Multiplicity of a stored slot in the full spectrum (1 on self-conjugate planes, else 2).
inline double hermitian_weight(const GridSpec& g, int j1) noexcept {
  return (j1 == 0 || 2 * j1 == g.n1) ? 1.0 : 2.0;
}

}  // namespace nsc
