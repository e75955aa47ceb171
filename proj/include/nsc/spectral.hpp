#pragma once

#include <cmath>
#include <vector>

#include "nsc/fft.hpp"
#include "nsc/field.hpp"

namespace nsc {

// ---------------------------------------------------------------------------
// Transforms

inline SpectralScalarField forward(const ScalarField& field) {
  field.grid.validate();
  require(field.finite(), "forward transform: field contains non-finite samples");
  SpectralScalarField out(field.grid);
  detail::plan_for(field.grid).forward(field.samples.data(), out.coeffs.data());
  const double scale = 1.0 / static_cast<double>(field.grid.size());
  for (auto& c : out.coeffs) c *= scale;
  return out;
}

inline ScalarField inverse(const SpectralScalarField& spec) {
  ScalarField out(spec.grid);
  std::vector<Complex> scratch = spec.coeffs;
  detail::plan_for(spec.grid).backward(scratch.data(), out.samples.data());
  return out;
}

inline SpectralVectorField forward(const VectorField& field) {
  SpectralVectorField out(field.grid);
  for (int i = 0; i < 3; ++i) out[i] = forward(field[i]);
  return out;
}

inline VectorField inverse(const SpectralVectorField& spec) {
  return VectorField(inverse(spec[0]), inverse(spec[1]), inverse(spec[2]));
}

// ---------------------------------------------------------------------------
// Wavenumber tables

namespace detail {

/// Per-axis physical wavenumbers (2 pi k / L) for each storage slot.
struct WavenumberTable {
  std::vector<double> k1, k2, k3;          // signed, Nyquist -> +n/2
  std::vector<double> odd1, odd2, odd3;    // first-derivative symbols, Nyquist -> 0

  explicit WavenumberTable(const GridSpec& g) {
    const double unit = g.wavenumber_unit();
    auto fill = [unit](int count, int n, std::vector<double>& full, std::vector<double>& odd) {
      full.resize(static_cast<std::size_t>(count));
      odd.resize(static_cast<std::size_t>(count));
      for (int j = 0; j < count; ++j) {
        full[static_cast<std::size_t>(j)] = unit * wavenumber(j, n);
        odd[static_cast<std::size_t>(j)] = unit * odd_wavenumber(j, n);
      }
    };
    fill(g.half_n1(), g.n1, k1, odd1);
    fill(g.n2, g.n2, k2, odd2);
    fill(g.n3, g.n3, k3, odd3);
  }

  const std::vector<double>& odd(Axis a) const {
    return a == Axis::x1 ? odd1 : (a == Axis::x2 ? odd2 : odd3);
  }
  double k_squared(int j1, int j2, int j3) const {
    const auto a = k1[static_cast<std::size_t>(j1)], b = k2[static_cast<std::size_t>(j2)],
               c = k3[static_cast<std::size_t>(j3)];
    return a * a + b * b + c * c;
  }
};

inline std::size_t slot_for_axis(Axis a, int j1, int j2, int j3) {
  return static_cast<std::size_t>(a == Axis::x1 ? j1 : (a == Axis::x2 ? j2 : j3));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Differential operators

/// Spectral derivative along one axis: multiplication by i 2 pi k_axis / L.
/// The Nyquist slot of that axis is zeroed.
inline SpectralScalarField derivative(const SpectralScalarField& spec, Axis axis) {
  const detail::WavenumberTable table(spec.grid);
  const auto& kk = table.odd(axis);
  SpectralScalarField out(spec.grid);
  for_each_mode(spec.grid, [&](std::size_t idx, int j1, int j2, int j3) {
    const double k = kk[detail::slot_for_axis(axis, j1, j2, j3)];
    out.coeffs[idx] = Complex(0.0, k) * spec.coeffs[idx];
  });
  return out;
}

inline SpectralScalarField laplacian(const SpectralScalarField& spec) {
  const detail::WavenumberTable table(spec.grid);
  SpectralScalarField out(spec.grid);
  for_each_mode(spec.grid, [&](std::size_t idx, int j1, int j2, int j3) {
    out.coeffs[idx] = -table.k_squared(j1, j2, j3) * spec.coeffs[idx];
  });
  return out;
}

inline SpectralScalarField divergence(const SpectralVectorField& v) {
  const detail::WavenumberTable t(v.grid);
  SpectralScalarField out(v.grid);
  for_each_mode(v.grid, [&](std::size_t idx, int j1, int j2, int j3) {
    const double a = t.odd1[static_cast<std::size_t>(j1)], b = t.odd2[static_cast<std::size_t>(j2)],
                 c = t.odd3[static_cast<std::size_t>(j3)];
    out.coeffs[idx] = Complex(0.0, 1.0) * (a * v[0].coeffs[idx] + b * v[1].coeffs[idx] +
                                           c * v[2].coeffs[idx]);
  });
  return out;
}

inline SpectralVectorField gradient(const SpectralScalarField& s) {
  SpectralVectorField out(s.grid);
  for (int i = 0; i < 3; ++i) out[i] = derivative(s, static_cast<Axis>(i));
  return out;
}

/// Mode-wise projection u <- u - k (k.u) / |k|^2 onto divergence-free fields.
///
/// Uses the same wavevector as `divergence` (Nyquist components read as 0), so
/// the discrete divergence of the result vanishes to rounding; modes whose
/// effective wavevector is zero pass through unchanged.
inline SpectralVectorField leray_project(const SpectralVectorField& v) {
  const detail::WavenumberTable t(v.grid);
  SpectralVectorField out = v;
  for_each_mode(v.grid, [&](std::size_t idx, int j1, int j2, int j3) {
    const double k[3] = {t.odd1[static_cast<std::size_t>(j1)], t.odd2[static_cast<std::size_t>(j2)],
                         t.odd3[static_cast<std::size_t>(j3)]};
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if (k2 == 0.0) return;
    const Complex kdotu =
        k[0] * v[0].coeffs[idx] + k[1] * v[1].coeffs[idx] + k[2] * v[2].coeffs[idx];
    for (int i = 0; i < 3; ++i) out[i].coeffs[idx] -= (k[i] / k2) * kdotu;
  });
  return out;
}

/// 2/3-rule mask: true when every |k_i| <= n_i / 3.
inline bool dealias_keeps(const GridSpec& g, int j1, int j2, int j3) noexcept {
  return 3 * std::abs(wavenumber(j1, g.n1)) <= g.n1 && 3 * std::abs(wavenumber(j2, g.n2)) <= g.n2 &&
         3 * std::abs(wavenumber(j3, g.n3)) <= g.n3;
}

inline SpectralScalarField dealias(const SpectralScalarField& spec) {
  SpectralScalarField out = spec;
  for_each_mode(spec.grid, [&](std::size_t idx, int j1, int j2, int j3) {
    if (!dealias_keeps(spec.grid, j1, j2, j3)) out.coeffs[idx] = 0.0;
  });
  return out;
}

inline SpectralVectorField dealias(const SpectralVectorField& v) {
  SpectralVectorField out(v.grid);
  for (int i = 0; i < 3; ++i) out[i] = dealias(v[i]);
  return out;
}

/// Zeroes the k = 0 coefficient of every component.
inline void remove_mean(SpectralVectorField& v) {
  for (int i = 0; i < 3; ++i) v[i].coeffs[0] = 0.0;
}

// ---------------------------------------------------------------------------
// Spectral quadrature

/// Real inner product int f g dx evaluated from coefficients (Parseval).
inline double inner_product(const SpectralScalarField& a, const SpectralScalarField& b) {
  require(a.grid == b.grid, "inner_product: grids differ");
  double sum = 0.0;
  for_each_mode(a.grid, [&](std::size_t idx, int j1, int, int) {
    const Complex& x = a.coeffs[idx];
    const Complex& y = b.coeffs[idx];
    sum += hermitian_weight(a.grid, j1) * (x.real() * y.real() + x.imag() * y.imag());
  });
  return sum * a.grid.volume();
}

inline double inner_product(const SpectralVectorField& a, const SpectralVectorField& b) {
  return inner_product(a[0], b[0]) + inner_product(a[1], b[1]) + inner_product(a[2], b[2]);
}

inline double l2_norm_squared(const SpectralScalarField& s) { return inner_product(s, s); }
inline double l2_norm_squared(const SpectralVectorField& v) { return inner_product(v, v); }

/// Largest |c(k) - conj(c(-k))| on the self-conjugate planes k1 = 0 and k1 = n1/2.
inline double hermitian_defect(const SpectralScalarField& s) {
  const GridSpec& g = s.grid;
  double worst = 0.0;
  for (int j1 : {0, g.n1 / 2}) {
    for (int j3 = 0; j3 < g.n3; ++j3)
      for (int j2 = 0; j2 < g.n2; ++j2) {
        const int m2 = (g.n2 - j2) % g.n2, m3 = (g.n3 - j3) % g.n3;
        const Complex a = s.coeffs[g.spectral_index(j1, j2, j3)];
        const Complex b = s.coeffs[g.spectral_index(j1, m2, m3)];
        worst = std::max(worst, std::abs(a - std::conj(b)));
      }
  }
  return worst;
}

inline double hermitian_defect(const SpectralVectorField& v) {
  return std::max({hermitian_defect(v[0]), hermitian_defect(v[1]), hermitian_defect(v[2])});
}

}  // namespace nsc
