#pragma once

#include <cstddef>
#include <numbers>
#include <string>

#include "nsc/error.hpp"

namespace nsc {

enum class Axis : int { x1 = 0, x2 = 1, x3 = 2 };

inline constexpr int index_of(Axis a) noexcept { return static_cast<int>(a); }

/// Axis from its 1-based label.
inline Axis axis_from_label(int label) {
  require(label >= 1 && label <= 3, "axis label must be 1, 2 or 3, got " + std::to_string(label));
  return static_cast<Axis>(label - 1);
}

/// Uniform periodic grid of n1 x n2 x n3 points on [0, L]^3.
///
/// Physical samples are stored x1-fastest: index = i1 + n1 * (i2 + n2 * i3).
/// Spectral coefficients keep only k1 >= 0 (Hermitian half), stored
/// j1 + (n1/2 + 1) * (j2 + n2 * j3).
struct GridSpec {
  int n1 = 32;
  int n2 = 32;
  int n3 = 32;
  double length = 2.0 * std::numbers::pi;

  static GridSpec cube(int n, double length = 2.0 * std::numbers::pi) {
    GridSpec g{n, n, n, length};
    g.validate();
    return g;
  }

  void validate() const {
    for (int n : {n1, n2, n3}) {
      require(n >= 4 && n % 2 == 0,
              "grid points per axis must be even and >= 4, got " + std::to_string(n));
    }
    require(length > 0.0, "box length must be positive");
  }

  int points(Axis a) const noexcept {
    switch (a) {
      case Axis::x1: return n1;
      case Axis::x2: return n2;
      default: return n3;
    }
  }

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2) *
           static_cast<std::size_t>(n3);
  }
  int half_n1() const noexcept { return n1 / 2 + 1; }
  std::size_t spectral_size() const noexcept {
    return static_cast<std::size_t>(half_n1()) * static_cast<std::size_t>(n2) *
           static_cast<std::size_t>(n3);
  }

  double spacing(Axis a) const noexcept { return length / points(a); }
  double volume() const noexcept { return length * length * length; }
  double cell_volume() const noexcept { return volume() / static_cast<double>(size()); }
  /// 2*pi / L, the wavenumber unit.
  double wavenumber_unit() const noexcept { return 2.0 * std::numbers::pi / length; }

  std::size_t index(int i1, int i2, int i3) const noexcept {
    return static_cast<std::size_t>(i1) +
           static_cast<std::size_t>(n1) *
               (static_cast<std::size_t>(i2) + static_cast<std::size_t>(n2) * i3);
  }
  std::size_t spectral_index(int j1, int j2, int j3) const noexcept {
    return static_cast<std::size_t>(j1) +
           static_cast<std::size_t>(half_n1()) *
               (static_cast<std::size_t>(j2) + static_cast<std::size_t>(n2) * j3);
  }

  bool operator==(const GridSpec&) const = default;
};

/// Signed integer wavenumber of FFT slot j on an n-point axis. Nyquist maps to +n/2.
inline constexpr int wavenumber(int j, int n) noexcept { return j <= n / 2 ? j : j - n; }

/// Storage slot of integer wavenumber k on an n-point axis.
inline constexpr int slot_of(int k, int n) noexcept { return k >= 0 ? k : k + n; }

/// Wavenumber used by odd-order derivatives: the Nyquist slot has no sign, so it maps to 0.
inline constexpr int odd_wavenumber(int j, int n) noexcept {
  return j == n / 2 ? 0 : wavenumber(j, n);
}

}  // namespace nsc
