#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "nsc/spectral.hpp"

namespace nsc {

enum class NormKind { lebesgue, sobolev_h1, sup_axis_mixed };

struct NormValue {
  double value = 0.0;
  double p = 2.0;
  NormKind kind = NormKind::lebesgue;

  operator double() const noexcept { return value; }
};

inline constexpr double infinity = std::numeric_limits<double>::infinity();

namespace detail {

/// (sum |v|^p * weight)^(1/p), scaled by max|v| so large values don't overflow.
inline double weighted_lp(std::span<const double> magnitudes, double p, double weight) {
  require(p >= 1.0, "Lp norm requires p >= 1");
  double peak = 0.0;
  for (double v : magnitudes) peak = std::max(peak, v);
  if (peak == 0.0) return 0.0;
  if (std::isinf(p)) return peak;
  double sum = 0.0;
  if (p == 1.0) {
    for (double v : magnitudes) sum += v;
    return sum * weight;
  }
  if (p == 2.0) {
    for (double v : magnitudes) sum += v * v;
    return std::sqrt(sum * weight);
  }
  for (double v : magnitudes) sum += std::pow(v / peak, p);
  return peak * std::pow(sum * weight, 1.0 / p);
}

}  // namespace detail

/// Rectangle-rule (int |f|^p dx)^(1/p); p = infinity gives the sample maximum,
/// which can underestimate the true supremum of an under-resolved field.
inline NormValue lp_norm(const ScalarField& f, double p) {
  std::vector<double> mags(f.samples.size());
  for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = std::abs(f.samples[i]);
  return {detail::weighted_lp(mags, p, f.grid.cell_volume()), p, NormKind::lebesgue};
}

/// Lp norm of the pointwise Euclidean magnitude.
inline NormValue lp_norm(const VectorField& u, double p) {
  std::vector<double> mags(u.grid.size());
  for (std::size_t i = 0; i < mags.size(); ++i) {
    const double a = u[0].samples[i], b = u[1].samples[i], c = u[2].samples[i];
    mags[i] = std::sqrt(a * a + b * b + c * c);
  }
  return {detail::weighted_lp(mags, p, u.grid.cell_volume()), p, NormKind::lebesgue};
}

/// sum_i ||d_i f||_2^2 from coefficients.
inline double gradient_l2_squared(const SpectralScalarField& s) {
  const detail::WavenumberTable t(s.grid);
  double sum = 0.0;
  for_each_mode(s.grid, [&](std::size_t idx, int j1, int j2, int j3) {
    const double k1 = t.odd1[std::size_t(j1)], k2 = t.odd2[std::size_t(j2)],
                 k3 = t.odd3[std::size_t(j3)];
    sum += hermitian_weight(s.grid, j1) * (k1 * k1 + k2 * k2 + k3 * k3) * std::norm(s.coeffs[idx]);
  });
  return sum * s.grid.volume();
}

/// (||psi||_2^2 + ||grad psi||_2^2)^(1/2).
inline NormValue h1_norm(const ScalarField& f) {
  const double l2 = lp_norm(f, 2.0).value;
  const double g2 = gradient_l2_squared(forward(f));
  return {std::sqrt(l2 * l2 + g2), 2.0, NormKind::sobolev_h1};
}

/// Collapses `axis` by max |f|, then takes the discrete L^r norm over the two remaining axes.
inline NormValue sup_axis_lr_norm(const ScalarField& f, Axis axis, double r) {
  require(r >= 1.0 && std::isfinite(r), "sup_axis_lr_norm requires 1 <= r < infinity");
  const GridSpec& g = f.grid;
  const int a = index_of(axis);
  const int na = g.points(axis);
  const int nb = g.points(static_cast<Axis>((a + 1) % 3));
  const int nc = g.points(static_cast<Axis>((a + 2) % 3));
  std::vector<double> collapsed(static_cast<std::size_t>(nb) * nc, 0.0);
  for (int ic = 0; ic < nc; ++ic)
    for (int ib = 0; ib < nb; ++ib) {
      double m = 0.0;
      for (int ia = 0; ia < na; ++ia) {
        int idx[3];
        idx[a] = ia;
        idx[(a + 1) % 3] = ib;
        idx[(a + 2) % 3] = ic;
        m = std::max(m, std::abs(f(idx[0], idx[1], idx[2])));
      }
      collapsed[static_cast<std::size_t>(ib) + static_cast<std::size_t>(nb) * ic] = m;
    }
  const double area = g.spacing(static_cast<Axis>((a + 1) % 3)) *
                      g.spacing(static_cast<Axis>((a + 2) % 3));
  return {detail::weighted_lp(collapsed, r, area), r, NormKind::sup_axis_mixed};
}

/// ||d u_j / d x_k||_alpha for every entry of the velocity Jacobian at one alpha.
struct EntryNormMatrix {
  double alpha = 2.0;
  std::array<std::array<double, 3>, 3> value{};  ///< value[j][k], zero-based
};

struct GradNorms {
  double grad_l2 = 0.0;         ///< ||grad u||_2
  double grad_h_l2 = 0.0;       ///< ||grad_h u||_2, derivatives in x1 and x2 only
  double laplacian_l2 = 0.0;    ///< ||Laplacian u||_2
  double grad_h_grad_l2 = 0.0;  ///< ||grad_h grad u||_2
  std::vector<EntryNormMatrix> entries;
};

/// Jacobian entries d u_j / d x_k in physical space, indexed [j][k].
inline std::array<std::array<ScalarField, 3>, 3> jacobian(const SpectralVectorField& u_hat) {
  std::array<std::array<ScalarField, 3>, 3> out;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k)
      out[std::size_t(j)][std::size_t(k)] = inverse(derivative(u_hat[j], static_cast<Axis>(k)));
  return out;
}

inline GradNorms grad_norms(const SpectralVectorField& u_hat, std::span<const double> alphas) {
  const GridSpec& g = u_hat.grid;
  const detail::WavenumberTable t(g);
  double grad = 0.0, grad_h = 0.0, lap = 0.0, hgrad = 0.0;
  for (int i = 0; i < 3; ++i) {
    for_each_mode(g, [&](std::size_t idx, int j1, int j2, int j3) {
      const double w = hermitian_weight(g, j1) * std::norm(u_hat[i].coeffs[idx]);
      const double a = t.odd1[std::size_t(j1)], b = t.odd2[std::size_t(j2)],
                   c = t.odd3[std::size_t(j3)];
      // Second derivatives use the full symbol; first derivatives drop Nyquist.
      const double f1 = t.k1[std::size_t(j1)], f2 = t.k2[std::size_t(j2)];
      const double kk = t.k_squared(j1, j2, j3);
      grad += w * (a * a + b * b + c * c);
      grad_h += w * (a * a + b * b);
      lap += w * kk * kk;
      hgrad += w * (f1 * f1 + f2 * f2) * kk;
    });
  }
  const double vol = g.volume();
  GradNorms out{std::sqrt(grad * vol), std::sqrt(grad_h * vol), std::sqrt(lap * vol),
                std::sqrt(hgrad * vol), {}};
  if (!alphas.empty()) {
    const auto jac = jacobian(u_hat);
    for (double alpha : alphas) {
      EntryNormMatrix m{alpha, {}};
      for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < 3; ++k) m.value[j][k] = lp_norm(jac[j][k], alpha).value;
      out.entries.push_back(m);
    }
  }
  return out;
}

inline GradNorms grad_norms(const VectorField& u, std::span<const double> alphas) {
  return grad_norms(forward(u), alphas);
}

}  // namespace nsc
