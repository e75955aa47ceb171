#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "nsc/initial_conditions.hpp"
#include "nsc/norms.hpp"
#include "nsc/rational.hpp"

namespace nsc {

enum class InequalityKind { lemma1, lemma2, ladyzhenskaya };

inline const char* to_string(InequalityKind k) {
  switch (k) {
    case InequalityKind::lemma1: return "lemma1";
    case InequalityKind::lemma2: return "lemma2";
    default: return "ladyzhenskaya";
  }
}

inline InequalityKind parse_inequality_kind(const std::string& s) {
  if (s == "lemma1") return InequalityKind::lemma1;
  if (s == "lemma2") return InequalityKind::lemma2;
  if (s == "ladyzhenskaya") return InequalityKind::ladyzhenskaya;
  throw InvalidArgument("unknown inequality kind '" + s + "'");
}

/// Valid r for each inequality: (2, 3) for the trilinear lemmas, [2, 6] otherwise.
inline bool r_in_range(InequalityKind kind, double r) {
  if (kind == InequalityKind::ladyzhenskaya) return r >= 2.0 && r <= 6.0;
  return r > 2.0 && r < 3.0;
}

inline void require_r(InequalityKind kind, double r) {
  require(r_in_range(kind, r), std::string(to_string(kind)) +
                                   (kind == InequalityKind::ladyzhenskaya
                                        ? " requires 2 <= r <= 6"
                                        : " requires 2 < r < 3"));
}

/// Both sides of one inequality instance, without the unknown constant.
struct InequalityReport {
  InequalityKind kind = InequalityKind::lemma1;
  double r = 0.0;
  double lhs = 0.0;
  double rhs_factor = 0.0;
  double ratio = 0.0;  ///< lhs / rhs_factor, NaN when degenerate
  bool degenerate = false;
  /// Ladyzhenskaya only: the H1 form of the right side and its ratio.
  double rhs_factor_weak = 0.0;
  double ratio_weak = 0.0;
};

inline constexpr double degenerate_threshold = 1e-13;

namespace detail {

inline double safe_ratio(double lhs, double rhs, bool& degenerate) {
  degenerate = !(rhs >= degenerate_threshold);
  return degenerate ? std::numeric_limits<double>::quiet_NaN() : lhs / rhs;
}

inline double l2(const SpectralScalarField& s) { return std::sqrt(l2_norm_squared(s)); }

/// |int phi f g| <= C ||phi||_2^((r-1)/r) ||d_a phi||_(2/(3-r))^(1/r)
///                 ||f||_2^((r-2)/r) ||d_b f||_2^(1/r) ||d_c f||_2^(1/r) ||g||_2
inline InequalityReport trilinear(InequalityKind kind, const ScalarField& phi,
                                  const ScalarField& f, const ScalarField& g, double r,
                                  Axis phi_axis, Axis f_axis_a, Axis f_axis_b) {
  require_r(kind, r);
  require(phi.grid == f.grid && f.grid == g.grid, "lemma fields must share one grid");
  double sum = 0.0;
  for (std::size_t i = 0; i < phi.samples.size(); ++i)
    sum += phi.samples[i] * f.samples[i] * g.samples[i];
  const double lhs = std::abs(sum * phi.grid.cell_volume());

  const auto phi_hat = forward(phi);
  const auto f_hat = forward(f);
  const double phi_l2 = lp_norm(phi, 2.0);
  const double dphi = lp_norm(inverse(derivative(phi_hat, phi_axis)), 2.0 / (3.0 - r));
  const double f_l2 = lp_norm(f, 2.0);
  const double dfa = l2(derivative(f_hat, f_axis_a));
  const double dfb = l2(derivative(f_hat, f_axis_b));
  const double g_l2 = lp_norm(g, 2.0);

  const double rhs = std::pow(phi_l2, (r - 1.0) / r) * std::pow(dphi, 1.0 / r) *
                     std::pow(f_l2, (r - 2.0) / r) * std::pow(dfa, 1.0 / r) *
                     std::pow(dfb, 1.0 / r) * g_l2;
  InequalityReport rep{kind, r, lhs, rhs, 0.0, false, 0.0, 0.0};
  rep.ratio = safe_ratio(lhs, rhs, rep.degenerate);
  return rep;
}

}  // namespace detail

/// Trilinear estimate with the x1-derivative on phi and x2, x3 derivatives on f.
inline InequalityReport eval_lemma1(const ScalarField& phi, const ScalarField& f,
                                    const ScalarField& g, double r) {
  return detail::trilinear(InequalityKind::lemma1, phi, f, g, r, Axis::x1, Axis::x2, Axis::x3);
}

/// Trilinear estimate with the x3-derivative on phi and x1, x2 derivatives on f.
inline InequalityReport eval_lemma2(const ScalarField& phi, const ScalarField& f,
                                    const ScalarField& g, double r) {
  return detail::trilinear(InequalityKind::lemma2, phi, f, g, r, Axis::x3, Axis::x1, Axis::x2);
}

/// Periodic directional Ladyzhenskaya inequality
///   ||psi||_r <= C ||psi||_2^((6-r)/(2r)) prod_i (||d_i psi||_2 + ||psi||_2)^((r-2)/(2r))
/// and its H1 form ||psi||_2^((6-r)/(2r)) ||psi||_H1^(3(r-2)/(2r)).
inline InequalityReport eval_ladyzhenskaya(const ScalarField& psi, double r) {
  require_r(InequalityKind::ladyzhenskaya, r);
  const double lhs = lp_norm(psi, r);
  const double l2 = lp_norm(psi, 2.0);
  const auto psi_hat = forward(psi);
  const double outer = (6.0 - r) / (2.0 * r);
  const double inner = (r - 2.0) / (2.0 * r);
  double rhs = std::pow(l2, outer);
  for (int a = 0; a < 3; ++a) {
    const double d = detail::l2(derivative(psi_hat, static_cast<Axis>(a)));
    rhs *= std::pow(d + l2, inner);
  }
  const double h1 = std::sqrt(l2 * l2 + gradient_l2_squared(psi_hat));
  const double rhs_weak = std::pow(l2, outer) * std::pow(h1, 3.0 * inner);
  InequalityReport rep{InequalityKind::ladyzhenskaya, r, lhs, rhs, 0.0, false, rhs_weak, 0.0};
  rep.ratio = detail::safe_ratio(lhs, rhs, rep.degenerate);
  bool weak_degenerate = false;
  rep.ratio_weak = detail::safe_ratio(lhs, rhs_weak, weak_degenerate);
  return rep;
}

/// Relabels x1 <-> x3 (requires n1 == n3).
inline ScalarField swap_x1_x3(const ScalarField& f) {
  const GridSpec& g = f.grid;
  require(g.n1 == g.n3, "swap_x1_x3 needs n1 == n3");
  ScalarField out(GridSpec{g.n3, g.n2, g.n1, g.length});
  for (int i3 = 0; i3 < g.n3; ++i3)
    for (int i2 = 0; i2 < g.n2; ++i2)
      for (int i1 = 0; i1 < g.n1; ++i1) out(i3, i2, i1) = f(i1, i2, i3);
  return out;
}

/// r = (3 alpha - 2) / alpha, the interpolation index paired with the entry
/// exponent alpha; it satisfies 2 < r < 3 and 2 / (3 - r) = alpha.
template <class T>
T exponent_map_r_of_alpha(const T& alpha) {
  require(alpha > T(2), "exponent map needs alpha > 2");
  return T((T(3) * alpha - T(2)) / alpha);
}

/// 2 / (3 - r): the Lebesgue exponent of the phi-derivative in the trilinear estimates.
template <class T>
T derivative_exponent(const T& r) {
  return T(T(2) / (T(3) - r));
}

// ---------------------------------------------------------------------------
// Empirical constant sweeps

struct SweepCase {
  InequalityKind kind;
  double r;
  std::uint64_t seed;
  InequalityReport report;
};

struct SweepSummary {
  InequalityKind kind;
  double r;
  std::size_t count = 0;
  std::size_t degenerate = 0;
  double max_ratio = 0.0;
  double median_ratio = 0.0;
  double min_ratio = 0.0;
};

struct SweepResult {
  std::vector<SweepCase> cases;
  std::vector<SweepSummary> summary;
};

struct SweepOptions {
  GridSpec grid = GridSpec::cube(32);
  BandLimitedFamily family{};
  std::size_t n_samples = 200;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Evaluates one seeded case. Lemma cases draw (phi, f, g) from one generator;
/// Ladyzhenskaya draws psi.
inline InequalityReport evaluate_case(InequalityKind kind, double r, std::uint64_t seed,
                                      const GridSpec& grid, const BandLimitedFamily& family) {
  std::mt19937_64 rng(seed);
  if (kind == InequalityKind::ladyzhenskaya) {
    return eval_ladyzhenskaya(random_band_limited(grid, family, rng), r);
  }
  const auto phi = random_band_limited(grid, family, rng);
  const auto f = random_band_limited(grid, family, rng);
  const auto g = random_band_limited(grid, family, rng);
  return kind == InequalityKind::lemma1 ? eval_lemma1(phi, f, g, r) : eval_lemma2(phi, f, g, r);
}

inline SweepSummary summarize(InequalityKind kind, double r, std::span<const SweepCase> cases) {
  SweepSummary s{kind, r, cases.size(), 0, 0.0, 0.0, 0.0};
  std::vector<double> ratios;
  for (const auto& c : cases) {
    if (c.report.degenerate) {
      ++s.degenerate;
    } else {
      ratios.push_back(c.report.ratio);
    }
  }
  if (ratios.empty()) return s;
  std::sort(ratios.begin(), ratios.end());
  s.min_ratio = ratios.front();
  s.max_ratio = ratios.back();
  const std::size_t m = ratios.size() / 2;
  s.median_ratio = ratios.size() % 2 ? ratios[m] : 0.5 * (ratios[m - 1] + ratios[m]);
  return s;
}

/// Per-r ratio statistics over seeded band-limited inputs. Case i uses seed
/// `options.seed + i`; the result is independent of the thread count.
inline SweepResult sweep_constants(InequalityKind kind, std::span<const double> r_list,
                                   const SweepOptions& options) {
  for (double r : r_list) require_r(kind, r);
  options.grid.validate();
  const int kmax = options.family.kmax;
  require(kmax >= 1 && 2 * kmax < options.grid.n1 && 2 * kmax < options.grid.n2 &&
              2 * kmax < options.grid.n3,
          "sweep: family kmax must be >= 1 and below the grid's Nyquist wavenumber");
  SweepResult result;
  const std::size_t n = options.n_samples;
  result.cases.resize(r_list.size() * n);
  for (std::size_t ri = 0; ri < r_list.size(); ++ri)
    for (std::size_t i = 0; i < n; ++i)
      result.cases[ri * n + i] = {kind, r_list[ri], options.seed + i, {}};

  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t c = begin; c < result.cases.size(); c += stride) {
      auto& sc = result.cases[c];
      sc.report = evaluate_case(kind, sc.r, sc.seed, options.grid, options.family);
    }
  };
  const unsigned threads = std::max(1u, options.threads);
  if (threads == 1 || result.cases.size() < 2) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }
  if (n > 0) {
    for (std::size_t ri = 0; ri < r_list.size(); ++ri) {
      result.summary.push_back(summarize(
          kind, r_list[ri], std::span<const SweepCase>(result.cases).subspan(ri * n, n)));
    }
  }
  return result;
}

}  // namespace nsc
