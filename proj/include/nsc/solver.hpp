#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nsc/criterion.hpp"
#include "nsc/initial_conditions.hpp"
#include "nsc/snapshot.hpp"
#include "nsc/spectral.hpp"

namespace nsc {

struct TaylorGreenInit {};
struct RandomSolenoidalInit {
  RandomSolenoidalParams params;
};
struct FileInit {
  std::string path;
};
using InitialCondition = std::variant<TaylorGreenInit, RandomSolenoidalInit, FileInit>;

struct SolverConfig {
  GridSpec grid = GridSpec::cube(32);
  double nu = 0.1;
  double t_end = 1.0;
  double cfl = 0.5;
  double output_interval = 0.1;
  double dt_max = infinity;  ///< optional cap on the step below the CFL value
  InitialCondition initial_condition = TaylorGreenInit{};

  void validate() const {
    grid.validate();
    require(nu > 0.0, "viscosity nu must be > 0");
    require(t_end >= 0.0 && std::isfinite(t_end), "t_end must be finite and >= 0");
    require(cfl > 0.0 && cfl <= 1.0, "cfl must lie in (0, 1]");
    require(output_interval > 0.0, "output_interval must be > 0");
    require(dt_max > 0.0, "dt_max must be > 0");
  }
};

/// Integrator state. `u_hat` is divergence-free, dealiased and zero-mean.
struct SolverState {
  double t = 0.0;
  SpectralVectorField u_hat;
  long step_count = 0;
  double dissipation_integral = 0.0;  ///< 2 nu int_0^t ||grad u||_2^2 ds
};

/// Projects an initial velocity onto the solver's admissible set.
inline SolverState make_state(const VectorField& u0, double t0 = 0.0) {
  require(u0.finite(), "initial velocity contains non-finite samples");
  auto u_hat = leray_project(dealias(forward(u0)));
  remove_mean(u_hat);
  return {t0, std::move(u_hat), 0, 0.0};
}

/// -P[(u . grad) u], evaluated pseudo-spectrally with 2/3 dealiasing.
inline SpectralVectorField nonlinear_term(const SpectralVectorField& u_hat) {
  const GridSpec& g = u_hat.grid;
  const VectorField u = inverse(u_hat);
  SpectralVectorField adv(g);
  for (int i = 0; i < 3; ++i) {
    ScalarField sum(g);
    for (int j = 0; j < 3; ++j) {
      const ScalarField d = inverse(derivative(u_hat[i], static_cast<Axis>(j)));
      const auto& uj = u[j].samples;
      for (std::size_t p = 0; p < sum.samples.size(); ++p) sum.samples[p] += uj[p] * d.samples[p];
    }
    if (!sum.finite()) throw NumericalBreakdown("non-finite advection term", 0.0);
    adv[i] = forward(sum);
  }
  auto out = leray_project(dealias(adv));
  for (int i = 0; i < 3; ++i) out[i] *= -1.0;
  return out;
}

namespace detail {

/// J_m(z) = int_0^1 exp(-z x) x^m dx for m = 0, 1, 2.
inline std::array<double, 3> exponential_moments(double z) {
  std::array<double, 3> j{};
  if (z < 0.5) {
    // Alternating series; the closed form cancels catastrophically here.
    for (int m = 0; m < 3; ++m) {
      double term = 1.0, sum = 0.0;
      for (int n = 0; n < 24; ++n) {
        sum += term / (n + m + 1);
        term *= -z / (n + 1);
      }
      j[std::size_t(m)] = sum;
    }
    return j;
  }
  const double e = std::exp(-z);
  j[0] = (1.0 - e) / z;
  j[1] = (1.0 - (1.0 + z) * e) / (z * z);
  j[2] = (2.0 - (2.0 + 2.0 * z + z * z) * e) / (z * z * z);
  return j;
}

/// Mode-wise integrating factors and energy-dissipation quadrature weights for one step.
///
/// Over a step of length h the dissipation of mode k is
///   int_0^h lambda exp(-lambda s) |v(s)|^2 ds,  lambda = 2 nu |k|^2,
/// where v is the integrating-factor variable. |v|^2 is interpolated through
/// s = 0, h/2, h and the exponential weight is integrated exactly; the weights
/// below already fold in the factors exp(lambda s_i) that turn |u(s_i)|^2 into
/// |v(s_i)|^2. For lambda h -> 0 they reduce to h/6, 4h/6, h/6.
struct ViscousFactors {
  std::vector<double> half;  ///< exp(-nu |k|^2 h / 2)
  std::vector<double> full;  ///< exp(-nu |k|^2 h)
  std::vector<double> w0, w_mid, w1;

  ViscousFactors(const GridSpec& g, double nu, double h)
      : half(g.spectral_size()), full(g.spectral_size()), w0(g.spectral_size()),
        w_mid(g.spectral_size()), w1(g.spectral_size()) {
    const WavenumberTable t(g);
    for_each_mode(g, [&](std::size_t idx, int j1, int j2, int j3) {
      const double k2 = t.k_squared(j1, j2, j3);
      half[idx] = std::exp(-0.5 * nu * k2 * h);
      full[idx] = std::exp(-nu * k2 * h);
      const double lambda = 2.0 * nu * k2;
      const double z = std::min(lambda * h, 700.0);
      const auto j = exponential_moments(z);
      // Lagrange basis on nodes 0, 1/2, 1: 2x^2-3x+1, -4x^2+4x, 2x^2-x.
      w0[idx] = lambda * h * (2.0 * j[2] - 3.0 * j[1] + j[0]);
      w_mid[idx] = lambda * h * std::exp(0.5 * z) * (4.0 * j[1] - 4.0 * j[2]);
      w1[idx] = lambda * h * std::exp(z) * (2.0 * j[2] - j[1]);
    });
  }
};

template <class Fn>
SpectralVectorField combine(const GridSpec& g, Fn&& fn) {
  SpectralVectorField out(g);
  for (int i = 0; i < 3; ++i)
    for (std::size_t m = 0; m < g.spectral_size(); ++m) out[i].coeffs[m] = fn(i, m);
  return out;
}

/// Energy removed by viscosity over one step, from the four RK stage states.
inline double step_dissipation(const ViscousFactors& f, const SpectralVectorField& u,
                               const SpectralVectorField& a, const SpectralVectorField& b,
                               const SpectralVectorField& c) {
  const GridSpec& g = u.grid;
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    for_each_mode(g, [&](std::size_t m, int j1, int, int) {
      const double mid = 0.5 * (std::norm(a[i].coeffs[m]) + std::norm(b[i].coeffs[m]));
      sum += hermitian_weight(g, j1) *
             (f.w0[m] * std::norm(u[i].coeffs[m]) + f.w_mid[m] * mid + f.w1[m] * std::norm(c[i].coeffs[m]));
    });
  }
  return sum * g.volume();
}

}  // namespace detail

/// One integrating-factor RK4 step. The viscous term is integrated exactly with
/// exp(-nu |k|^2 dt); the dissipation integral is advanced from the same stage
/// states so the energy budget closes at fourth order.
///
/// Stability requires dt <= cfl_dt(state); this is the caller's responsibility.
inline SolverState step(const SolverState& s, double dt, double nu) {
  require(dt > 0.0 && std::isfinite(dt), "step: dt must be positive");
  require(nu > 0.0, "step: nu must be positive");
  const GridSpec& g = s.u_hat.grid;
  const detail::ViscousFactors e(g, nu, dt);
  const auto& u = s.u_hat;
  try {
    const auto k1 = nonlinear_term(u);
    const auto a = detail::combine(g, [&](int i, std::size_t m) {
      return e.half[m] * (u[i].coeffs[m] + 0.5 * dt * k1[i].coeffs[m]);
    });
    const auto k2 = nonlinear_term(a);
    const auto b = detail::combine(g, [&](int i, std::size_t m) {
      return e.half[m] * u[i].coeffs[m] + 0.5 * dt * k2[i].coeffs[m];
    });
    const auto k3 = nonlinear_term(b);
    const auto c = detail::combine(g, [&](int i, std::size_t m) {
      return e.full[m] * u[i].coeffs[m] + dt * e.half[m] * k3[i].coeffs[m];
    });
    const auto k4 = nonlinear_term(c);
    auto next = detail::combine(g, [&](int i, std::size_t m) {
      return e.full[m] * u[i].coeffs[m] +
             (dt / 6.0) * (e.full[m] * k1[i].coeffs[m] +
                           2.0 * e.half[m] * (k2[i].coeffs[m] + k3[i].coeffs[m]) +
                           k4[i].coeffs[m]);
    });
    remove_mean(next);
    if (!next.finite()) throw NumericalBreakdown("non-finite velocity after step", s.t + dt);

    const double dissipated = detail::step_dissipation(e, u, a, b, c);
    return {s.t + dt, std::move(next), s.step_count + 1, s.dissipation_integral + dissipated};
  } catch (const NumericalBreakdown& ex) {
    throw NumericalBreakdown(ex.what(), s.t + dt);
  }
}

/// cfl * min(dx_i) / max(1e-12, max |u|), capped at `cap`.
inline double cfl_dt(const SolverState& s, double cfl, double cap = infinity) {
  const GridSpec& g = s.u_hat.grid;
  const VectorField u = inverse(s.u_hat);
  double umax = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double a = u[0].samples[p], b = u[1].samples[p], c = u[2].samples[p];
    umax = std::max(umax, std::sqrt(a * a + b * b + c * c));
  }
  const double dx = std::min({g.spacing(Axis::x1), g.spacing(Axis::x2), g.spacing(Axis::x3)});
  return std::min(cap, cfl * dx / std::max(1e-12, umax));
}

struct RunFailure {
  double t = 0.0;
  std::string message;
};

struct RunResult {
  std::vector<MonitorRecord> records;
  std::optional<RunFailure> failure;  ///< set on numerical breakdown
  SolverState final_state;
};

/// Called with every state that produces an output record.
using OutputObserver = std::function<void(const SolverState&, const MonitorRecord&)>;

/// Integrates from `initial` to config.t_end, emitting a record at every
/// multiple of output_interval and at t_end. The step is recomputed from the
/// CFL condition before every step and shortened to land on output times.
inline RunResult integrate(SolverState initial, const SolverConfig& config,
                           CriterionMonitor& monitor, const OutputObserver& observer = {}) {
  config.validate();
  RunResult result;
  SolverState state = std::move(initial);
  const double t0 = state.t;
  auto emit = [&](const SolverState& s) {
    MonitorRecord rec = monitor.observe(s.t, s.u_hat, s.dissipation_integral);
    // The report-only Gronwall columns may overflow; only state-derived values signal breakdown.
    bool finite = std::isfinite(rec.energy) && std::isfinite(rec.grad_l2) &&
                  std::isfinite(rec.grad_h_l2) && std::isfinite(rec.dissipation_integral);
    for (const auto& m : rec.entry_norms)
      for (const auto& line : m.value)
        for (double v : line) finite = finite && std::isfinite(v);
    if (!finite) throw NumericalBreakdown("non-finite diagnostics", s.t);
    if (observer) observer(s, rec);
    result.records.push_back(std::move(rec));
  };

  try {
    emit(state);
    for (long n = 1; state.t < config.t_end; ++n) {
      const double target = std::min(config.t_end, t0 + static_cast<double>(n) * config.output_interval);
      if (target <= state.t) continue;
      while (state.t < target) {
        const double remaining = target - state.t;
        const double dt_cfl = cfl_dt(state, config.cfl, config.dt_max);
        // Split what is left of the interval evenly so the output time is hit exactly.
        const double pieces = std::max(1.0, std::ceil(remaining / dt_cfl * (1.0 - 1e-12)));
        const double dt = pieces == 1.0 ? remaining : remaining / pieces;
        state = step(state, dt, config.nu);
        if (pieces == 1.0) state.t = target;
      }
      state.t = target;
      emit(state);
    }
  } catch (const NumericalBreakdown& ex) {
    result.failure = RunFailure{ex.time(), ex.what()};
  }
  result.final_state = std::move(state);
  return result;
}

/// Builds the initial velocity named by the configuration.
inline VectorField initial_velocity(const SolverConfig& config) {
  return std::visit(
      [&](const auto& ic) -> VectorField {
        using T = std::decay_t<decltype(ic)>;
        if constexpr (std::is_same_v<T, TaylorGreenInit>) {
          return taylor_green(config.grid);
        } else if constexpr (std::is_same_v<T, RandomSolenoidalInit>) {
          return random_solenoidal(config.grid, ic.params);
        } else {
          Snapshot snap = read_snapshot(ic.path);
          require(snap.velocity.grid.n1 == config.grid.n1 && snap.velocity.grid.n2 == config.grid.n2 &&
                      snap.velocity.grid.n3 == config.grid.n3 &&
                      snap.velocity.grid.length == config.grid.length,
                  "snapshot grid does not match the configured grid");
          return std::move(snap.velocity);
        }
      },
      config.initial_condition);
}

/// Integrates config from its initial condition with the given monitor.
inline RunResult run(const SolverConfig& config, CriterionMonitor& monitor,
                     const OutputObserver& observer = {}) {
  config.validate();
  return integrate(make_state(initial_velocity(config)), config, monitor, observer);
}

}  // namespace nsc
