#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "nsc/solver.hpp"
#include "test_support.hpp"

using namespace nsc;
using nsc::test::rel;
using std::numbers::pi;

namespace {

/// u = (sin(x2 + 2 x3), 0, 0): divergence-free with (u . grad) u = 0, |k|^2 = 5.
VectorField shear_mode(const GridSpec& g) {
  auto u1 = ScalarField::from_function(g, [](double, double y, double z) { return std::sin(y + 2 * z); });
  return VectorField(std::move(u1), ScalarField(g), ScalarField(g));
}

double energy_residual_after(const GridSpec& g, double nu, double t_end, int steps) {
  SolverState s = make_state(taylor_green(g));
  const double e0 = l2_norm_squared(s.u_hat);
  for (int i = 0; i < steps; ++i) s = step(s, t_end / steps, nu);
  return l2_norm_squared(s.u_hat) + s.dissipation_integral - e0;
}

}  // namespace

TEST_CASE("nonlinear term", "[solver]") {
  const auto g = GridSpec::cube(16);
  SECTION("zero velocity") {
    const auto n = nonlinear_term(SpectralVectorField(g));
    CHECK(l2_norm_squared(n) == 0.0);
  }
  SECTION("2D flow stays x3-independent") {
    auto u1 = ScalarField::from_function(g, [](double x, double y, double) { return std::sin(x) * std::cos(2 * y) + 0.3 * std::cos(y); });
    auto u2 = ScalarField::from_function(g, [](double x, double y, double) { return -2 * std::cos(x) * std::sin(2 * y); });
    const auto u_hat = make_state(VectorField(std::move(u1), std::move(u2), ScalarField(g))).u_hat;
    const auto n = nonlinear_term(u_hat);
    double off_plane = 0.0;
    for (int i = 0; i < 3; ++i)
      for_each_mode(g, [&](std::size_t idx, int, int, int j3) {
        if (j3 != 0) off_plane = std::max(off_plane, std::abs(n[i].coeffs[idx]));
      });
    CHECK(off_plane < 1e-15);
    CHECK(l2_norm_squared(n[2]) < 1e-28);
    CHECK(l2_norm_squared(n) > 1e-3);
  }
  SECTION("energy neutrality") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto u_hat = make_state(random_solenoidal(g, {-5.0 / 3.0, 2.0, 1.0, seed})).u_hat;
      const auto n = nonlinear_term(u_hat);
      CHECK(std::abs(inner_product(u_hat, n)) < 1e-11);
      CHECK(std::sqrt(l2_norm_squared(divergence(n))) < 1e-12);
    }
    const auto tg = make_state(taylor_green(g)).u_hat;
    CHECK(std::abs(inner_product(tg, nonlinear_term(tg))) < 1e-11);
  }
  SECTION("single shear mode has no advection") {
    const auto n = nonlinear_term(make_state(shear_mode(g)).u_hat);
    CHECK(std::sqrt(l2_norm_squared(n)) < 1e-14);
  }
}

TEST_CASE("step", "[solver]") {
  const auto g = GridSpec::cube(16);
  SECTION("zero field stays zero") {
    SolverState s = make_state(VectorField(g));
    s = step(s, 0.1, 1.0);
    CHECK(l2_norm_squared(s.u_hat) == 0.0);
    CHECK(s.t == 0.1);
    CHECK(s.step_count == 1);
  }
  SECTION("Stokes decay of a single mode") {
    const double nu = 1.0, dt = 1e-3;
    SolverState s = make_state(shear_mode(g));
    for (int i = 0; i < 100; ++i) s = step(s, dt, nu);
    auto expect = ScalarField::from_function(g, [&](double, double y, double z) {
      return std::sin(y + 2 * z) * std::exp(-nu * 5.0 * s.t);
    });
    const auto u = inverse(s.u_hat);
    CHECK(nsc::test::max_abs_diff(u[0], expect) < 1e-10);
    CHECK(nsc::test::max_abs(u[1]) < 1e-10);
    CHECK(s.t == Catch::Approx(0.1).epsilon(1e-14));
    const double e0 = 4 * pi * pi * pi;  // ||sin(x2 + 2 x3)||^2 = (2 pi)^3 / 2
    CHECK(rel(s.dissipation_integral, e0 * (1 - std::exp(-2 * nu * 5.0 * s.t))) < 1e-12);
  }
  SECTION("dissipation of a single mode is exact for stiff steps") {
    SolverState s = make_state(shear_mode(g));
    const double e0 = l2_norm_squared(s.u_hat);
    for (int i = 0; i < 4; ++i) s = step(s, 0.5, 3.0);
    CHECK(std::abs(l2_norm_squared(s.u_hat) + s.dissipation_integral - e0) < 1e-12 * e0);
  }
  SECTION("fourth-order solution defect") {
    auto after = [&](int steps) {
      SolverState s = make_state(taylor_green(g));
      for (int i = 0; i < steps; ++i) s = step(s, 0.5 / steps, 0.1);
      return inverse(s.u_hat);
    };
    const auto ref = after(160);
    auto defect = [&](int steps) {
      const auto u = after(steps);
      double m = 0.0;
      for (int i = 0; i < 3; ++i) m = std::max(m, nsc::test::max_abs_diff(u[i], ref[i]));
      return m;
    };
    const double d1 = defect(5), d2 = defect(10);
    INFO("defects " << d1 << " " << d2);
    CHECK(d1 / d2 > 12.0);
  }
  SECTION("fourth-order energy budget") {
    const double r1 = energy_residual_after(g, 0.1, 0.5, 5);
    const double r2 = energy_residual_after(g, 0.1, 0.5, 10);
    INFO("residuals " << r1 << " " << r2);
    CHECK(std::abs(r1 / r2) > 12.0);
  }
  SECTION("divergence-free and zero-mean after steps") {
    SolverState s = make_state(random_solenoidal(g, {-5.0 / 3.0, 2.0, 1.0, 4}));
    for (int i = 0; i < 5; ++i) {
      s = step(s, 0.02, 0.05);
      CHECK(std::sqrt(l2_norm_squared(divergence(s.u_hat))) < 1e-11);
      for (int c = 0; c < 3; ++c) CHECK(s.u_hat[c].coeffs[0] == Complex(0.0, 0.0));
      CHECK(hermitian_defect(s.u_hat) < 1e-14);
    }
  }
  SECTION("energy decays at the rate 2 nu ||grad u||^2 initially") {
    const double nu = 0.1, dt = 1e-3;
    SolverState s0 = make_state(taylor_green(GridSpec::cube(32)));
    const double e0 = l2_norm_squared(s0.u_hat);
    const auto s1 = step(s0, dt, nu);
    const double slope = (l2_norm_squared(s1.u_hat) - e0) / dt;
    CHECK(rel(slope, -2 * nu * 6 * std::pow(pi, 3)) < 0.01);
  }
  SECTION("invalid arguments") {
    SolverState s = make_state(taylor_green(g));
    CHECK_THROWS_AS(step(s, 0.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(step(s, 0.1, 0.0), InvalidArgument);
  }
}

TEST_CASE("cfl_dt", "[solver]") {
  const auto g = GridSpec::cube(32);
  CHECK(cfl_dt(make_state(VectorField(g)), 0.5, 0.25) == 0.25);
  const auto tg = make_state(taylor_green(g));
  CHECK(rel(cfl_dt(tg, 0.5), 0.5 * 2 * pi / 32) < 1e-12);
  CHECK(rel(cfl_dt(tg, 0.5), 0.0982) < 1e-3);
  const auto fast = make_state(2.0 * taylor_green(g));
  CHECK(rel(cfl_dt(fast, 0.5), 0.5 * cfl_dt(tg, 0.5)) < 1e-12);
}

TEST_CASE("run", "[solver]") {
  SolverConfig cfg;
  cfg.grid = GridSpec::cube(32);
  SECTION("t_end = 0 gives a single record") {
    cfg.t_end = 0.0;
    CriterionMonitor m({});
    const auto res = run(cfg, m);
    REQUIRE(res.records.size() == 1);
    CHECK(res.records[0].t == 0.0);
    CHECK_FALSE(res.failure);
  }
  SECTION("Taylor-Green, nu = 1: decaying energy and the energy inequality") {
    cfg.nu = 1.0;
    cfg.t_end = 1.0;
    cfg.output_interval = 0.1;
    CriterionMonitor m({});
    const auto res = run(cfg, m);
    REQUIRE(res.records.size() == 11);
    const double e0 = res.records[0].energy;
    for (std::size_t i = 1; i < res.records.size(); ++i) {
      const auto& r = res.records[i];
      CHECK(r.t == Catch::Approx(0.1 * double(i)).margin(1e-15));
      CHECK(r.energy < res.records[i - 1].energy);
      CHECK(r.energy + 0.5 * r.dissipation_integral <= e0 * (1 + 1e-6));
      CHECK(std::abs(r.energy_residual) < 1e-6 * e0);
    }
    CHECK(res.records.back().t == 1.0);
  }
  SECTION("deterministic") {
    cfg.grid = GridSpec::cube(16);
    cfg.t_end = 0.3;
    cfg.initial_condition = RandomSolenoidalInit{{-5.0 / 3.0, 2.0, 1.0, 8}};
    CriterionMonitor a({parse_criterion("31:9:6")}), b({parse_criterion("31:9:6")});
    const auto ra = run(cfg, a), rb = run(cfg, b);
    REQUIRE(ra.records.size() == rb.records.size());
    for (std::size_t i = 0; i < ra.records.size(); ++i) CHECK(a.row(ra.records[i]) == b.row(rb.records[i]));
  }
  SECTION("overflowing data reports a numerical breakdown") {
    cfg.grid = GridSpec::cube(16);
    cfg.t_end = 0.5;
    CriterionMonitor m({});
    const auto res = integrate(make_state(1e160 * taylor_green(cfg.grid)), cfg, m);
    REQUIRE(res.failure.has_value());
    CHECK(res.records.empty());
  }
  SECTION("invalid configuration") {
    cfg.nu = 0.0;
    CriterionMonitor m({});
    CHECK_THROWS_AS(run(cfg, m), InvalidArgument);
  }
}
