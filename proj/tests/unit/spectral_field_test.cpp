#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "nsc/initial_conditions.hpp"
#include "nsc/norms.hpp"
#include "nsc/spectral.hpp"
#include "test_support.hpp"

using namespace nsc;
using nsc::test::max_abs_diff;
using std::numbers::pi;

namespace {

ScalarField band_limited(const GridSpec& g, std::uint64_t seed, int kmax = 4) {
  std::mt19937_64 rng(seed);
  return random_band_limited(g, {kmax, 1.0, 0.3}, rng);
}

double quadrature_l2_squared(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.samples) s += v * v;
  return s * f.grid.cell_volume();
}

}  // namespace

TEST_CASE("grid validation", "[grid]") {
  CHECK_THROWS_AS(GridSpec::cube(3), InvalidArgument);
  CHECK_THROWS_AS(GridSpec::cube(2), InvalidArgument);
  CHECK_THROWS_AS((GridSpec{8, 8, 7, 1.0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((GridSpec{8, 8, 8, 0.0}.validate()), InvalidArgument);
  const auto g = GridSpec::cube(16);
  CHECK(g.cell_volume() == Catch::Approx(std::pow(2 * pi, 3) / 4096.0));
}

TEST_CASE("forward transform of a constant", "[spectral]") {
  const auto g = GridSpec::cube(8);
  auto f = ScalarField::from_function(g, [](double, double, double) { return 2.5; });
  const auto s = forward(f);
  CHECK(s.coeff(0, 0, 0).real() == Catch::Approx(2.5).margin(1e-15));
  for (std::size_t i = 1; i < s.coeffs.size(); ++i) CHECK(std::abs(s.coeffs[i]) < 1e-15);
}

TEST_CASE("forward transform of a single sine mode", "[spectral]") {
  const double L = 3.0;
  const GridSpec g{16, 8, 8, L};
  auto f = ScalarField::from_function(g, [L](double x, double, double) { return std::sin(2 * pi * x / L); });
  const auto s = forward(f);
  CHECK(std::abs(s.coeff(1, 0, 0)) == Catch::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(s.coeff(-1, 0, 0)) == Catch::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(s.coeff(1, 0, 0) - std::conj(s.coeff(-1, 0, 0))) < 1e-15);
  CHECK(std::abs(s.coeff(1, 0, 0) - std::complex<double>(0.0, -0.5)) < 1e-15);
  double others = 0.0;
  for_each_mode(g, [&](std::size_t idx, int j1, int j2, int j3) {
    if (!(j1 == 1 && j2 == 0 && j3 == 0)) others = std::max(others, std::abs(s.coeffs[idx]));
  });
  CHECK(others < 1e-15);
}

TEST_CASE("round trip and Parseval on band-limited and unstructured fields", "[spectral]") {
  const GridSpec g{16, 12, 20, 2 * pi};
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const auto f = band_limited(g, seed, 4);
    const auto back = inverse(forward(f));
    CHECK(max_abs_diff(f, back) <= 1e-12 * nsc::test::max_abs(f));
    const double quad = quadrature_l2_squared(f);
    CHECK(nsc::test::rel(l2_norm_squared(forward(f)), quad) < 1e-12);

    std::mt19937_64 rng(seed);
    const auto w = nsc::test::white_noise(g, rng);
    CHECK(max_abs_diff(w, inverse(forward(w))) <= 1e-12 * nsc::test::max_abs(w));
    CHECK(nsc::test::rel(l2_norm_squared(forward(w)), quadrature_l2_squared(w)) < 1e-12);
  }
}

TEST_CASE("forward rejects non-finite samples", "[spectral]") {
  ScalarField f(GridSpec::cube(4));
  f(1, 2, 3) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(forward(f), InvalidArgument);
  f(1, 2, 3) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(forward(f), InvalidArgument);
}

TEST_CASE("spectral derivative", "[spectral]") {
  SECTION("single mode, L != 2 pi") {
    const double L = 5.0;
    const GridSpec g{16, 8, 8, L};
    const double w = 2 * pi / L;
    auto f = ScalarField::from_function(g, [w](double x, double, double) { return std::sin(w * x); });
    auto expect = ScalarField::from_function(g, [w](double x, double, double) { return w * std::cos(w * x); });
    CHECK(max_abs_diff(inverse(derivative(forward(f), Axis::x1)), expect) < 1e-12);
  }
  SECTION("x3-independent field has zero x3 derivative") {
    const auto g = GridSpec::cube(16);
    auto f = ScalarField::from_function(g, [](double x, double y, double) { return std::cos(2 * x) * std::sin(y); });
    CHECK(nsc::test::max_abs(inverse(derivative(forward(f), Axis::x3))) < 1e-14);
  }
  SECTION("constant has zero derivative") {
    const auto g = GridSpec::cube(8);
    auto f = ScalarField::from_function(g, [](double, double, double) { return 7.0; });
    for (int a = 0; a < 3; ++a) CHECK(nsc::test::max_abs(inverse(derivative(forward(f), Axis(a)))) == 0.0);
  }
  SECTION("mixed derivatives commute") {
    const auto g = GridSpec::cube(16);
    const auto s = forward(band_limited(g, 11));
    const auto d12 = derivative(derivative(s, Axis::x1), Axis::x2);
    const auto d21 = derivative(derivative(s, Axis::x2), Axis::x1);
    CHECK(max_abs_diff(inverse(d12), inverse(d21)) < 1e-12);
  }
}

TEST_CASE("Leray projection", "[spectral]") {
  const auto g = GridSpec::cube(16);
  SECTION("Taylor-Green is left unchanged") {
    const auto tg = forward(taylor_green(g));
    CHECK(max_abs_diff(leray_project(tg), tg) < 1e-13);
  }
  SECTION("gradients are annihilated") {
    const auto phi = forward(band_limited(g, 21));
    const auto projected = leray_project(gradient(phi));
    CHECK(std::sqrt(l2_norm_squared(projected)) < 1e-12);
  }
  SECTION("random fields: divergence-free, idempotent, Hermitian") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      std::mt19937_64 rng(seed);
      const auto v = forward(nsc::test::white_noise_vector(g, rng));
      const auto p = leray_project(v);
      CHECK(std::sqrt(l2_norm_squared(divergence(p))) < 1e-12);
      CHECK(max_abs_diff(leray_project(p), p) < 1e-13);
      CHECK(hermitian_defect(p) < 1e-15);
      CHECK(hermitian_defect(derivative(v[0], Axis::x2)) < 1e-15);
    }
  }
}

TEST_CASE("2/3 dealiasing", "[spectral]") {
  const auto g = GridSpec::cube(16);
  SECTION("k = (1,0,0) survives") {
    SpectralScalarField s(g);
    s.set_mode(1, 0, 0, {0.5, -0.25});
    CHECK(max_abs_diff(dealias(s), s) == 0.0);
  }
  SECTION("k = (7,0,0) is removed on n = 16") {
    auto f = ScalarField::from_function(g, [](double x, double, double) { return std::cos(7 * x) + std::sin(5 * x); });
    const auto d = dealias(forward(f));
    CHECK(std::abs(d.coeff(7, 0, 0)) == 0.0);
    CHECK(std::abs(d.coeff(5, 0, 0)) == Catch::Approx(0.5).epsilon(1e-14));
  }
  SECTION("idempotent and Hermitian") {
    std::mt19937_64 rng(4);
    const auto s = forward(nsc::test::white_noise(g, rng));
    const auto once = dealias(s);
    CHECK(max_abs_diff(dealias(once), once) == 0.0);
    CHECK(hermitian_defect(once) < 1e-15);
  }
}

TEST_CASE("Taylor-Green golden values", "[initial]") {
  const auto g = GridSpec::cube(32);
  const auto u = taylor_green(g);
  const auto u_hat = forward(u);
  CHECK(nsc::test::rel(l2_norm_squared(u_hat), 2 * std::pow(pi, 3)) < 1e-10);
  const auto n = grad_norms(u_hat, std::vector<double>{});
  CHECK(nsc::test::rel(n.grad_l2 * n.grad_l2, 6 * std::pow(pi, 3)) < 1e-10);
  CHECK(std::sqrt(l2_norm_squared(divergence(u_hat))) < 1e-13);
  for (int k = 0; k < 3; ++k) CHECK(nsc::test::max_abs(inverse(derivative(u_hat[2], Axis(k)))) == 0.0);
}

TEST_CASE("random solenoidal initial data", "[initial]") {
  const auto g = GridSpec::cube(16);
  RandomSolenoidalParams p;
  p.seed = 99;
  p.k_peak = 3;
  const auto a = random_solenoidal(g, p);
  const auto b = random_solenoidal(g, p);
  for (int i = 0; i < 3; ++i) CHECK(a[i].samples == b[i].samples);

  const auto a_hat = forward(a);
  CHECK(std::sqrt(l2_norm_squared(divergence(a_hat))) < 1e-12);
  CHECK(std::abs(a_hat[0].coeffs[0]) < 1e-15);

  p.amplitude = 3.0;
  const auto c = random_solenoidal(g, p);
  CHECK(nsc::test::rel(lp_norm(c, 2.0).value * lp_norm(c, 2.0).value,
                       9.0 * lp_norm(a, 2.0).value * lp_norm(a, 2.0).value) < 1e-12);

  p.seed = 100;
  const auto d = random_solenoidal(g, RandomSolenoidalParams{-5.0 / 3.0, 3.0, 1.0, 100});
  CHECK(d[0].samples != a[0].samples);

  CHECK_THROWS_AS(random_solenoidal(g, RandomSolenoidalParams{-5.0 / 3.0, 6.0, 1.0, 1}), InvalidArgument);
}

TEST_CASE("band-limited family is grid independent", "[initial]") {
  std::mt19937_64 r1(5), r2(5);
  const auto coarse = random_band_limited(GridSpec::cube(16), {4, 1.0, 0.0}, r1);
  const auto fine = random_band_limited(GridSpec::cube(32), {4, 1.0, 0.0}, r2);
  double worst = 0.0;
  for (int i3 = 0; i3 < 16; ++i3)
    for (int i2 = 0; i2 < 16; ++i2)
      for (int i1 = 0; i1 < 16; ++i1)
        worst = std::max(worst, std::abs(coarse(i1, i2, i3) - fine(2 * i1, 2 * i2, 2 * i3)));
  CHECK(worst < 1e-13);
}
