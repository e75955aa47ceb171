#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "nsc/initial_conditions.hpp"
#include "nsc/norms.hpp"
#include "test_support.hpp"

using namespace nsc;
using nsc::test::rel;
using std::numbers::pi;

namespace {
ScalarField band_limited(const GridSpec& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_band_limited(g, {4, 1.0, 0.2}, rng);
}
}  // namespace

TEST_CASE("lp_norm basic values", "[norms]") {
  const auto g = GridSpec::cube(16);
  const double V = std::pow(2 * pi, 3);
  SECTION("zero field") {
    ScalarField z(g);
    for (double p : {1.0, 2.0, 3.5, infinity}) CHECK(lp_norm(z, p).value == 0.0);
  }
  SECTION("constant field") {
    const double c = -1.75;
    auto f = ScalarField::from_function(g, [c](double, double, double) { return c; });
    for (double p : {1.0, 2.0, 3.5, 8.0}) CHECK(rel(lp_norm(f, p), std::abs(c) * std::pow(V, 1.0 / p)) < 1e-13);
    CHECK(lp_norm(f, infinity).value == std::abs(c));
  }
  SECTION("sin x1 in L2") {
    auto f = ScalarField::from_function(g, [](double x, double, double) { return std::sin(x); });
    CHECK(rel(lp_norm(f, 2.0), 2 * std::pow(pi, 1.5)) < 1e-13);
  }
  SECTION("p < 1 is rejected") {
    CHECK_THROWS_AS(lp_norm(ScalarField(g), 0.5), InvalidArgument);
  }
}

TEST_CASE("lp_norm is absolutely homogeneous", "[norms][property]") {
  const auto g = GridSpec::cube(16);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> scale(-50.0, 50.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = band_limited(g, 100 + trial);
    const double c = scale(rng);
    const auto cf = c * f;
    for (double p : {1.0, 2.0, 2.5, 4.0, 7.3, infinity})
      CHECK(rel(lp_norm(cf, p), std::abs(c) * lp_norm(f, p)) < 1e-13);
  }
}

TEST_CASE("Lp monotonicity on the finite box", "[norms][property]") {
  const auto g = GridSpec::cube(16);
  const double V = g.volume();
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = nsc::test::white_noise(g, rng);
    const double ps[] = {1.0, 1.5, 2.0, 3.0, 6.0, 11.0};
    for (double p : ps)
      for (double q : ps) {
        if (p > q) continue;
        CHECK(lp_norm(f, p).value <= std::pow(V, 1.0 / p - 1.0 / q) * lp_norm(f, q).value * (1 + 1e-10));
      }
  }
}

TEST_CASE("L2 agrees with the spectral sum", "[norms]") {
  const auto g = GridSpec::cube(16);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto f = band_limited(g, seed);
    CHECK(rel(lp_norm(f, 2.0), std::sqrt(l2_norm_squared(forward(f)))) < 1e-12);
  }
}

TEST_CASE("rectangle rule converges spectrally for non-even p", "[norms]") {
  // ||exp(sin x1)||_3 on [0, 2 pi]^3 = ((2 pi)^3 I0(3))^(1/3).
  const double exact = std::cbrt(std::pow(2 * pi, 3) * std::cyl_bessel_i(0.0, 3.0));
  double prev_err = infinity;
  for (int n : {4, 8, 16, 32}) {
    const GridSpec g{n, 4, 4, 2 * pi};
    auto f = ScalarField::from_function(g, [](double x, double, double) { return std::exp(std::sin(x)); });
    const double err = std::abs(lp_norm(f, 3.0).value - exact) / exact;
    CHECK((err < prev_err || err < 1e-14));
    prev_err = err;
  }
  CHECK(prev_err < 1e-13);
}

TEST_CASE("sampled sup underestimates the true maximum", "[norms]") {
  const GridSpec g{10, 4, 4, 2 * pi};
  // Peak of sin(x + 0.1) lies between samples.
  auto f = ScalarField::from_function(g, [](double x, double, double) { return std::sin(x + 0.1); });
  const double sup = lp_norm(f, infinity);
  CHECK(sup < 1.0);
  CHECK(sup > 0.95);
}

TEST_CASE("h1_norm", "[norms]") {
  const auto g = GridSpec::cube(16);
  const double c = 2.0;
  auto k = ScalarField::from_function(g, [c](double, double, double) { return c; });
  CHECK(rel(h1_norm(k), c * std::pow(2 * pi, 1.5)) < 1e-13);
  auto s = ScalarField::from_function(g, [](double x, double, double) { return std::sin(x); });
  CHECK(rel(h1_norm(s), std::sqrt(8 * std::pow(pi, 3))) < 1e-13);
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    const auto f = band_limited(g, seed);
    CHECK(h1_norm(f).value >= lp_norm(f, 2.0).value);
  }
}

TEST_CASE("sup_axis_lr_norm", "[norms]") {
  const auto g = GridSpec::cube(16);
  SECTION("axis-independent field reduces to a 2D norm") {
    auto f = ScalarField::from_function(g, [](double, double y, double z) { return std::sin(y) + 0.5 * std::cos(2 * z); });
    double sum = 0.0;
    for (int i3 = 0; i3 < g.n3; ++i3)
      for (int i2 = 0; i2 < g.n2; ++i2) sum += std::pow(std::abs(f(0, i2, i3)), 3.0);
    const double expect = std::cbrt(sum * g.spacing(Axis::x2) * g.spacing(Axis::x3));
    CHECK(rel(sup_axis_lr_norm(f, Axis::x1, 3.0), expect) < 1e-13);
  }
  SECTION("zero field") { CHECK(sup_axis_lr_norm(ScalarField(g), Axis::x2, 2.5).value == 0.0); }
  SECTION("cos x1 cos x2 collapsed along x1") {
    auto f = ScalarField::from_function(g, [](double x, double y, double) { return std::cos(x) * std::cos(y); });
    CHECK(rel(sup_axis_lr_norm(f, Axis::x1, 2.0), std::sqrt(pi * 2 * pi)) < 1e-13);
  }
  SECTION("bounds the slice norm from above") {
    const auto f = band_limited(g, 17);
    for (int axis = 0; axis < 3; ++axis) {
      const double sup_norm = sup_axis_lr_norm(f, Axis(axis), 2.5);
      for (int slice : {0, 5, 11}) {
        double sum = 0.0;
        for (int b = 0; b < 16; ++b)
          for (int c = 0; c < 16; ++c) {
            int idx[3];
            idx[axis] = slice;
            idx[(axis + 1) % 3] = b;
            idx[(axis + 2) % 3] = c;
            sum += std::pow(std::abs(f(idx[0], idx[1], idx[2])), 2.5);
          }
        const double slice_norm = std::pow(sum * g.spacing(Axis::x1) * g.spacing(Axis::x1), 1 / 2.5);
        CHECK(slice_norm <= sup_norm * (1 + 1e-14));
      }
    }
  }
  SECTION("invalid r") { CHECK_THROWS_AS(sup_axis_lr_norm(ScalarField(g), Axis::x1, infinity), InvalidArgument); }
}

TEST_CASE("grad_norms on Taylor-Green", "[norms]") {
  const auto g = GridSpec::cube(16);
  const auto u_hat = forward(taylor_green(g));
  const std::vector<double> alphas{2.0, 9.0};
  const auto n = grad_norms(u_hat, alphas);
  const double pi3 = std::pow(pi, 3);
  CHECK(rel(n.grad_l2 * n.grad_l2, 6 * pi3) < 1e-12);
  CHECK(rel(n.grad_h_l2 * n.grad_h_l2, 4 * pi3) < 1e-12);
  CHECK(rel(n.laplacian_l2 * n.laplacian_l2, 18 * pi3) < 1e-12);

  // Brute force: quadrature of every second derivative d_h d_j u_i, h in {1, 2}.
  double hgrad = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int h = 0; h < 2; ++h)
      for (int j = 0; j < 3; ++j) {
        const auto d = inverse(derivative(derivative(u_hat[i], Axis(h)), Axis(j)));
        hgrad += std::pow(lp_norm(d, 2.0).value, 2);
      }
  CHECK(rel(n.grad_h_grad_l2 * n.grad_h_grad_l2, hgrad) < 1e-12);
  CHECK(rel(n.grad_h_grad_l2 * n.grad_h_grad_l2, 12 * pi3) < 1e-12);

  REQUIRE(n.entries.size() == 2);
  CHECK(rel(n.entries[0].value[0][1], std::pow(pi, 1.5)) < 1e-12);
  for (int k = 0; k < 3; ++k) CHECK(n.entries[1].value[2][std::size_t(k)] == 0.0);

  const auto zero = grad_norms(SpectralVectorField(g), alphas);
  CHECK(zero.grad_l2 == 0.0);
  CHECK(zero.grad_h_l2 == 0.0);
  CHECK(zero.laplacian_l2 == 0.0);
  CHECK(zero.entries[1].value[0][0] == 0.0);
}
