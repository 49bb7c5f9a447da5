#include "isolab/layer_geometry.hpp"

#include <doctest.h>

#include <cmath>

#include "isolab/sphere_quadrature.hpp"
#include "oracles.hpp"

using namespace isolab;
using oracle::pi;

TEST_SUITE("layer_geometry") {
  TEST_CASE("cap angle") {
    const CapAngle c = cap_geometry(10.0, 10.0);
    CHECK(c.cos_gamma == doctest::Approx(0.995).epsilon(1e-15));
    CHECK(c.one_minus_cos == doctest::Approx(0.005).epsilon(1e-14));
    CHECK(c.gamma == doctest::Approx(std::acos(0.995)).epsilon(1e-12));
    CHECK(cap_geometry(11.0 - 1e-15, 10.0).gamma < 1e-6);
    CHECK(cap_geometry(9.0 + 1e-15, 10.0).gamma < 1e-6);
    CHECK_THROWS_AS(cap_geometry(12.0, 10.0), std::domain_error);
    CHECK_THROWS_AS(cap_geometry(5.0, 0.5), std::domain_error);
  }

  TEST_CASE("sin power integrals against Simpson") {
    for (int m = 0; m <= 6; ++m) {
      for (double g : {1e-3, 0.2, 1.0, 2.5, pi}) {
        CapAngle c;
        c.gamma = g;
        c.cos_gamma = std::cos(g);
        c.sin_gamma = std::sin(g);
        c.one_minus_cos = 1.0 - std::cos(g);
        const double ref = oracle::simpson([m](double u) { return std::pow(std::sin(u), m); }, 0.0, g, 4000);
        CHECK(sin_power_integral(m, c) == doctest::Approx(ref).epsilon(1e-11));
      }
    }
  }

  TEST_CASE("cap areas") {
    for (int n = 2; n <= 6; ++n)
      CHECK(cap_area(n, 2.0, pi) ==
            doctest::Approx(n * oracle::ball_volume(n) * std::pow(2.0, n - 1)).epsilon(1e-13));
    for (double g : {0.1, 1.0, 2.0})
      CHECK(cap_area(3, 1.5, g) == doctest::Approx(2 * pi * 2.25 * (1 - std::cos(g))));
    CHECK(cap_area(2, 3.0, 0.4) == doctest::Approx(2.0 * 3.0 * 0.4));
    CHECK(cap_area(4, 1.0, 0.0) == 0.0);
    CHECK_THROWS(cap_area(3, 1.0, 4.0));
  }

  TEST_CASE("asymptotic kernels") {
    const LayerKernelPair k = asymptotic_kernels(3);
    for (double t : {-0.9, 0.0, 0.3}) {
      CHECK(k.phi(t) == doctest::Approx(2 * pi));
      CHECK(k.psi(t) == doctest::Approx(pi * (1 - t * t)));
    }
    for (int n = 2; n <= 6; ++n) {
      const LayerKernelPair a = asymptotic_kernels(n);
      CHECK(integrate_phi(a) == doctest::Approx(n * oracle::ball_volume(n)).epsilon(1e-12));
      CHECK(integrate_psi(a) == doctest::Approx(oracle::ball_volume(n)).epsilon(1e-12));
    }
  }

  TEST_CASE("exact kernels in three dimensions") {
    const LayerKernelPair k = exact_kernels(3, 10.0);
    CHECK(k.psi(0.5) == doctest::Approx(1.05 * pi * 0.75).epsilon(1e-13));
    for (double R : {5.0, 37.0, 1e4})
      CHECK(exact_kernels(3, R).psi(0.0) == doctest::Approx(pi).epsilon(1e-13));
    const LayerKernelPair a = asymptotic_kernels(3);
    for (double t : {-0.99, -0.3, 0.4, 0.97}) {
      CHECK(k.phi(t) == doctest::Approx((10 + t) / 10 * a.phi(t)).epsilon(1e-13));
      CHECK(k.psi(t) == doctest::Approx((10 + t) / 10 * a.psi(t)).epsilon(1e-13));
    }
  }

  TEST_CASE("exact kernels integrate to the ball's measures") {
    for (int n = 2; n <= 5; ++n)
      for (double R : {1.5, 4.0, 100.0}) {
        const LayerKernelPair k = exact_kernels(n, R);
        CHECK(integrate_phi(k) == doctest::Approx(n * oracle::ball_volume(n)).epsilon(1e-11));
        CHECK(integrate_psi(k) == doctest::Approx(oracle::ball_volume(n)).epsilon(1e-11));
      }
  }

  TEST_CASE("exact kernels against Monte-Carlo") {
    unsigned long long seed = 11;
    for (int n : {2, 3, 4})
      for (double R : {5.0, 20.0}) {
        const LayerKernelPair k = exact_kernels(n, R);
        for (double t : {-0.6, 0.0, 0.5}) {
          const oracle::Estimate ps = oracle::mc_psi(n, R, t, 400000, seed++);
          CHECK(std::abs(k.psi(t) - ps.mean) <= 4.0 * ps.se);
          const oracle::Estimate ph = oracle::mc_phi(n, R, t, 0.005, 400000, seed++);
          // shell width bias is O(h^2)
          CHECK(std::abs(k.phi(t) - ph.mean) <= 4.0 * ph.se + 1e-3 * k.phi(t));
        }
      }
  }

  TEST_CASE("kernel deviation shrinks like 1/R") {
    const std::vector<double> grid = t_grid(1001);
    for (int n : {2, 3, 4}) {
      double prev = 1e300;
      for (double R : {10.0, 20.0, 100.0, 1000.0}) {
        const KernelDeviation d = kernel_deviation(n, R, grid);
        const double m = std::max(d.phi, d.psi);
        CHECK(m < prev);
        CHECK(m <= 2.0 / R);
        prev = m;
      }
    }
    const KernelDeviation d3 = kernel_deviation(3, 10.0, grid);
    CHECK(d3.psi == doctest::Approx((1.0 - 1e-6) / 10.0).epsilon(1e-9));
    CHECK(d3.phi == doctest::Approx(d3.psi).epsilon(1e-9));
    const double half = kernel_deviation(3, 20.0, grid).psi / d3.psi;
    CHECK(half == doctest::Approx(0.5).epsilon(0.1));
    CHECK_THROWS(kernel_deviation(3, 10.0, {1.0 - 1e-8}));
  }

  TEST_CASE("argument checks") {
    CHECK_THROWS(exact_kernels(1, 5.0));
    CHECK_THROWS(exact_kernels(3, 1.0));
    CHECK_THROWS(asymptotic_kernels(1));
    CHECK_THROWS(t_grid(1));
  }
}
