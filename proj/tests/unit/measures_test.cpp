#include "isolab/measures.hpp"

#include <doctest.h>

#include <cmath>

#include "isolab/layer_geometry.hpp"
#include "isolab/monte_carlo.hpp"
#include "oracles.hpp"

using namespace isolab;
using oracle::pi;

using oracle::in_cylinder;
using oracle::in_disk;
using oracle::in_rotation;
using oracle::mc_area;

TEST_SUITE("measures") {
  TEST_CASE("Euclidean plain balls") {
    const Density one2 = make_constant(2, 1.0), one3 = make_constant(3, 1.0);
    SetMeasures m = set_measures(make_plain_ball(Vec::unit(2, 0), 3.0), one2, Method::quadrature);
    CHECK(m.perimeter.value == doctest::Approx(2 * pi).epsilon(1e-14));
    CHECK(m.volume.value == doctest::Approx(pi).epsilon(1e-14));
    m = set_measures(make_plain_ball(Vec::unit(3, 2), 7.0), one3, Method::quadrature);
    CHECK(m.perimeter.value == doctest::Approx(4 * pi).epsilon(1e-14));
    CHECK(m.volume.value == doctest::Approx(4 * pi / 3).epsilon(1e-14));
    const Density half = make_constant(3, 0.5);
    m = set_measures(make_plain_ball(Vec::unit(3, 0), 2.0), half, Method::quadrature);
    CHECK(mean_density(m.perimeter.value, m.volume.value, 3) == doctest::Approx(0.5).epsilon(1e-13));
  }

  TEST_CASE("rotation sweep in the plane, f = 1") {
    const CompetitorSet e = make_rotation_swept(Vec::unit(2, 0), 10.0, 0.01, Vec::unit(2, 1));
    const SetMeasures m = set_measures(e, make_constant(2, 1.0), Method::quadrature);
    CHECK(m.volume_excess == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(m.volume.value - pi == doctest::Approx(0.2).epsilon(1e-12));
    // two semicircles and the two arcs of radii R - 1, R + 1
    CHECK(m.perimeter.value == doctest::Approx(2 * pi + 2 * 10.0 * 0.01).epsilon(1e-13));
    const oracle::Estimate a = mc_area([](double x, double y) { return in_rotation(x, y, 10.0, 0.01); },
                                       [](double, double) { return 1.0; }, 8.9, 11.1, -1.05, 1.15, 400000, 5);
    CHECK(std::abs(a.mean - m.volume.value) <= 4 * a.se);
  }

  TEST_CASE("cylinder extension in the plane, f = 1") {
    const double R = 100, d = 0.01, rho = (R - d) / R;
    const CompetitorSet e = make_cylinder_extended(Vec::unit(2, 0), R, d);
    const SetMeasures m = set_measures(e, make_constant(2, 1.0), Method::quadrature);
    CHECK(m.volume.value == doctest::Approx(pi / 2 + 2 * d + pi / 2 * rho * rho).epsilon(1e-14));
    CHECK(m.volume.value - pi ==
          doctest::Approx(2 * d - pi / 2 * (2 * d / R - d * d / (R * R))).epsilon(1e-10));
    CHECK(m.perimeter.value == doctest::Approx(pi + 2 * d + pi * rho + 2 * (1 - rho)).epsilon(1e-14));
    CHECK(m.volume_excess == doctest::Approx(2 * d - pi / 2 * (1 - rho * rho)).epsilon(1e-12));
  }

  TEST_CASE("weighted planar measures against an independent sampler") {
    const Density d = make_radial_exp(2, 1.0, 1.0);
    auto f = [](double x, double y) { return 1.0 - std::exp(-std::hypot(x, y)); };
    const double R = 3.0, delta = 0.3;
    SetMeasures q = set_measures(make_cylinder_extended(Vec::unit(2, 0), R, delta), d, Method::quadrature);
    oracle::Estimate a = mc_area([&](double x, double y) { return in_cylinder(x, y, R, delta); }, f,
                                 R - delta - 1, R + 1, -1, 1, 1000000, 17);
    CHECK(std::abs(a.mean - q.volume.value) <= 4 * a.se);
    q = set_measures(make_rotation_swept(Vec::unit(2, 0), R, delta, Vec::unit(2, 1)), d, Method::quadrature);
    a = mc_area([&](double x, double y) { return in_rotation(x, y, R, delta); }, f, -2, R + 1.01, -1.01,
                R + 1, 1000000, 18);
    CHECK(std::abs(a.mean - q.volume.value) <= 4 * a.se);
  }

  TEST_CASE("membership") {
    const CompetitorSet c = make_cylinder_extended(Vec::unit(2, 0), 5.0, 1.0);
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int i = 0; i < 20000; ++i) {
      Vec x(2);
      x[0] = 4.5 + 1.2 * u(gen);
      x[1] = u(gen);
      CHECK(contains(c, x) == in_cylinder(x[0], x[1], 5.0, 1.0));
    }
    const CompetitorSet r = make_rotation_swept(Vec::unit(2, 0), 4.0, 0.6, Vec::unit(2, 1));
    for (int i = 0; i < 20000; ++i) {
      Vec x(2);
      x[0] = 3.5 + 1.5 * u(gen);
      x[1] = 1.0 + 1.7 * u(gen);
      CHECK(contains(r, x) == in_rotation(x[0], x[1], 4.0, 0.6));
    }
    CompetitorSet b = make_plain_ball(Vec::unit(3, 1), 2.0);
    b.scale = 2.0;
    CHECK(contains(b, 4.0 * Vec::unit(3, 1)));
    CHECK_FALSE(contains(b, 1.5 * Vec::unit(3, 1)));
  }

  TEST_CASE("excess volumes in higher dimension match the pieces") {
    for (int n : {3, 4}) {
      const Density one = make_constant(n, 1.0);
      const CompetitorSet c = make_cylinder_extended(Vec::unit(n, 0), 6.0, 0.4);
      const CompetitorSet r = make_rotation_swept(Vec::unit(n, 0), 6.0, 0.05, Vec::unit(n, 1));
      for (const CompetitorSet& e : {c, r}) {
        double v = 0, p = 0;
        for (const Piece& pc : set_pieces(e, one, {})) (pc.boundary ? p : v) += pc.euclid;
        const EuclidExcess ex = euclid_excess(e);
        CHECK(v - oracle::ball_volume(n) == doctest::Approx(ex.volume).epsilon(1e-12));
        CHECK(p - n * oracle::ball_volume(n) == doctest::Approx(ex.perimeter).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("quadrature and Monte-Carlo in three dimensions") {
    const Density d = make_radial_exp(3, 1.0, 1.0);
    MeasureBudget b;
    b.samples = 200000;
    b.seed = 9;
    for (const CompetitorSet& e :
         {make_plain_ball(Vec::unit(3, 0), 2.5), make_cylinder_extended(Vec::unit(3, 0), 2.5, 0.5),
          make_rotation_swept(Vec::unit(3, 0), 2.5, 0.3, Vec::unit(3, 2))}) {
      const SetMeasures q = set_measures(e, d, Method::quadrature, b);
      const SetMeasures m = set_measures(e, d, Method::monte_carlo, b);
      CHECK(m.volume.method == Method::monte_carlo);
      REQUIRE(m.volume.seed.has_value());
      CHECK(std::abs(q.volume.value - m.volume.value) <= 4 * m.volume.error_estimate);
      CHECK(std::abs(q.perimeter.value - m.perimeter.value) <= 4 * m.perimeter.error_estimate);
      CHECK(q.volume.error_estimate < 1e-8);
    }
  }

  TEST_CASE("Monte-Carlo is reproducible") {
    const Density d = make_radial_exp(2, 1.0, 1.0);
    MeasureBudget b;
    b.samples = 20000;
    const CompetitorSet e = make_rotation_swept(Vec::unit(2, 0), 3.0, 0.2, Vec::unit(2, 1));
    const SetMeasures a = monte_carlo_measures(e, d, b), c = monte_carlo_measures(e, d, b);
    CHECK(a.volume.value == c.volume.value);
    CHECK(a.perimeter.value == c.perimeter.value);
    b.seed = 2;
    CHECK(monte_carlo_measures(e, d, b).volume.value != a.volume.value);
    b.samples = 10;
    CHECK_THROWS(monte_carlo_measures(e, d, b));
  }

  TEST_CASE("ball deficit integrals") {
    const RadialDeficit zero = deficit_profile(make_constant(3, 1.0));
    auto [pz, vz] = ball_deficit_measures(zero, 3, 10.0, asymptotic_kernels(3));
    CHECK(pz.value == 0.0);
    CHECK(vz.value == 0.0);
    const RadialDeficit g = deficit_profile(make_radial_exp(3, 1.0, 1.0));
    const double R = 10.0, e = oracle::e;
    auto [pa, va] = ball_deficit_measures(g, 3, R, asymptotic_kernels(3));
    CHECK(pa.value == doctest::Approx(2 * pi * std::exp(-R) * (e - 1 / e)).epsilon(1e-12));
    CHECK(va.value == doctest::Approx(4 * pi * std::exp(-R) / e).epsilon(1e-12));
    CHECK(pa.value / va.value == doctest::Approx((e * e - 1) / 2).epsilon(1e-12));
    auto [px, vx] = ball_deficit_measures(g, 3, R, exact_kernels(3, R));
    CHECK(px.value / pa.value > 1 - 1 / R);
    CHECK(px.value / pa.value < 1 + 1 / R);
    CHECK(vx.value / va.value > 1 - 1 / R);
    CHECK(vx.value / va.value < 1 + 1 / R);
    // layer integrals against the full ball quadrature
    const BallDeficit full = ball_deficit_quadrature(make_radial_exp(3, 1.0, 1.0), R * Vec::unit(3, 0), {});
    CHECK(full.perimeter == doctest::Approx(px.value).epsilon(1e-10));
    CHECK(full.volume == doctest::Approx(vx.value).epsilon(1e-10));
    CHECK_THROWS(ball_deficit_measures(g, 3, 20.0, exact_kernels(3, R)));
  }

  TEST_CASE("mean density") {
    CHECK(mean_density(2 * pi, pi, 2) == doctest::Approx(1.0));
    CHECK(mean_density(4 * pi, 4 * pi / 3, 3) == doctest::Approx(1.0));
    for (int n : {2, 3, 5}) {
      const double p = 1.7, v = 0.9;
      CHECK(mean_density(2 * p, v, n) ==
            doctest::Approx(std::pow(2.0, n) * mean_density(p, v, n)).epsilon(1e-13));
    }
    CHECK(mean_density_minus_one(1e-20, 0.0, 2) == doctest::Approx(-2e-20).epsilon(1e-10));
    CHECK(mean_density_minus_one(0.0, 3e-18, 3) == doctest::Approx(-2 * 3e-18).epsilon(1e-10));
    CHECK(mean_density_minus_one(0.1, 0.2, 3) ==
          doctest::Approx(std::pow(0.9, 3) / std::pow(1.2, 2) - 1.0).epsilon(1e-13));
    CHECK_THROWS(mean_density(1.0, 0.0, 2));
  }

  TEST_CASE("profile upper bound") {
    CHECK(profile_upper_bound(0.0, 0.0, pi, 1.0, 2) == doctest::Approx(2 * pi));
    CHECK(profile_upper_bound(3.3, 1.1, 1.1, 1.0, 3) == doctest::Approx(3.3));
    CHECK(profile_upper_bound(2.0, 1.0, 1.0 + 4 * pi / 3, 1.0, 3) == doctest::Approx(2.0 + 4 * pi));
    CHECK_THROWS(profile_upper_bound(1.0, 2.0, 1.0, 1.0, 2));
  }

  TEST_CASE("scale field matches rescaled density") {
    const Density d = make_radial_exp(2, 2.0, 1.0);
    const Rescaled r = rescale(d, 5.0);
    CompetitorSet e = make_cylinder_extended(Vec::unit(2, 0), 3.0, 0.4);
    const SetMeasures a = set_measures(e, r.density, Method::quadrature);
    e.scale = r.lambda;
    const SetMeasures b = set_measures(e, d, Method::quadrature);
    CHECK(b.volume.value == doctest::Approx(2.0 * r.lambda * r.lambda * a.volume.value).epsilon(1e-12));
    CHECK(b.perimeter.value == doctest::Approx(2.0 * r.lambda * a.perimeter.value).epsilon(1e-12));
    CHECK(mean_density(b.perimeter.value, b.volume.value, 2) / 2.0 ==
          doctest::Approx(mean_density(a.perimeter.value, a.volume.value, 2)).epsilon(1e-12));
  }

  TEST_CASE("invalid sets") {
    CHECK_THROWS(validate_set(make_plain_ball(Vec::unit(2, 0), 1.0)));
    CHECK_THROWS(validate_set(make_cylinder_extended(Vec::unit(2, 0), 3.0, 3.0)));
    CHECK_THROWS(validate_set(make_rotation_swept(Vec::unit(2, 0), 3.0, 0.1, Vec::unit(2, 0))));
    CHECK_THROWS(validate_set(make_rotation_swept(Vec::unit(2, 0), 3.0, 2.0, Vec::unit(2, 1))));
    CHECK_THROWS(
        set_measures(make_plain_ball(Vec::unit(2, 0), 3.0), make_constant(3, 1.0), Method::quadrature));
    CHECK(variant_name(make_plain_ball(Vec::unit(2, 0), 3.0)) == "plain_ball");
  }
}
