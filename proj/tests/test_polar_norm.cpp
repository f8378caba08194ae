#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "finsler/polar_norm.hpp"
#include "support/samples.hpp"

using namespace finsler;

TEST_CASE("convexity margin on pinned jets") {
  CHECK(convexity_margin({0.0, 0.5, 0.0, 0.0, 0.0}) == doctest::Approx(1.0));
  CHECK(convexity_margin({0.0, 0.5, 0.5, 0.0, 0.0}) == doctest::Approx(0.75));
  // a profile this steep is not convex
  CHECK(convexity_margin({0.0, 1.0, 3.0, 0.0, 0.0}) == doctest::Approx(-5.0));
  CHECK_THROWS_AS(convexity_margin({0.0, std::nan(""), 0.0, 0.0, 0.0}), DomainError);
}

TEST_CASE("polar frame Gram values") {
  const PolarGram round = polar_gram({0.0, 0.5, 0.0, 0.0, 0.0}, 1.0);
  CHECK(round.g_rr == doctest::Approx(1.0));
  CHECK(round.g_rt == 0.0);
  CHECK(round.g_tt == doctest::Approx(1.0));

  const PolarGram tilted = polar_gram({0.0, 0.5, 0.5, 0.0, 0.0}, 1.0);
  CHECK(tilted.g_rr == doctest::Approx(1.0));
  CHECK(tilted.g_rt == 0.0);
  CHECK(tilted.g_tt == doctest::Approx(0.75));

  // g_tt scales with r^2
  const PolarGram scaled = polar_gram({0.0, 0.5, 0.0, 0.0, 0.0}, 2.0);
  CHECK(scaled.g_rr == doctest::Approx(1.0));
  CHECK(scaled.g_tt == doctest::Approx(4.0));

  CHECK_THROWS_AS(polar_gram({0.0, 0.5, 0.0, 0.0, 0.0}, 0.0), DomainError);
}

TEST_CASE("Gram matrix in the algebra basis") {
  // the circle norm has the identity Gram matrix at every point
  for (const double t : {0.0, 0.4, -1.1}) {
    const SymMat2 g = gram_in_basis({t, 0.5, 0.0, 0.0, 0.0}, 1.3);
    CHECK(g.a11 == doctest::Approx(1.0));
    CHECK(g.a12 == doctest::Approx(0.0));
    CHECK(g.a22 == doctest::Approx(1.0));
  }

  // worked non-round jet at t = 0, r = 1
  const SymMat2 g = gram_in_basis({0.0, 0.5, 0.5, 0.0, 0.0}, 1.0);
  CHECK(g.a11 == doctest::Approx(1.0));
  CHECK(g.a12 == doctest::Approx(0.5));
  CHECK(g.a22 == doctest::Approx(1.0));

  CHECK_THROWS_AS(gram_in_basis({0.0, 1.0, 3.0, 0.0, 0.0}, 1.0), ConvexityError);
}

TEST_CASE("Gram matrix properties over random admissible jets") {
  for (const NormJet& jet : testing::random_admissible_jets(200, 101)) {
    for (const double r : {0.5, 1.0, 2.0}) {
      const SymMat2 g = gram_in_basis(jet, r);
      // positive definiteness through trace/determinant
      CHECK(g.det() > 0.0);
      CHECK(g.a11 + g.a22 > 0.0);
      // determinant equals the frame-change value (g_rr g_tt)/r^2 = margin
      const PolarGram pg = polar_gram(jet, r);
      CHECK(g.det() ==
            doctest::Approx(pg.g_rr * pg.g_tt / (r * r)).epsilon(1e-10));
      // Euler identity for the 2-homogeneous square norm
      const Vec2 y{r * std::cos(jet.t), r * std::sin(jet.t)};
      const double expect = 2.0 * r * r * jet.f;
      CHECK(g.quad(y, y) == doctest::Approx(expect).epsilon(1e-12));
      // the polar frame is g-orthogonal by construction
      const Vec2 radial{std::cos(jet.t), std::sin(jet.t)};
      const Vec2 tangent = indicatrix_tangent(jet);
      CHECK(std::abs(g.quad(radial, tangent)) < 1e-12 * (1.0 + expect));
    }
  }
}

TEST_CASE("Cartan scalar") {
  CHECK(cartan_scalar({0.0, 0.5, 0.0, 0.0, 0.0}) == 0.0);
  CHECK(cartan_scalar({0.0, 0.5, 0.5, 0.0, 1.0}) == doctest::Approx(1.5));
  // invariance under a joint rescaling of the jet
  for (const NormJet& jet : testing::random_admissible_jets(50, 102)) {
    const double base = cartan_scalar(jet);
    for (const double k : {0.5, 2.0}) {
      const NormJet scaled{jet.t, k * jet.f, k * jet.df, k * jet.d2f, k * jet.d3f};
      CHECK(cartan_scalar(scaled) == doctest::Approx(base).epsilon(1e-12));
    }
  }
}

TEST_CASE("indicatrix point") {
  const Vec2 p0 = indicatrix_point({0.0, 0.5, 0.0, 0.0, 0.0});
  CHECK(p0.y1 == doctest::Approx(1.0));
  CHECK(p0.y2 == doctest::Approx(0.0));
  const Vec2 p1 = indicatrix_point({M_PI / 2, 0.5, 0.0, 0.0, 0.0});
  CHECK(p1.y1 == doctest::Approx(0.0));
  CHECK(p1.y2 == doctest::Approx(1.0));
  const Vec2 p2 = indicatrix_point({0.0, 2.0, 0.0, 0.0, 0.0});
  CHECK(p2.y1 == doctest::Approx(0.5));
  CHECK(p2.y2 == doctest::Approx(0.0));

  // the point always has unit norm
  for (const NormJet& jet : testing::random_admissible_jets(50, 103)) {
    const Vec2 p = indicatrix_point(jet);
    CHECK(norm_value(jet, norm(p)) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("norm curves certify their domain") {
  const NormCurve round = make_round_curve(0.5);
  CHECK(round.jet_at(0.3).f == doctest::Approx(0.5));
  CHECK(round.jet_at(0.3).t == 0.3);
  CHECK(round.min_margin() > 0.0);
  CHECK_THROWS_AS(round.jet_at(2.0), DomainError);

  // cartan scalar vanishes identically on round profiles
  for (int i = 0; i <= 20; ++i) {
    const double t = -1.0 + 0.1 * i;
    CHECK(cartan_scalar(round.jet_at(t)) == 0.0);
  }

  // a profile that loses convexity inside the domain is rejected outright
  auto f = [](double t) { return 0.5 + 0.45 * std::sin(4.0 * t); };
  auto df = [](double t) { return 1.8 * std::cos(4.0 * t); };
  auto d2f = [](double t) { return -7.2 * std::sin(4.0 * t); };
  auto d3f = [](double t) { return -28.8 * std::cos(4.0 * t); };
  CHECK_THROWS_AS(make_analytic_curve({-1.0, 1.0}, f, df, d2f, d3f),
                  ConvexityError);
}

TEST_CASE("quadratic profiles reproduce their Gram matrix") {
  const double q11 = 2.0, q12 = 0.6, q22 = 1.0;
  const NormCurve curve = make_quadratic_curve(q11, q12, q22);
  // F^2(y) = y^T Q y, so 2 r^2 f(t) must equal the quadratic form
  for (int i = 0; i < 12; ++i) {
    const double t = -1.2 + 0.2 * i;
    const double c = std::cos(t), s = std::sin(t);
    const double form = q11 * c * c + 2 * q12 * c * s + q22 * s * s;
    CHECK(2.0 * curve.jet_at(t).f == doctest::Approx(form).epsilon(1e-13));
  }
  // seed margin at t = 0 equals det Q for quadratic profiles
  const NormJet j0 = curve.jet_at(0.0);
  CHECK(convexity_margin(j0) ==
        doctest::Approx(q11 * q22 - q12 * q12).epsilon(1e-12));
}
