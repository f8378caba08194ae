#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "finsler/flow_oracles.hpp"
#include "finsler/solvers.hpp"
#include "support/oracles.hpp"
#include "support/samples.hpp"

using namespace finsler;

namespace {
const LieAlgebra2 kAlg = canonical_algebra();
}

TEST_CASE("geodesic flow on the hyperbolic plane follows the closed form") {
  // f == 1/2: the flow of -eta on the unit circle obeys tan(alpha/2) = e^s
  // when started at alpha = pi/2
  const NormCurve hyp = testing::hyperbolic_curve();
  const Trajectory traj = geodesic_flow(kAlg, hyp, {0.0, 1.0}, 1.0);
  REQUIRE(traj.status() == FlowStatus::Completed);
  for (int i = 0; i <= 10; ++i) {
    const double s = i / 10.0;
    const double alpha = 2.0 * std::atan(std::exp(s));
    const Vec2 y = traj.at(s);
    CHECK(y.y1 == doctest::Approx(std::cos(alpha)).epsilon(1e-9));
    CHECK(y.y2 == doctest::Approx(std::sin(alpha)).epsilon(1e-9));
  }
}

TEST_CASE("geodesic flow preserves the norm") {
  for (const NormCurve& curve :
       {testing::hyperbolic_curve(), make_quadratic_curve(2.0, 0.6, 1.0)}) {
    const NormJet j0 = curve.jet_at(0.1);
    const Vec2 y0 = 1.5 * indicatrix_point(j0);  // norm 1.5
    const Trajectory traj = geodesic_flow(kAlg, curve, y0, 0.8);
    for (int i = 0; i <= 20; ++i) {
      const double s = traj.s_end() * i / 20.0;
      const Vec2 y = traj.at(s);
      const NormJet j = curve.jet_at(polar_angle(y));
      CHECK(norm_value(j, norm(y)) == doctest::Approx(1.5).epsilon(1e-8));
    }
  }
}

TEST_CASE("flow scaling follows the spray homogeneity") {
  // y(s; 2 y0) = 2 y(2s; y0) because the spray is 2-homogeneous
  const NormCurve quad = make_quadratic_curve(1.0, 0.4, 1.2);
  const Vec2 y0 = indicatrix_point(quad.jet_at(0.15));
  const Trajectory base = geodesic_flow(kAlg, quad, y0, 0.6);
  const Trajectory doubled = geodesic_flow(kAlg, quad, 2.0 * y0, 0.3);
  for (int i = 0; i <= 12; ++i) {
    const double s = 0.3 * i / 12.0;
    const Vec2 lhs = doubled.at(s);
    const Vec2 rhs = 2.0 * base.at(2.0 * s);
    CHECK(norm(lhs - rhs) < 1e-8);
  }
}

TEST_CASE("stationary spray points are reported") {
  // on the round norm the spray vanishes on the e1-axis
  const NormCurve hyp = testing::hyperbolic_curve();
  const Trajectory traj = geodesic_flow(kAlg, hyp, {1.0, 0.0}, 1.0);
  CHECK(traj.status() == FlowStatus::Stationary);
  CHECK(traj.s_end() == 0.0);
}

TEST_CASE("the flow stops at the domain boundary") {
  // on the round norm the angle grows along the flow, so the arc must exit
  // through t = 0.3 well before s = 2
  const NormCurve narrow = make_round_curve(0.5, {-0.3, 0.3});
  const NormJet j0 = narrow.jet_at(0.2);
  const Trajectory traj = geodesic_flow(kAlg, narrow, indicatrix_point(j0), 2.0);
  CHECK(traj.status() == FlowStatus::Boundary);
  CHECK(traj.s_end() < 2.0);
  // the last point still lies inside the cone
  const Vec2 last = traj.at(traj.s_end());
  CHECK(narrow.domain().contains(polar_angle(last)));
}

TEST_CASE("the velocity field is parallel along its own geodesic") {
  const NormCurve quad = make_quadratic_curve(2.0, 0.6, 1.0);
  const Vec2 y0 = indicatrix_point(quad.jet_at(0.1));
  const ParallelField pf = parallel_transport(kAlg, quad, y0, y0, 0.8);
  const Trajectory traj = geodesic_flow(kAlg, quad, y0, 0.8);
  for (int i = 0; i <= 16; ++i) {
    const double s = std::min(pf.s_end(), traj.s_end()) * i / 16.0;
    CHECK(norm(pf.value_at(s) - traj.at(s)) < 1e-7);
    CHECK(norm(pf.base_at(s) - traj.at(s)) < 1e-9);
  }
}

TEST_CASE("parallel transport is isometric for the fundamental tensor") {
  for (const NormCurve& curve :
       {testing::hyperbolic_curve(), make_quadratic_curve(1.5, -0.4, 0.9)}) {
    const NormJet j0 = curve.jet_at(-0.05);
    const Vec2 y0 = indicatrix_point(j0);
    const Vec2 u0 = (1.0 / indicatrix_tangent_norm(j0)) * indicatrix_tangent(j0);
    const ParallelField pf = parallel_transport(kAlg, curve, y0, u0, 1.0);
    for (int i = 0; i <= 20; ++i) {
      const double s = pf.s_end() * i / 20.0;
      const Vec2 y = pf.base_at(s);
      const Vec2 w = pf.value_at(s);
      const SymMat2 g = gram_in_basis(curve.jet_at(polar_angle(y)), norm(y));
      CHECK(g.quad(w, w) == doctest::Approx(1.0).epsilon(1e-7));
    }
  }
}

TEST_CASE("Riemann operator matches the structure-constant oracle") {
  // round profile: K = -(eps1^2 + eps2^2)/(2 f0) from the Koszul formula
  const NormCurve hyp = testing::hyperbolic_curve();
  const double expect = testing::round_metric_curvature(kAlg, 0.5);
  REQUIRE(expect == -1.0);
  for (int i = 1; i <= 8; ++i) {
    const double t = 0.18 * i;  // keep away from the stationary axis
    const NormJet j = hyp.jet_at(t);
    const Vec2 y = indicatrix_point(j);
    const Vec2 u = (1.0 / indicatrix_tangent_norm(j)) * indicatrix_tangent(j);
    const Vec2 r = riemann_curvature(kAlg, hyp, y, u);
    const SymMat2 g = gram_in_basis(j, norm(y));
    CHECK(g.quad(r, u) == doctest::Approx(expect).epsilon(1e-5));
    // the operator annihilates the flag pole
    const Vec2 ry = riemann_curvature(kAlg, hyp, y, y);
    CHECK(norm(ry) < 1e-6);
    // and is linear in its argument
    const Vec2 r2 = riemann_curvature(kAlg, hyp, y, 2.0 * u);
    CHECK(norm(r2 - 2.0 * r) <= 1e-8 * (1.0 + norm(r2)));
  }
  // the spray vanishes on the e1-axis, so the operator is undefined there
  CHECK_THROWS_AS(
      riemann_curvature(kAlg, hyp, {1.0, 0.0}, {0.0, 1.0}), SingularityError);
}

TEST_CASE("flag curvature of round and quadratic profiles") {
  const NormCurve hyp = testing::hyperbolic_curve();
  for (int i = 1; i <= 10; ++i) {
    const double t = 0.14 * i;
    CHECK(flag_curvature(kAlg, hyp, hyp.jet_at(t)) ==
          doctest::Approx(-1.0).epsilon(1e-5));
  }
  const double q11 = 1.4, q12 = -0.5, q22 = 0.8;
  const NormCurve quad = make_quadratic_curve(q11, q12, q22);
  const double expect = testing::quadratic_metric_curvature(q11, q12, q22);
  for (int i = 0; i < 8; ++i) {
    const double t = -0.3 + 0.65 * i / 7.0;
    const NormJet j = quad.jet_at(t);
    CHECK(flag_curvature(kAlg, quad, j) == doctest::Approx(expect).epsilon(1e-5));
    CHECK(flag_curvature_via_riemann(kAlg, quad, j) ==
          doctest::Approx(expect).epsilon(1e-5));
  }
}

TEST_CASE("flag curvature routes agree on solved curves") {
  const SeedJet seed{0.5, 0.5, 0.0, 0.0};
  for (const double c : {-1.0, 0.0}) {
    const NormCurve curve = solve_constant_curvature(seed, c);
    for (int i = 0; i < 20; ++i) {
      const double t = -0.08 + 0.16 * i / 19.0;
      const NormJet j = curve.jet_at(t);
      const double k1 = flag_curvature(kAlg, curve, j);
      const double k2 = flag_curvature_via_riemann(kAlg, curve, j);
      CHECK(std::abs(k1 - c) < 1e-5);
      CHECK(std::abs(k1 - k2) < 1e-4);
    }
  }
}

TEST_CASE("flag curvature needs a nonvanishing tangent ratio") {
  const NormCurve hyp = testing::hyperbolic_curve();
  CHECK_THROWS_AS(flag_curvature(kAlg, hyp, hyp.jet_at(0.0)), SingularityError);
}

TEST_CASE("Landsberg scalar vanishes exactly where it must") {
  const NormCurve hyp = testing::hyperbolic_curve();
  for (int i = 0; i < 8; ++i)
    CHECK(landsberg_scalar(kAlg, hyp, hyp.jet_at(-0.6 + 0.2 * i)) == 0.0);

  const SeedJet seed{0.5, 0.5, 0.0, 0.0};
  const NormCurve solved = solve_landsberg(seed);
  for (int i = 0; i < 10; ++i) {
    const double t = -0.09 + 0.02 * i;
    CHECK(std::abs(landsberg_scalar(kAlg, solved, solved.jet_at(t))) < 1e-8);
  }
}

TEST_CASE("a wavy profile is decisively not Landsberg") {
  const NormCurve wavy = make_analytic_curve(
      {-0.5, 0.5}, [](double t) { return 0.5 + 0.1 * std::sin(3 * t); },
      [](double t) { return 0.3 * std::cos(3 * t); },
      [](double t) { return -0.9 * std::sin(3 * t); },
      [](double t) { return -2.7 * std::cos(3 * t); });
  CHECK(std::abs(landsberg_scalar(kAlg, wavy, wavy.jet_at(0.0))) > 1e-3);
}

TEST_CASE("both Landsberg pipelines agree") {
  const NormCurve quad = make_quadratic_curve(2.0, 0.6, 1.0);
  const NormCurve wavy = make_analytic_curve(
      {-0.5, 0.5}, [](double t) { return 0.5 + 0.1 * std::sin(3 * t); },
      [](double t) { return 0.3 * std::cos(3 * t); },
      [](double t) { return -0.9 * std::sin(3 * t); },
      [](double t) { return -2.7 * std::cos(3 * t); });
  const NormCurve solved = solve_landsberg(SeedJet{0.6, -0.4, 0.2, 0.5});
  for (const NormCurve* curve : {&quad, &wavy, &solved}) {
    for (int i = 0; i < 7; ++i) {
      const double t = -0.09 + 0.03 * i;
      const NormJet j = curve->jet_at(t);
      const double direct = landsberg_scalar(kAlg, *curve, j);
      const double transported = landsberg_scalar_via_transport(kAlg, *curve, j);
      CHECK(std::abs(direct - transported) < 1e-6);
    }
  }
}

TEST_CASE("Cartan cube decomposes against the polar frame") {
  for (const NormJet& jet : testing::random_admissible_jets(50, 401)) {
    // radial arguments contribute nothing
    const Vec2 radial{std::cos(jet.t), std::sin(jet.t)};
    CHECK(cartan_cubed(jet, radial) == doctest::Approx(0.0).epsilon(1e-14));
    // the tangent direction reproduces the Cartan scalar
    CHECK(cartan_cubed(jet, indicatrix_tangent(jet)) ==
          doctest::Approx(cartan_scalar(jet)).epsilon(1e-12));
    // cubic homogeneity in the argument
    const Vec2 w{0.3, -0.7};
    CHECK(cartan_cubed(jet, 2.0 * w) ==
          doctest::Approx(8.0 * cartan_cubed(jet, w)).epsilon(1e-12));
  }
}

TEST_CASE("flag curvature is branch-independent") {
  // [e1,e2] = -e2 gives the same curvature function as the canonical branch
  const LieAlgebra2 neg{0.0, -1.0};
  const NormCurve quad = make_quadratic_curve(1.6, 0.5, 1.0);
  for (int i = 0; i < 6; ++i) {
    const double t = -0.25 + 0.1 * i;
    const NormJet j = quad.jet_at(t);
    CHECK(flag_curvature(neg, quad, j) ==
          doctest::Approx(flag_curvature(kAlg, quad, j)).epsilon(1e-12));
    // the Lie-derivative route with the negative branch agrees too
    CHECK(flag_curvature_via_riemann(neg, quad, j) ==
          doctest::Approx(flag_curvature(kAlg, quad, j)).epsilon(1e-4));
  }
}
