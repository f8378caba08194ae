#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "finsler/ode.hpp"

using namespace finsler;

TEST_CASE("exponential growth to machine-level accuracy") {
  ode::Rhs<1> rhs = [](double, const ode::State<1>& y, ode::State<1>& dy) {
    dy[0] = y[0];
    return true;
  };
  ode::Options opt;
  opt.max_step = 0.05;
  const auto sol = ode::integrate_dp54<1>(rhs, 0.0, {1.0}, 2.0, opt);
  REQUIRE(sol.completed());
  CHECK(sol.nodes.back().y[0] == doctest::Approx(std::exp(2.0)).epsilon(1e-9));
}

TEST_CASE("harmonic oscillator round trip, forwards and backwards") {
  ode::Rhs<2> rhs = [](double, const ode::State<2>& y, ode::State<2>& dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
    return true;
  };
  for (const double dir : {1.0, -1.0}) {
    const auto sol = ode::integrate_dp54<2>(rhs, 0.0, {1.0, 0.0}, dir * 2 * M_PI);
    REQUIRE(sol.completed());
    CHECK(sol.nodes.back().y[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sol.nodes.back().y[1] == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("dense output stays close to the true flow") {
  ode::Rhs<2> rhs = [](double, const ode::State<2>& y, ode::State<2>& dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
    return true;
  };
  const auto sol = ode::integrate_dp54<2>(rhs, 0.0, {1.0, 0.0}, 3.0);
  REQUIRE(sol.completed());
  double worst = 0.0;
  for (int i = 0; i <= 3000; ++i) {
    const double x = 3.0 * i / 3000.0;
    const auto y = sol.eval(x);
    worst = std::max(worst, std::abs(y[0] - std::cos(x)));
    worst = std::max(worst, std::abs(y[1] + std::sin(x)));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("guards truncate the run near the admissible boundary") {
  // y' = 1, guard y < 1: must stop just below 1 rather than overshoot
  ode::Rhs<1> rhs = [](double, const ode::State<1>&, ode::State<1>& dy) {
    dy[0] = 1.0;
    return true;
  };
  ode::Guard<1> guard = [](double, const ode::State<1>& y) { return y[0] < 1.0; };
  const auto sol = ode::integrate_dp54<1>(rhs, 0.0, {0.0}, 5.0, {}, guard);
  CHECK(sol.reason == ode::StopReason::GuardStop);
  CHECK(sol.nodes.back().y[0] <= 1.0);
  CHECK(sol.nodes.back().y[0] > 0.99);
}

TEST_CASE("rejected right-hand sides shrink the step and eventually stop") {
  ode::Rhs<1> rhs = [](double x, const ode::State<1>&, ode::State<1>& dy) {
    if (x > 0.5) return false;
    dy[0] = 1.0;
    return true;
  };
  const auto sol = ode::integrate_dp54<1>(rhs, 0.0, {0.0}, 1.0);
  CHECK(sol.reason == ode::StopReason::StepUnderflow);
  CHECK(sol.last_x == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("a vanishing field completes without moving") {
  ode::Rhs<2> rhs = [](double, const ode::State<2>&, ode::State<2>& dy) {
    dy[0] = 0.0;
    dy[1] = 0.0;
    return true;
  };
  const auto sol = ode::integrate_dp54<2>(rhs, 0.0, {1.0, 0.0}, 1.0);
  CHECK(sol.completed());
  CHECK(sol.nodes.back().y[0] == 1.0);
}

TEST_CASE("tightening the tolerance refines the answer consistently") {
  // well-posedness probe: two tolerances must agree far below the loose one
  ode::Rhs<1> rhs = [](double x, const ode::State<1>& y, ode::State<1>& dy) {
    dy[0] = std::sin(x) * y[0];
    return true;
  };
  ode::Options loose, tight;
  loose.abs_tol = loose.rel_tol = 1e-10;
  tight.abs_tol = tight.rel_tol = 1e-12;
  const auto a = ode::integrate_dp54<1>(rhs, 0.0, {1.0}, 2.0, loose);
  const auto b = ode::integrate_dp54<1>(rhs, 0.0, {1.0}, 2.0, tight);
  CHECK(a.nodes.back().y[0] == doctest::Approx(b.nodes.back().y[0]).epsilon(1e-8));
  const double exact = std::exp(1.0 - std::cos(2.0));
  CHECK(a.nodes.back().y[0] == doctest::Approx(exact).epsilon(1e-9));
}
