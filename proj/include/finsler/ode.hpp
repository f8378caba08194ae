#ifndef FINSLER_ODE_HPP
#define FINSLER_ODE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "finsler/types.hpp"

namespace finsler::ode {

// Why an integration run stopped.
enum class StopReason {
  Completed,      // reached the end of the requested span
  GuardStop,      // the admissibility guard rejected further progress
  StepUnderflow,  // step size collapsed below the resolvable scale
  Stationary,     // right-hand side vanished at the initial point
};

template <std::size_t N>
using State = std::array<double, N>;

// Right-hand side: fills dy/dx and returns false when the evaluation point is
// outside the admissible region (the step is then rejected and shrunk).
template <std::size_t N>
using Rhs = std::function<bool(double, const State<N>&, State<N>&)>;

// Guard evaluated at accepted nodes; returning false truncates the run at the
// last good node.
template <std::size_t N>
using Guard = std::function<bool(double, const State<N>&)>;

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double max_step = 2e-3;
  double initial_step = 1e-4;
  double min_step_fraction = 1e-12;  // of the span width
};

// One accepted node with its derivative, enough for cubic Hermite dense
// output between consecutive nodes.
template <std::size_t N>
struct Node {
  double x;
  State<N> y;
  State<N> dy;
};

template <std::size_t N>
struct Solution {
  std::vector<Node<N>> nodes;  // ordered by |x - x0| along the run direction
  StopReason reason = StopReason::Completed;
  double last_x = 0.0;

  bool completed() const { return reason == StopReason::Completed; }

  // Cubic Hermite interpolation between the two bracketing nodes.
  State<N> eval(double x) const {
    const Node<N>* a = &nodes.front();
    const Node<N>* b = &nodes.back();
    const bool forward = nodes.back().x >= nodes.front().x;
    if (forward ? x <= a->x : x >= a->x) return a->y;
    if (forward ? x >= b->x : x <= b->x) return b->y;
    std::size_t lo = 0, hi = nodes.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (forward ? nodes[mid].x <= x : nodes[mid].x >= x)
        lo = mid;
      else
        hi = mid;
    }
    a = &nodes[lo];
    b = &nodes[hi];
    const double h = b->x - a->x;
    const double u = (x - a->x) / h;
    const double u2 = u * u, u3 = u2 * u;
    const double h00 = 2 * u3 - 3 * u2 + 1;
    const double h10 = u3 - 2 * u2 + u;
    const double h01 = -2 * u3 + 3 * u2;
    const double h11 = u3 - u2;
    State<N> out;
    for (std::size_t i = 0; i < N; ++i)
      out[i] = h00 * a->y[i] + h10 * h * a->dy[i] + h01 * b->y[i] + h11 * h * b->dy[i];
    return out;
  }
};

// Dormand-Prince 5(4) embedded pair with elementary step-size control.
// Integrates from x0 to x1 (either direction); nodes are emitted at every
// accepted step and exactly at x1 when the run completes.
template <std::size_t N>
Solution<N> integrate_dp54(const Rhs<N>& rhs, double x0, const State<N>& y0,
                           double x1, const Options& opt = {},
                           const Guard<N>& guard = {}) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                          e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640,
                          e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  Solution<N> sol;
  const double span = x1 - x0;
  if (span == 0.0) {
    State<N> dy0;
    if (!rhs(x0, y0, dy0)) dy0.fill(0.0);
    sol.nodes.push_back({x0, y0, dy0});
    sol.last_x = x0;
    return sol;
  }
  const double dir = span > 0 ? 1.0 : -1.0;
  const double min_step = std::abs(span) * opt.min_step_fraction;

  double x = x0;
  State<N> y = y0;
  State<N> k1;
  if (!rhs(x, y, k1)) {
    sol.reason = StopReason::GuardStop;
    sol.nodes.push_back({x, y, State<N>{}});
    sol.last_x = x;
    return sol;
  }
  sol.nodes.push_back({x, y, k1});

  double h = dir * std::min(opt.initial_step, opt.max_step);
  State<N> k2, k3, k4, k5, k6, k7, yt, y5;

  while (dir * (x1 - x) > 0) {
    if (dir * (x + h - x1) > 0) h = x1 - x;
    if (std::abs(h) < min_step) {
      sol.reason = StopReason::StepUnderflow;
      sol.last_x = x;
      return sol;
    }

    bool ok = true;
    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * a21 * k1[i];
    ok = ok && rhs(x + c2 * h, yt, k2);
    if (ok) {
      for (std::size_t i = 0; i < N; ++i)
        yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
      ok = rhs(x + c3 * h, yt, k3);
    }
    if (ok) {
      for (std::size_t i = 0; i < N; ++i)
        yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      ok = rhs(x + c4 * h, yt, k4);
    }
    if (ok) {
      for (std::size_t i = 0; i < N; ++i)
        yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      ok = rhs(x + c5 * h, yt, k5);
    }
    if (ok) {
      for (std::size_t i = 0; i < N; ++i)
        yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                            a64 * k4[i] + a65 * k5[i]);
      ok = rhs(x + h, yt, k6);
    }
    if (ok) {
      for (std::size_t i = 0; i < N; ++i)
        y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                            b6 * k6[i]);
      ok = rhs(x + h, y5, k7);
    }
    if (!ok) {
      h *= 0.5;
      continue;
    }

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                             e6 * k6[i] + e7 * k7[i]);
      const double sk =
          opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      const double q = ei / sk;
      err += q * q;
    }
    err = std::sqrt(err / N);

    if (err <= 1.0) {
      if (guard && !guard(x + h, y5)) {
        // shrink toward the admissibility boundary instead of stepping past it
        if (std::abs(h) < 4 * min_step) {
          sol.reason = StopReason::GuardStop;
          sol.last_x = x;
          return sol;
        }
        h *= 0.5;
        continue;
      }
      x += h;
      y = y5;
      k1 = k7;  // first-same-as-last
      sol.nodes.push_back({x, y, k1});
      const double grow = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
      h *= std::clamp(grow, 0.2, 5.0);
      if (std::abs(h) > opt.max_step) h = dir * opt.max_step;
    } else {
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 0.9);
    }
  }
  sol.last_x = x;
  return sol;
}

}  // namespace finsler::ode

#endif
