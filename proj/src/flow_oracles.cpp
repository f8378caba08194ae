#include "finsler/flow_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "finsler/solvers.hpp"

namespace finsler {

namespace {

constexpr double kMarginGuardFactor = 1e-6;
constexpr double kMinProfile = 1e-8;

// Spray evaluation with domain / convexity guards folded into a bool return,
// for use inside integrator right-hand sides.
bool try_spray(const LieAlgebra2& alg, const NormCurve& curve, Vec2 y, Vec2& out) {
  const double r = norm(y);
  if (!(r > 0.0)) return false;
  const double t = polar_angle(y);
  if (!curve.domain().contains(t)) return false;
  const NormJet jet = curve.jet_at(t);
  const double margin = convexity_margin(jet);
  if (!(jet.f > kMinProfile) || !(margin > kMarginGuardFactor * 4 * jet.f * jet.f))
    return false;
  out = spray_vector(alg, jet, r);
  return true;
}

bool try_spray_derivative(const LieAlgebra2& alg, const NormCurve& curve, Vec2 y,
                          Vec2 v, Vec2& out, double step = 1e-5) {
  const double ny = norm(y), nv = norm(v);
  if (!(ny > 0.0)) return false;
  if (!(nv > 0.0)) {
    out = {0.0, 0.0};
    return true;
  }
  const double h = step * ny / nv;
  Vec2 plus, minus;
  if (!try_spray(alg, curve, y + h * v, plus)) return false;
  if (!try_spray(alg, curve, y - h * v, minus)) return false;
  out = (1.0 / (2.0 * h)) * (plus - minus);
  return true;
}

// Joint right-hand side of the geodesic flow and the parallel-transport rule:
//   y' = -eta(y),   w' = -(1/2) Deta(y, w) - (1/2) [y, w].
bool joint_rhs(const LieAlgebra2& alg, const NormCurve& curve,
               const ode::State<4>& s, ode::State<4>& ds) {
  const Vec2 y{s[0], s[1]}, w{s[2], s[3]};
  Vec2 eta, deta;
  if (!try_spray(alg, curve, y, eta)) return false;
  if (!try_spray_derivative(alg, curve, y, w, deta)) return false;
  const Vec2 br = alg.bracket(y, w);
  ds[0] = -eta.y1;
  ds[1] = -eta.y2;
  ds[2] = -0.5 * deta.y1 - 0.5 * br.y1;
  ds[3] = -0.5 * deta.y2 - 0.5 * br.y2;
  return true;
}

FlowStatus to_flow_status(ode::StopReason r) {
  switch (r) {
    case ode::StopReason::Completed: return FlowStatus::Completed;
    case ode::StopReason::GuardStop: return FlowStatus::Boundary;
    case ode::StopReason::StepUnderflow: return FlowStatus::Underflow;
    case ode::StopReason::Stationary: return FlowStatus::Stationary;
  }
  return FlowStatus::Underflow;
}

ode::Options flow_ode_options(const FlowOptions& opt) {
  ode::Options o;
  o.abs_tol = opt.abs_tol;
  o.rel_tol = opt.rel_tol;
  o.max_step = opt.max_step;
  o.initial_step = std::min(1e-4, opt.max_step);
  return o;
}

}  // namespace

Trajectory::Trajectory(ode::Solution<2> sol, FlowStatus status)
    : sol_(std::move(sol)), status_(status) {}

Vec2 Trajectory::at(double s) const {
  const ode::State<2> y = sol_.eval(s);
  return {y[0], y[1]};
}

double Trajectory::s_begin() const { return sol_.nodes.front().x; }
double Trajectory::s_end() const { return sol_.last_x; }

Trajectory geodesic_flow(const LieAlgebra2& alg, const NormCurve& curve, Vec2 y0,
                         double s_end, const FlowOptions& opt) {
  Vec2 probe;
  if (!try_spray(alg, curve, y0, probe))
    throw DomainError("geodesic_flow: initial point is not admissible");
  if (norm(probe) <= 1e-12 * std::max(1.0, dot(y0, y0))) {
    // the spray vanishes here; the integral curve is the point itself
    ode::Solution<2> still;
    still.nodes.push_back({0.0, {y0.y1, y0.y2}, {0.0, 0.0}});
    still.reason = ode::StopReason::Stationary;
    still.last_x = 0.0;
    return Trajectory(std::move(still), FlowStatus::Stationary);
  }
  ode::Rhs<2> rhs = [&](double, const ode::State<2>& s, ode::State<2>& ds) {
    Vec2 eta;
    if (!try_spray(alg, curve, {s[0], s[1]}, eta)) return false;
    ds[0] = -eta.y1;
    ds[1] = -eta.y2;
    return true;
  };
  ode::Guard<2> guard = [&](double, const ode::State<2>& s) {
    Vec2 eta;
    return try_spray(alg, curve, {s[0], s[1]}, eta);
  };
  auto sol = ode::integrate_dp54<2>(rhs, 0.0, {y0.y1, y0.y2}, s_end,
                                    flow_ode_options(opt), guard);
  const FlowStatus status = to_flow_status(sol.reason);
  return Trajectory(std::move(sol), status);
}

ParallelField::ParallelField(ode::Solution<4> sol, FlowStatus status)
    : sol_(std::move(sol)), status_(status) {}

Vec2 ParallelField::base_at(double s) const {
  const ode::State<4> y = sol_.eval(s);
  return {y[0], y[1]};
}

Vec2 ParallelField::value_at(double s) const {
  const ode::State<4> y = sol_.eval(s);
  return {y[2], y[3]};
}

double ParallelField::s_end() const { return sol_.last_x; }

ParallelField parallel_transport(const LieAlgebra2& alg, const NormCurve& curve,
                                 Vec2 y0, Vec2 w0, double s_end,
                                 const FlowOptions& opt) {
  Vec2 probe;
  if (!try_spray(alg, curve, y0, probe))
    throw DomainError("parallel_transport: initial point is not admissible");
  ode::Rhs<4> rhs = [&](double, const ode::State<4>& s, ode::State<4>& ds) {
    return joint_rhs(alg, curve, s, ds);
  };
  ode::Guard<4> guard = [&](double, const ode::State<4>& s) {
    Vec2 eta;
    return try_spray(alg, curve, {s[0], s[1]}, eta);
  };
  auto sol = ode::integrate_dp54<4>(rhs, 0.0, {y0.y1, y0.y2, w0.y1, w0.y2}, s_end,
                                    flow_ode_options(opt), guard);
  const FlowStatus status = to_flow_status(sol.reason);
  return ParallelField(std::move(sol), status);
}

namespace {

// Fixed-substep RK4 on the joint (y, w) system: cheap, smooth in the step
// count, and exact enough (h^5 per substep) for difference stencils.
bool local_joint_grid(const LieAlgebra2& alg, const NormCurve& curve,
                      const ode::State<4>& start, double delta, int reach,
                      int substeps, std::vector<ode::State<4>>& states) {
  states.assign(2 * reach + 1, start);
  for (int dir : {+1, -1}) {
    ode::State<4> y = start;
    for (int k = 1; k <= reach; ++k) {
      const double h = dir * delta / substeps;
      for (int m = 0; m < substeps; ++m) {
        ode::State<4> k1, k2, k3, k4, tmp;
        if (!joint_rhs(alg, curve, y, k1)) return false;
        for (int i = 0; i < 4; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        if (!joint_rhs(alg, curve, tmp, k2)) return false;
        for (int i = 0; i < 4; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        if (!joint_rhs(alg, curve, tmp, k3)) return false;
        for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * k3[i];
        if (!joint_rhs(alg, curve, tmp, k4)) return false;
        for (int i = 0; i < 4; ++i)
          y[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
      }
      states[reach + dir * k] = y;
    }
  }
  return true;
}

Vec2 state_y(const ode::State<4>& s) { return {s[0], s[1]}; }
Vec2 state_w(const ode::State<4>& s) { return {s[2], s[3]}; }

}  // namespace

Vec2 riemann_curvature(const LieAlgebra2& alg, const NormCurve& curve, Vec2 y,
                       Vec2 w, double delta_s) {
  Vec2 eta;
  if (!try_spray(alg, curve, y, eta))
    throw DomainError("riemann_curvature: base point is not admissible");
  if (norm(eta) <= 1e-12 * dot(y, y))
    throw SingularityError("riemann_curvature: spray vanishes at the base point");

  // Parallel-transport data on the stencil s = k * delta_s, k = -2..2.
  std::vector<ode::State<4>> st;
  if (!local_joint_grid(alg, curve, {y.y1, y.y2, w.y1, w.y2}, delta_s, 2, 4, st))
    throw DomainError("riemann_curvature: stencil leaves the admissible cone");

  // Inner Lie derivative: N(s) = -L_eta w(s) = w'(s) + Deta(y(s), w(s)),
  // with w' a centered difference of the parallel field.  The directional
  // derivative uses a finer step than the connection default because the
  // spray's third derivatives grow near degeneracy walls.
  const double deta_step = 1e-6;
  auto n_field = [&](int k) {
    const Vec2 wp = state_w(st[k + 1 + 2]);
    const Vec2 wm = state_w(st[k - 1 + 2]);
    const Vec2 dw = (1.0 / (2.0 * delta_s)) * (wp - wm);
    Vec2 deta;
    if (!try_spray_derivative(alg, curve, state_y(st[k + 2]), state_w(st[k + 2]),
                              deta, deta_step))
      throw DomainError("riemann_curvature: stencil leaves the admissible cone");
    return dw + deta;
  };
  const Vec2 n_minus = n_field(-1);
  const Vec2 n_zero = n_field(0);
  const Vec2 n_plus = n_field(+1);

  // Outer Lie derivative: R = L_eta N = -N'(0) - Deta(y, N(0)).
  const Vec2 dn = (1.0 / (2.0 * delta_s)) * (n_plus - n_minus);
  Vec2 deta_n;
  if (!try_spray_derivative(alg, curve, y, n_zero, deta_n, deta_step))
    throw DomainError("riemann_curvature: stencil leaves the admissible cone");
  return (-1.0) * dn - deta_n;
}

LambdaPartials unit_spray_coefficient_partials(const NormJet& jet) {
  const double f = jet.f, df = jet.df, d2f = jet.d2f;
  const double margin = convexity_margin(jet);
  if (!(margin > 0.0))
    throw ConvexityError("unit_spray_coefficient: margin is not positive");
  const double P = 2.0 * f * margin;  // 4 f^2 f'' - 2 f f'^2 + 8 f^3
  const double sqrtP = std::sqrt(P);
  const double ct = std::cos(jet.t), st = std::sin(jet.t);
  const double D = -2.0 * f * st - df * ct;
  if (std::abs(D) < 1e-14 * (2.0 * f + std::abs(df)))
    throw SingularityError("unit_spray_coefficient: spray vanishes at this angle");

  const double P_f = 8.0 * f * d2f - 2.0 * df * df + 24.0 * f * f;
  const double P_df = -4.0 * f * df;
  const double P_d2f = 4.0 * f * f;
  const double D_f = -2.0 * st;
  const double D_df = -ct;
  const double D_t = -2.0 * f * ct + df * st;

  LambdaPartials out;
  out.value = sqrtP / D;
  const double common = 1.0 / (2.0 * sqrtP * D);
  const double shift = sqrtP / (D * D);
  out.d_f = P_f * common - D_f * shift;
  out.d_df = P_df * common - D_df * shift;
  out.d_d2f = P_d2f * common;
  out.d_t = -D_t * shift;
  return out;
}

double unit_spray_coefficient(const NormJet& jet) {
  return unit_spray_coefficient_partials(jet).value;
}

double unit_spray_coefficient_derivative(const NormJet& jet) {
  const auto p = unit_spray_coefficient_partials(jet);
  return p.d_f * jet.df + p.d_df * jet.d2f + p.d_d2f * jet.d3f + p.d_t;
}

namespace {

// Clamp the stencil width so all probe angles stay inside the curve domain.
double fitted_step(const NormCurve& curve, double t, double step) {
  const double room =
      std::min(curve.domain().hi - t, t - curve.domain().lo) / 2.5;
  if (room <= 0.0)
    throw DomainError("difference stencil does not fit inside the curve domain");
  return std::min(step, room);
}

double rho_canonical(const NormJet& jet) {
  return spray_tangent_ratio(canonical_algebra(), jet);
}

void require_normalized(const LieAlgebra2& alg, const char* who) {
  if (alg.eps1 != 0.0 || std::abs(alg.eps2) != 1.0)
    throw ValidationError(std::string(who) +
                          ": basis must be normalized to [e1,e2] = +-e2");
}

}  // namespace

namespace {

// Flow-time derivative of log |lambda|,
//   w_s = d/ds ln|lambda| = (2f)^{3/2} (D_t / P - D P_t / (2 P^2)),
// with P = 2 f * margin and D = -2 f sin t - f' cos t.  Unlike lambda itself
// this is regular where the spray degenerates (the 1/D pole cancels against
// the flow rate), which keeps the difference stencil conditioned near
// truncation walls.
double log_lambda_flow_rate(const NormJet& jet) {
  const double f = jet.f, df = jet.df, d2f = jet.d2f, d3f = jet.d3f;
  const double margin = convexity_margin(jet);
  if (!(margin > 0.0))
    throw ConvexityError("flag_curvature: margin is not positive");
  const double P = 2.0 * f * margin;
  const double P_t = 4.0 * f * df * d2f + 4.0 * f * f * d3f - 2.0 * df * df * df +
                     24.0 * f * f * df;
  const double ct = std::cos(jet.t), st = std::sin(jet.t);
  const double D = -2.0 * f * st - df * ct;
  const double D_t = -df * st - (2.0 * f + d2f) * ct;
  const double pow_f = std::pow(2.0 * f, 1.5);
  return pow_f * (D_t / P - D * P_t / (2.0 * P * P));
}

}  // namespace

double flag_curvature(const LieAlgebra2& alg, const NormCurve& curve,
                      const NormJet& jet, double fd_step) {
  // The value is unchanged between [e1,e2] = e2 and [e1,e2] = -e2 (both rho
  // and lambda flip sign), so the canonical formulas serve both branches.
  require_normalized(alg, "flag_curvature");
  const double t0 = jet.t;
  const double h = fitted_step(curve, t0, fd_step);

  const NormJet j0 = curve.jet_at(t0);
  const double ct = std::cos(t0), st = std::sin(t0);
  const double D0 = -2.0 * j0.f * st - j0.df * ct;
  if (std::abs(D0) < 1e-14 * (2.0 * j0.f + std::abs(j0.df)))
    throw SingularityError("flag_curvature: spray vanishes at this angle");

  // K = -lambda''(s)/lambda = -(w_ss + w_s^2) for w = ln|lambda|, with
  // d/ds = -rho d/dt and the t-derivative of w_s taken by a fourth-order
  // centered difference on the curve.
  const auto ws = [&](double t) { return log_lambda_flow_rate(curve.jet_at(t)); };
  const double ws0 = ws(t0);
  const double ws_t =
      (-ws(t0 + 2 * h) + 8 * ws(t0 + h) - 8 * ws(t0 - h) + ws(t0 - 2 * h)) /
      (12.0 * h);
  const double rho = rho_canonical(j0);
  const double wss = -rho * ws_t;
  return -(wss + ws0 * ws0);
}

double cartan_cubed(const NormJet& jet, Vec2 w) {
  const Vec2 radial{std::cos(jet.t), std::sin(jet.t)};
  const Vec2 tangent = indicatrix_tangent(jet);
  // Solve w = alpha * radial + beta * tangent; cross(radial, tangent) never
  // vanishes (it equals 1/sqrt(2f)).
  const double denom = cross(radial, tangent);
  const double beta = cross(radial, w) / denom;
  return beta * beta * beta * cartan_scalar(jet);
}

double flag_curvature_via_riemann(const LieAlgebra2& alg, const NormCurve& curve,
                                  const NormJet& jet, double delta_s) {
  const Vec2 y = indicatrix_point(jet);
  const Vec2 tangent = indicatrix_tangent(jet);
  const Vec2 u = (1.0 / indicatrix_tangent_norm(jet)) * tangent;
  const Vec2 r = riemann_curvature(alg, curve, y, u, delta_s);
  const SymMat2 g = gram_in_basis(jet, norm(y));
  // Unit flag pole and g-orthonormal u: K = g(R u, u).
  return g.quad(r, u);
}

double landsberg_scalar(const LieAlgebra2& alg, const NormCurve& curve,
                        const NormJet& jet, double fd_step) {
  require_normalized(alg, "landsberg_scalar");
  const double t0 = jet.t;
  const double h = fitted_step(curve, t0, fd_step);
  const auto kappa = [&](double t) {
    return landsberg_first_integral(curve.jet_at(t));
  };
  return (-kappa(t0 + 2 * h) + 8 * kappa(t0 + h) - 8 * kappa(t0 - h) +
          kappa(t0 - 2 * h)) /
         (12.0 * h);
}

double landsberg_scalar_via_transport(const LieAlgebra2& alg,
                                      const NormCurve& curve, const NormJet& jet,
                                      double delta_s_scale) {
  require_normalized(alg, "landsberg_scalar_via_transport");
  const double rate = flow_time_rate(alg, jet);  // ds/dt at the base angle
  const double delta = delta_s_scale * std::abs(rate);

  const Vec2 y0 = indicatrix_point(jet);
  const Vec2 u0 = (1.0 / indicatrix_tangent_norm(jet)) * indicatrix_tangent(jet);
  std::vector<ode::State<4>> st;
  if (!local_joint_grid(alg, curve, {y0.y1, y0.y2, u0.y1, u0.y2}, delta, 2, 4, st))
    throw DomainError(
        "landsberg_scalar_via_transport: stencil leaves the admissible cone");

  // Cartan scalar of the transported unit field at each stencil point.
  auto cartan_at = [&](int k) {
    const Vec2 y = state_y(st[k + 2]);
    const Vec2 w = state_w(st[k + 2]);
    const NormJet j = curve.jet_at(polar_angle(y));
    return cartan_cubed(j, w);
  };
  const double dc_ds =
      (-cartan_at(2) + 8 * cartan_at(1) - 8 * cartan_at(-1) + cartan_at(-2)) /
      (12.0 * delta);
  // Convert the s-rate to the t-rate used by the jet-formula route.
  return dc_ds * rate;
}

}  // namespace finsler
