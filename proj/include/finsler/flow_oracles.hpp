#ifndef FINSLER_FLOW_ORACLES_HPP
#define FINSLER_FLOW_ORACLES_HPP

#include <vector>

#include "finsler/lie_spray.hpp"
#include "finsler/ode.hpp"
#include "finsler/polar_norm.hpp"
#include "finsler/types.hpp"

namespace finsler {

// Outcome of a flow integration.
enum class FlowStatus {
  Completed,   // covered the requested span
  Boundary,    // stopped where the curve's conic domain or convexity ends
  Stationary,  // the spray vanishes at the initial point
  Underflow,   // step size collapsed (spray too close to zero mid-run)
};

// Integral curve of the negative spray field, y'(s) = -eta(y(s)).  These are
// the algebra-side images of unit-speed geodesics, so F(y(s)) is conserved.
class Trajectory {
public:
  Trajectory(ode::Solution<2> sol, FlowStatus status);

  Vec2 at(double s) const;
  double s_begin() const;
  double s_end() const;  // last covered s (equals the requested end iff Completed)
  FlowStatus status() const { return status_; }
  const std::vector<ode::Node<2>>& samples() const { return sol_.nodes; }

private:
  ode::Solution<2> sol_;
  FlowStatus status_;
};

struct FlowOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double max_step = 2e-3;
};

// Solve y' = -eta(y) from y0 over s in [0, s_end] (s_end may be negative).
// Stops early with a Boundary report when the angle approaches the domain
// edge or the convexity margin collapses (margin < 1e-6 * 4 f^2 or f < 1e-8).
Trajectory geodesic_flow(const LieAlgebra2& alg, const NormCurve& curve, Vec2 y0,
                         double s_end, const FlowOptions& opt = {});

// Linearly parallel field along a geodesic: solves
//   w'(s) + N(y(s), w(s)) + [y(s), w(s)] = 0,  w(0) = w0,
// co-integrated with the base flow at the same tolerance.
class ParallelField {
public:
  ParallelField(ode::Solution<4> sol, FlowStatus status);

  Vec2 base_at(double s) const;   // y(s)
  Vec2 value_at(double s) const;  // w(s)
  double s_end() const;
  FlowStatus status() const { return status_; }

private:
  ode::Solution<4> sol_;
  FlowStatus status_;
};

ParallelField parallel_transport(const LieAlgebra2& alg, const NormCurve& curve,
                                 Vec2 y0, Vec2 w0, double s_end,
                                 const FlowOptions& opt = {});

// Riemann curvature operator R_y w, computed through the flow of the spray:
// R w = L_eta N with N = -L_eta w, each Lie derivative realized as a centered
// finite difference of parallel-transport data over +-delta_s.  Requires
// eta(y) != 0.
Vec2 riemann_curvature(const LieAlgebra2& alg, const NormCurve& curve, Vec2 y,
                       Vec2 w, double delta_s = 1e-4);

// Flag curvature K at the indicatrix point of angle jet.t, computed as
// -lambda''(s)/lambda(s) where lambda = 1/(rho * |dy/dt|_g) is the
// coefficient with  u = lambda * eta  for the g-unit tangent u.  The s-chain
// rule runs through the flow-time rate; differences are taken on log|lambda|,
// whose flow derivative stays regular near spray degeneracies, with a
// centered stencil of width fd_step on the curve.  Requires rho(jet.t) != 0.
double flag_curvature(const LieAlgebra2& alg, const NormCurve& curve,
                      const NormJet& jet, double fd_step = 2e-3);

// Same K obtained from the riemann_curvature pipeline (independent route,
// used for cross-checking): K = g_y(R_y u, u) for the unit tangent u.
double flag_curvature_via_riemann(const LieAlgebra2& alg, const NormCurve& curve,
                                  const NormJet& jet, double delta_s = 1e-4);

// Unit-tangent coefficient lambda(t) = 1/(rho(t) |dy/dt|_g) and its analytic
// t-derivative (the derivative consumes jet.d3f).  Explicitly,
//   lambda = sqrt(2 f * margin) / (-2 f sin t - f' cos t).
double unit_spray_coefficient(const NormJet& jet);
double unit_spray_coefficient_derivative(const NormJet& jet);

// Partial derivatives of lambda with respect to the jet entries, used to
// recover f''' from a known dlambda/dt.
struct LambdaPartials {
  double value = 0.0;
  double d_f = 0.0;
  double d_df = 0.0;
  double d_d2f = 0.0;
  double d_t = 0.0;
};
LambdaPartials unit_spray_coefficient_partials(const NormJet& jet);

// t-derivative of the Cartan scalar of the g-unit tangent field,
//   d/dt [ (f'/f + f'''/(4f)) / (margin^{3/2} / (8 f^3)) ],
// computed by a fourth-order centered difference on the curve.  Vanishes
// identically exactly when the metric is Landsberg.
double landsberg_scalar(const LieAlgebra2& alg, const NormCurve& curve,
                        const NormJet& jet, double fd_step = 1e-3);

// The same quantity measured through parallel transport: the Cartan scalar of
// a parallel unit field differentiated along the flow parameter and converted
// by ds/dt.  Independent of the jet-formula route above.
double landsberg_scalar_via_transport(const LieAlgebra2& alg,
                                      const NormCurve& curve, const NormJet& jet,
                                      double delta_s_scale = 1e-3);

// Cartan tensor C_y(w, w, w) at the indicatrix point of angle jet.t for an
// arbitrary vector w (decomposed against the radial/tangent frame).
double cartan_cubed(const NormJet& jet, Vec2 w);

}  // namespace finsler

#endif
