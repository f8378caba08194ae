#ifndef FINSLER_LIE_SPRAY_HPP
#define FINSLER_LIE_SPRAY_HPP

#include "finsler/polar_norm.hpp"
#include "finsler/types.hpp"

namespace finsler {

// Spray vector field of the left-invariant norm at y = r (cos t, sin t),
// where t = jet.t.  Defined by g_y(eta(y), u) = g_y(y, [u, y]); positively
// 2-homogeneous and g_y-orthogonal to y.  Throws SingularityError when the
// convexity margin vanishes.
Vec2 spray_vector(const LieAlgebra2& alg, const NormJet& jet, double r);

// Scalar ratio rho(t) with  spray(y(t)) = rho(t) * d/dt y(t)  along the
// indicatrix.  Requires alg = (0, +-1).  For (0,1):
//   rho = sqrt(2f) (-2 f sin t - f' cos t) / margin.
double spray_tangent_ratio(const LieAlgebra2& alg, const NormJet& jet);

// Rate ds/dt = -1/rho(t) of the flow-time parameter s that turns the
// indicatrix into an integral curve of the negative spray.  Throws
// SingularityError where rho = 0.
double flow_time_rate(const LieAlgebra2& alg, const NormJet& jet);

// Connection operator N(y, v) = (1/2) D eta(y, v) - (1/2)[y, v].  The
// directional derivative is a centered finite difference in the plane with
// relative step `step` scaled by |y|/|v|.  Throws DomainError when the
// probe points leave the curve's conic domain.
Vec2 connection_operator(const LieAlgebra2& alg, const NormCurve& curve, Vec2 y,
                         Vec2 v, double step = 1e-5);

// Directional derivative D eta(y, v) by the same centered difference.
Vec2 spray_derivative(const LieAlgebra2& alg, const NormCurve& curve, Vec2 y,
                      Vec2 v, double step = 1e-5);

// Spray evaluated at an arbitrary admissible point of the curve's cone.
Vec2 spray_at(const LieAlgebra2& alg, const NormCurve& curve, Vec2 y);

// The problem ([e1,e2] = -e2, profile f) is equivalent to ([e1,e2] = e2,
// profile t -> f(-t)) under the reflection T(y1, y2) = (y1, -y2).  T is an
// anti-isomorphism of the algebras, so points and sprays transform with
// opposite signs:
//   eta_neg(y; f) = -T eta_can(T y; f(-.)),
// flow time reverses, and the profile solvers are untouched (their equations
// are identical on both branches).  This helper packages the substitution so
// all solvers can fix eps = (0, 1).
struct Reorientation {
  bool flipped = false;  // true when the input algebra was (0, -1)

  double angle(double t) const { return flipped ? -t : t; }
  // points reflect across the e1-axis
  Vec2 point(Vec2 y) const { return flipped ? Vec2{y.y1, -y.y2} : y; }
  // bracket-linear fields (spray, connection values) reflect with a sign
  Vec2 field(Vec2 v) const { return flipped ? Vec2{-v.y1, v.y2} : v; }
  NormJet jet(const NormJet& j) const {
    if (!flipped) return j;
    return NormJet{-j.t, j.f, -j.df, j.d2f, -j.d3f};
  }
};
Reorientation reorient_to_canonical(const LieAlgebra2& alg);

}  // namespace finsler

#endif
