#include "finsler/lie_spray.hpp"

#include <cmath>

namespace finsler {

Vec2 spray_vector(const LieAlgebra2& alg, const NormJet& jet, double r) {
  if (!(r > 0.0)) throw DomainError("spray_vector: r must be positive");
  if (!(jet.f > 0.0))
    throw DomainError("spray_vector: profile value must be positive");
  const double margin = convexity_margin(jet);
  if (!(margin > 0.0))
    throw SingularityError("spray_vector: convexity margin vanishes");
  const double ct = std::cos(jet.t), st = std::sin(jet.t);
  const double y1 = r * ct, y2 = r * st;
  const double f = jet.f, df = jet.df;
  const double scale =
      -2.0 * f *
      (2.0 * f * (alg.eps1 * y1 + alg.eps2 * y2) +
       (-alg.eps1 * y2 + alg.eps2 * y1) * df) /
      margin;
  const double slope = df / (2.0 * f);
  return {scale * (-y2 - y1 * slope), scale * (y1 - y2 * slope)};
}

double spray_tangent_ratio(const LieAlgebra2& alg, const NormJet& jet) {
  if (alg.eps1 != 0.0 || std::abs(alg.eps2) != 1.0)
    throw ValidationError(
        "spray_tangent_ratio: basis must be normalized to [e1,e2] = +-e2");
  const double margin = convexity_margin(jet);
  if (!(margin > 0.0))
    throw SingularityError("spray_tangent_ratio: convexity margin vanishes");
  const double f = jet.f, df = jet.df;
  const double num = -2.0 * f * std::sin(jet.t) - df * std::cos(jet.t);
  return alg.eps2 * std::sqrt(2.0 * f) * num / margin;
}

double flow_time_rate(const LieAlgebra2& alg, const NormJet& jet) {
  const double rho = spray_tangent_ratio(alg, jet);
  if (rho == 0.0 || !std::isfinite(rho))
    throw SingularityError(
        "flow_time_rate: spray vanishes on the indicatrix at this angle");
  return -1.0 / rho;
}

Vec2 spray_at(const LieAlgebra2& alg, const NormCurve& curve, Vec2 y) {
  const double r = norm(y);
  if (!(r > 0.0)) throw DomainError("spray_at: zero vector");
  const NormJet jet = curve.jet_at(polar_angle(y));
  return spray_vector(alg, jet, r);
}

Vec2 spray_derivative(const LieAlgebra2& alg, const NormCurve& curve, Vec2 y,
                      Vec2 v, double step) {
  const double ny = norm(y), nv = norm(v);
  if (!(ny > 0.0)) throw DomainError("spray_derivative: zero base point");
  if (!(nv > 0.0)) return {0.0, 0.0};
  const double h = step * ny / nv;
  const Vec2 plus = spray_at(alg, curve, y + h * v);
  const Vec2 minus = spray_at(alg, curve, y - h * v);
  return (1.0 / (2.0 * h)) * (plus - minus);
}

Vec2 connection_operator(const LieAlgebra2& alg, const NormCurve& curve, Vec2 y,
                         Vec2 v, double step) {
  const Vec2 deriv = spray_derivative(alg, curve, y, v, step);
  const Vec2 br = alg.bracket(y, v);
  return 0.5 * deriv - 0.5 * br;
}

Reorientation reorient_to_canonical(const LieAlgebra2& alg) {
  if (alg.eps1 == 0.0 && alg.eps2 == 1.0) return Reorientation{false};
  if (alg.eps1 == 0.0 && alg.eps2 == -1.0) return Reorientation{true};
  throw ValidationError(
      "reorient_to_canonical: algebra must be normalized to [e1,e2] = +-e2");
}

}  // namespace finsler
