#ifndef FINSLER_BERWALD_HPP
#define FINSLER_BERWALD_HPP

#include <array>

#include "finsler/polar_norm.hpp"
#include "finsler/solvers.hpp"
#include "finsler/types.hpp"

namespace finsler {

// Coefficient matrix A = [[a, b], [c, d]] of the linear indicatrix flow
//   dy/dtheta = A y
// and of the first-order norm equation
//   (a y1 + b y2) dF/dy1 + (c y1 + d y2) dF/dy2 = 0.
// Norms annihilated by such a field with a c != 0 and a d - b c > 0 are
// exactly the Berwald ones of this geometry.
struct BerwaldMatrix {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  double trace() const { return a + d; }
  double det() const { return a * d - b * c; }
  // Discriminant of the characteristic polynomial, (a-d)^2 + 4bc.
  double discriminant() const { return (a - d) * (a - d) + 4 * b * c; }
  Vec2 apply(Vec2 y) const { return {a * y.y1 + b * y.y2, c * y.y1 + d * y.y2}; }
};

void require_valid(const BerwaldMatrix& m);

// Matrix exponential exp(theta A) by the spectral closed forms (real pair,
// complex pair, defective), applied to a vector.
Vec2 matrix_exp_apply(const BerwaldMatrix& m, double theta, Vec2 y0);

// Unique matrix (with the normalizations a0 -> 1/2, c = 1) whose Berwald norm
// has the same initial jet as the seed.  The output satisfies a != 0, c = 1
// and a d - b > 0 for every admissible seed.
BerwaldMatrix berwald_matrix_from_seed(const SeedJet& seed);

// Indicatrix arc y(theta) = exp(theta A) (1/sqrt(2 a0), 0).  The usable theta
// range is trimmed at construction where the polar angle stops being
// monotone or the arc leaves the half-plane y1 > 0.
class IndicatrixArc {
public:
  IndicatrixArc(const BerwaldMatrix& m, double a0, Interval theta_span,
                bool truncated = false);

  Vec2 at(double theta) const;
  const BerwaldMatrix& matrix() const { return m_; }
  double a0() const { return a0_; }
  const Interval& theta_span() const { return span_; }
  bool truncated() const { return truncated_; }

private:
  BerwaldMatrix m_;
  double a0_;
  Interval span_;
  bool truncated_ = false;
};

IndicatrixArc indicatrix_from_matrix(const BerwaldMatrix& m, double a0,
                                     Interval theta_span = {-40.0, 40.0});

// Polar profile of the norm whose unit level set is the arc: inverts the
// monotone angle map t(theta) and produces jets up to f''' by the chain rule
// through the closed-form exponential.
NormCurve norm_from_indicatrix(const IndicatrixArc& arc);

// Explicit Berwald families, by Jordan type of the flow matrix:
//   case 1 (complex pair):  f(t) = mu * exp(-2 lambda t),        lambda >= 0
//   case 2 (real distinct): f(t) = mu cos^(2-lambda) t sin^lambda t, lambda > 2
//   case 3 (defective):     f(t) = mu cos^2 t exp(-2 lambda tan t),  lambda > 0
// with mu > 0 in every case.
struct CatalogParams {
  int case_id = 1;
  double lambda = 0.0;
  double mu = 0.5;
};

void require_valid(const CatalogParams& p);

// Default domains: case 1 [-0.75, 0.75]; case 2 [0.2, 1.2] (the profile lives
// in (0, pi/2)); case 3 [-0.6, 0.6].
NormCurve catalog_norm(const CatalogParams& p);
NormCurve catalog_norm(const CatalogParams& p, Interval domain);

// Least-squares fit of the spray components by quadratic forms in (y1, y2).
// coeff[i] = {y1^2, y1 y2, y2^2} coefficients of component i; residual is the
// maximum absolute misfit over the sample grid divided by the largest spray
// magnitude.  A residual at rounding level certifies the Berwald property.
struct QuadraticSprayFit {
  std::array<std::array<double, 3>, 2> coeff{};
  double residual = 0.0;
};

QuadraticSprayFit fit_spray_quadratic(const LieAlgebra2& alg,
                                      const NormCurve& curve,
                                      int angle_samples = 25);

double spray_quadratic_residual(const LieAlgebra2& alg, const NormCurve& curve,
                                int angle_samples = 25);

// Scale-invariant residual of the norm equation: max over sample rays of
//   |(a y1 + b y2) dF/dy1 + (c y1 + d y2) dF/dy2| / (F |m|_F),
// with the gradient taken analytically from the polar jet and |m|_F the
// Frobenius norm of the matrix (so the value is invariant under m -> 2m).
double berwald_pde_residual(const BerwaldMatrix& m, const NormCurve& curve,
                            int angle_samples = 41);

}  // namespace finsler

#endif
