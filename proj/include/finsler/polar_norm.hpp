#ifndef FINSLER_POLAR_NORM_HPP
#define FINSLER_POLAR_NORM_HPP

#include <array>
#include <functional>
#include <memory>
#include <string>

#include "finsler/types.hpp"

namespace finsler {

// A conic Minkowski norm F = r sqrt(2 f(t)) is described by the polar profile
// f.  NormJet is the 3-jet of f at one angle; it is all the pointwise data the
// metric, Cartan and spray formulas need.
struct NormJet {
  double t = 0.0;    // angle (radians)
  double f = 0.0;    // profile value, must be positive for a norm
  double df = 0.0;   // f'
  double d2f = 0.0;  // f''
  double d3f = 0.0;  // f'''
};

// Strong-convexity certificate 2 f f'' - f'^2 + 4 f^2.  Positive exactly when
// the norm is strongly convex at this angle.
double convexity_margin(const NormJet& jet);

// Fundamental tensor in the orthogonal polar frame {dr, dt - (r f'/2f) dr}:
// returns (g_rr, g_rt, g_tt) = (2f, 0, (r^2/2f) * margin).
struct PolarGram {
  double g_rr = 0.0;
  double g_rt = 0.0;
  double g_tt = 0.0;
};
PolarGram polar_gram(const NormJet& jet, double r);

// Fundamental tensor g_y as a symmetric matrix in the basis {e1, e2}.
// Throws ConvexityError when the margin is not positive.
struct SymMat2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a22 = 0.0;

  Vec2 apply(Vec2 v) const {
    return {a11 * v.y1 + a12 * v.y2, a12 * v.y1 + a22 * v.y2};
  }
  double quad(Vec2 u, Vec2 v) const { return dot(u, apply(v)); }
  double det() const { return a11 * a22 - a12 * a12; }
};
SymMat2 gram_in_basis(const NormJet& jet, double r);

// Cartan tensor evaluated on the indicatrix tangent direction:
// C(dy/dt, dy/dt, dy/dt) = f'/f + f'''/(4f).  Together with the rule that C
// vanishes on the radial direction this determines the whole tensor.
double cartan_scalar(const NormJet& jet);

// Point of the indicatrix F = 1 at this angle: (cos t, sin t)/sqrt(2f).
Vec2 indicatrix_point(const NormJet& jet);

// Tangent vector d/dt of the indicatrix parametrization, in the e-basis.
Vec2 indicatrix_tangent(const NormJet& jet);

// g-norm of indicatrix_tangent: sqrt(margin)/(2f).
double indicatrix_tangent_norm(const NormJet& jet);

// F(y) for the norm whose profile at polar_angle(y) is the given jet.
double norm_value(const NormJet& jet, double r);

// How a NormCurve was produced.
enum class CurveKind {
  SolvedLandsberg,
  SolvedConstantCurvature,
  CatalogCase1,
  CatalogCase2,
  CatalogCase3,
  MatrixIndicatrix,
  Custom,
};

const char* to_string(CurveKind kind);

// Evaluation backend of a NormCurve.  Implementations must be pure and safe
// to call concurrently.
class JetSource {
public:
  virtual ~JetSource() = default;
  virtual NormJet jet(double t) const = 0;
};

// A profile t -> NormJet on a closed interval, with positivity and convexity
// certified on a sample grid at construction.  Immutable afterwards.
class NormCurve {
public:
  NormCurve(Interval domain, CurveKind kind, std::shared_ptr<const JetSource> source,
            int certificate_samples = 257);

  const Interval& domain() const { return domain_; }
  CurveKind kind() const { return kind_; }

  // Throws DomainError for t outside the domain.  The returned jet satisfies
  // jet.t == t.
  NormJet jet_at(double t) const;

  // Smallest convexity margin and smallest f seen by the certificate grid.
  double min_margin() const { return min_margin_; }
  double min_f() const { return min_f_; }

private:
  Interval domain_;
  CurveKind kind_;
  std::shared_ptr<const JetSource> source_;
  double min_margin_ = 0.0;
  double min_f_ = 0.0;
};

// Profile given by closed-form callables for f and its first three
// derivatives.  Used for round norms, trigonometric-polynomial profiles and
// perturbation tests.
using ProfileFn = std::function<double(double)>;
NormCurve make_analytic_curve(Interval domain, ProfileFn f, ProfileFn df,
                              ProfileFn d2f, ProfileFn d3f,
                              CurveKind kind = CurveKind::Custom);

// Round profile f == f0 (the norm is a scaled Euclidean circle).
NormCurve make_round_curve(double f0, Interval domain = {-1.5, 1.5});

// Riemannian profile of the inner product with Gram matrix
// [[q11, q12], [q12, q22]]:  f(t) = (q11 cos^2 t + 2 q12 sin t cos t
// + q22 sin^2 t)/2.
NormCurve make_quadratic_curve(double q11, double q12, double q22,
                               Interval domain = {-1.5, 1.5});

}  // namespace finsler

#endif
