#ifndef FINSLER_SOLVERS_HPP
#define FINSLER_SOLVERS_HPP

#include <optional>

#include "finsler/polar_norm.hpp"
#include "finsler/types.hpp"

namespace finsler {

// Initial jet (f, f', f'', f''')(0) for the profile solvers.  Admissible
// seeds form the open set
//   a0 > 0,  a1 != 0,  2 a0 a2 - a1^2 + 4 a0^2 > 0.
struct SeedJet {
  double a0 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;

  double margin() const { return 2 * a0 * a2 - a1 * a1 + 4 * a0 * a0; }
  bool admissible() const { return a0 > 0 && a1 != 0 && margin() > 0; }

  NormJet jet() const { return NormJet{0.0, a0, a1, a2, a3}; }
};

// Throws ValidationError with a message naming the violated constraint.
void require_admissible(const SeedJet& seed);

// Conserved quantity of the Landsberg condition: the Cartan scalar of the
// g-unit tangent field,
//   kappa = (f'/f + f'''/(4f)) / (margin^{3/2} / (8 f^3)).
// Constant along a profile exactly when the metric is Landsberg.
double landsberg_first_integral(const NormJet& jet);

// Coefficient lambda in u = lambda * eta on the indicatrix (g-unit tangent u):
//   lambda = sqrt(2 f * margin) / (-2 f sin t - f' cos t).
// Throws SingularityError when the denominator vanishes.
double cfc_lambda(const NormJet& jet);

struct SolveOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double max_step = 2e-3;
};

// One-sided truncation information for a solved curve.
struct SolveReport {
  bool truncated_lo = false;
  bool truncated_hi = false;
  std::string message;  // empty when the full span was covered
};

// Integrate the Landsberg profile from the seed: the first integral kappa is
// fixed by the seed and the explicit third-order system
//   f''' = kappa * margin^{3/2} / (2 f^2) - 4 f'
// is solved over t_span (which must contain 0).  The returned curve has
// jet_at(0) equal to the seed and constant first integral along it.  On
// convexity loss inside t_span the domain is truncated and reported.
NormCurve solve_landsberg(const SeedJet& seed, Interval t_span = {-0.15, 0.15},
                          const SolveOptions& opt = {},
                          SolveReport* report = nullptr);

// Integrate the constant-flag-curvature profile: state (f, f', lambda, mu)
// with mu = d lambda/ds, where f'' is recovered algebraically from lambda and
// lambda''(s) = -c lambda(s) is enforced through the flow-time chain rule.
// Flag curvature along the result equals c.  Truncates where the spray
// tangent ratio degenerates or convexity fails.
NormCurve solve_constant_curvature(const SeedJet& seed, double c,
                                   Interval t_span = {-0.15, 0.15},
                                   const SolveOptions& opt = {},
                                   SolveReport* report = nullptr);

}  // namespace finsler

#endif
