#include "finsler/solvers.hpp"

#include <cmath>
#include <memory>
#include <utility>

#include "finsler/flow_oracles.hpp"
#include "finsler/ode.hpp"

namespace finsler {

namespace {

constexpr double kMarginGuardFactor = 1e-6;  // halt when margin < 1e-6 * 4 f^2
constexpr double kMinProfile = 1e-8;         // halt when f < 1e-8

bool margin_ok(double f, double margin) {
  return f > kMinProfile && margin > kMarginGuardFactor * 4.0 * f * f;
}

}  // namespace

void require_admissible(const SeedJet& seed) {
  require_finite(seed.a0, "seed.a0");
  require_finite(seed.a1, "seed.a1");
  require_finite(seed.a2, "seed.a2");
  require_finite(seed.a3, "seed.a3");
  if (!(seed.a0 > 0.0))
    throw ValidationError("seed outside the admissible set: a0 must be positive");
  if (seed.a1 == 0.0)
    throw ValidationError("seed outside the admissible set: a1 must be nonzero");
  if (!(seed.margin() > 0.0))
    throw ValidationError(
        "seed outside the admissible set: 2 a0 a2 - a1^2 + 4 a0^2 must be positive");
}

double landsberg_first_integral(const NormJet& jet) {
  const double margin = convexity_margin(jet);
  if (!(margin > 0.0))
    throw ConvexityError("landsberg_first_integral: margin is not positive");
  const double f = jet.f;
  const double numerator = jet.df / f + jet.d3f / (4.0 * f);
  const double denominator = std::pow(margin, 1.5) / (8.0 * f * f * f);
  return numerator / denominator;
}

double cfc_lambda(const NormJet& jet) { return unit_spray_coefficient(jet); }

namespace {

// ---- Landsberg profile: third-order system closed by the first integral ----

class LandsbergSource final : public JetSource {
public:
  LandsbergSource(ode::Solution<3> neg, ode::Solution<3> pos, double kappa)
      : neg_(std::move(neg)), pos_(std::move(pos)), kappa_(kappa) {}

  NormJet jet(double t) const override {
    const ode::State<3> y = t < 0 ? neg_.eval(t) : pos_.eval(t);
    NormJet j{t, y[0], y[1], y[2], 0.0};
    j.d3f = third_derivative(j);
    return j;
  }

  double third_derivative(const NormJet& j) const {
    const double margin = convexity_margin(j);
    return kappa_ * std::pow(margin, 1.5) / (2.0 * j.f * j.f) - 4.0 * j.df;
  }

private:
  ode::Solution<3> neg_, pos_;
  double kappa_;
};

ode::Options solver_ode_options(const SolveOptions& opt) {
  ode::Options o;
  o.abs_tol = opt.abs_tol;
  o.rel_tol = opt.rel_tol;
  o.max_step = opt.max_step;
  o.initial_step = std::min(1e-4, opt.max_step);
  return o;
}

void note_truncation(SolveReport* report, bool hi_side, double reached,
                     const char* why) {
  if (!report) return;
  if (hi_side)
    report->truncated_hi = true;
  else
    report->truncated_lo = true;
  if (!report->message.empty()) report->message += "; ";
  report->message += std::string(why) + " at t = " + std::to_string(reached);
}

}  // namespace

NormCurve solve_landsberg(const SeedJet& seed, Interval t_span,
                          const SolveOptions& opt, SolveReport* report) {
  require_admissible(seed);
  if (!(t_span.lo <= 0.0 && 0.0 <= t_span.hi) || !(t_span.lo < t_span.hi))
    throw ValidationError("solve_landsberg: t_span must contain 0");
  const double kappa = landsberg_first_integral(seed.jet());

  ode::Rhs<3> rhs = [kappa](double, const ode::State<3>& y, ode::State<3>& dy) {
    const double f = y[0], df = y[1], d2f = y[2];
    if (!(f > kMinProfile)) return false;
    const double margin = 2 * f * d2f - df * df + 4 * f * f;
    if (!(margin > 0.0)) return false;
    dy[0] = df;
    dy[1] = d2f;
    dy[2] = kappa * std::pow(margin, 1.5) / (2.0 * f * f) - 4.0 * df;
    return true;
  };
  ode::Guard<3> guard = [](double, const ode::State<3>& y) {
    const double margin = 2 * y[0] * y[2] - y[1] * y[1] + 4 * y[0] * y[0];
    return margin_ok(y[0], margin);
  };

  const ode::State<3> y0{seed.a0, seed.a1, seed.a2};
  const ode::Options oo = solver_ode_options(opt);
  ode::Solution<3> neg = ode::integrate_dp54<3>(rhs, 0.0, y0, t_span.lo, oo, guard);
  ode::Solution<3> pos = ode::integrate_dp54<3>(rhs, 0.0, y0, t_span.hi, oo, guard);

  Interval domain{neg.last_x, pos.last_x};
  if (!neg.completed()) note_truncation(report, false, neg.last_x, "convexity lost");
  if (!pos.completed()) note_truncation(report, true, pos.last_x, "convexity lost");
  if (!(domain.lo < domain.hi))
    throw ConvexityError("solve_landsberg: admissible interval collapsed at the seed");

  auto src = std::make_shared<LandsbergSource>(std::move(neg), std::move(pos), kappa);
  return NormCurve(domain, CurveKind::SolvedLandsberg, std::move(src));
}

namespace {

// ---- Constant flag curvature: state (f, f', lambda, mu), mu = dlambda/ds ----
//
// The coefficient lambda = sqrt(2 f * margin) / D with D = -2 f sin t - f' cos t
// carries f'' implicitly, so the fourth-order profile equation reduces to this
// first-order system; lambda''(s) = -c lambda(s) enters through mu.

struct CfcTerms {
  double D;        // -2 f sin t - f' cos t
  double margin;   // recovered from lambda: lambda^2 D^2 / (2 f)
  double d2f;      // recovered from margin
  double ds_dt;    // -lambda^2 D / (2f)^{3/2}
};

bool cfc_terms(double t, const ode::State<4>& y, CfcTerms& out) {
  const double f = y[0], df = y[1], lam = y[2];
  if (!(f > kMinProfile)) return false;
  const double D = -2.0 * f * std::sin(t) - df * std::cos(t);
  if (std::abs(D) < 1e-14 * (2.0 * f + std::abs(df))) return false;
  const double margin = lam * lam * D * D / (2.0 * f);
  if (!(margin > 0.0)) return false;
  out.D = D;
  out.margin = margin;
  out.d2f = (margin + df * df - 4.0 * f * f) / (2.0 * f);
  out.ds_dt = -lam * lam * D / std::pow(2.0 * f, 1.5);
  return true;
}

// f''' recovered from the analytic t-derivative of the lambda relation.
double cfc_third_derivative(const NormJet& j2, double lambda_t) {
  const auto part = unit_spray_coefficient_partials(j2);
  return (lambda_t - (part.d_f * j2.df + part.d_df * j2.d2f + part.d_t)) / part.d_d2f;
}

class CfcSource final : public JetSource {
public:
  CfcSource(ode::Solution<4> neg, ode::Solution<4> pos)
      : neg_(std::move(neg)), pos_(std::move(pos)) {}

  NormJet jet(double t) const override {
    const ode::State<4> y = t < 0 ? neg_.eval(t) : pos_.eval(t);
    CfcTerms terms{};
    if (!cfc_terms(t, y, terms))
      throw SingularityError("constant-curvature profile degenerate at this angle");
    NormJet j{t, y[0], y[1], terms.d2f, 0.0};
    const double lambda_t = y[3] * terms.ds_dt;  // dlambda/dt = mu ds/dt
    j.d3f = cfc_third_derivative(j, lambda_t);
    return j;
  }

private:
  ode::Solution<4> neg_, pos_;
};

}  // namespace

NormCurve solve_constant_curvature(const SeedJet& seed, double c, Interval t_span,
                                   const SolveOptions& opt, SolveReport* report) {
  require_admissible(seed);
  require_finite(c, "curvature c");
  if (!(t_span.lo <= 0.0 && 0.0 <= t_span.hi) || !(t_span.lo < t_span.hi))
    throw ValidationError("solve_constant_curvature: t_span must contain 0");

  const NormJet j0 = seed.jet();
  const double lam0 = unit_spray_coefficient(j0);
  const double lam_t0 = unit_spray_coefficient_derivative(j0);
  const LieAlgebra2 alg = canonical_algebra();
  const double rate0 = flow_time_rate(alg, j0);  // ds/dt at the seed
  const double mu0 = lam_t0 / rate0;

  ode::Rhs<4> rhs = [c](double t, const ode::State<4>& y, ode::State<4>& dy) {
    CfcTerms terms{};
    if (!cfc_terms(t, y, terms)) return false;
    if (!std::isfinite(terms.ds_dt) || std::abs(terms.ds_dt) > 1e12) return false;
    dy[0] = y[1];
    dy[1] = terms.d2f;
    dy[2] = y[3] * terms.ds_dt;       // dlambda/dt
    dy[3] = -c * y[2] * terms.ds_dt;  // dmu/dt, encodes lambda'' = -c lambda
    return true;
  };
  // The reduced system is polynomial in the state, so it would happily cross
  // the spray singularity D = 0 onto a branch where the convexity margin is
  // pinched to zero; the true coefficient lambda has a pole there instead.
  // Detect the crossing by the sign of D relative to the seed.
  const double d_sign = seed.a1 > 0 ? -1.0 : 1.0;  // sign of D(0) = -a1
  ode::Guard<4> guard = [d_sign](double t, const ode::State<4>& y) {
    CfcTerms terms{};
    if (!cfc_terms(t, y, terms)) return false;
    return margin_ok(y[0], terms.margin) &&
           terms.D * d_sign > 1e-8 * (2.0 * y[0] + std::abs(y[1]));
  };

  const ode::State<4> y0{seed.a0, seed.a1, lam0, mu0};
  const ode::Options oo = solver_ode_options(opt);
  ode::Solution<4> neg = ode::integrate_dp54<4>(rhs, 0.0, y0, t_span.lo, oo, guard);
  ode::Solution<4> pos = ode::integrate_dp54<4>(rhs, 0.0, y0, t_span.hi, oo, guard);

  Interval domain{neg.last_x, pos.last_x};
  if (!neg.completed())
    note_truncation(report, false, neg.last_x, "profile degenerate");
  if (!pos.completed())
    note_truncation(report, true, pos.last_x, "profile degenerate");
  if (!(domain.lo < domain.hi))
    throw SingularityError(
        "solve_constant_curvature: admissible interval collapsed at the seed");

  auto src = std::make_shared<CfcSource>(std::move(neg), std::move(pos));
  return NormCurve(domain, CurveKind::SolvedConstantCurvature, std::move(src));
}

}  // namespace finsler
