#include "finsler/berwald.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <vector>

#include "finsler/lie_spray.hpp"

namespace finsler {

namespace {

constexpr double kMarginGuardFactor = 1e-6;
constexpr double kMinProfile = 1e-8;
constexpr double kDefectiveThreshold = 1e-12;  // on |(a-d)^2 + 4bc|

}  // namespace

void require_valid(const BerwaldMatrix& m) {
  require_finite(m.a, "matrix.a");
  require_finite(m.b, "matrix.b");
  require_finite(m.c, "matrix.c");
  require_finite(m.d, "matrix.d");
  if (m.a * m.c == 0.0)
    throw ValidationError("matrix must satisfy a*c != 0");
  if (!(m.det() > 0.0))
    throw ValidationError("matrix must satisfy a*d - b*c > 0");
}

Vec2 matrix_exp_apply(const BerwaldMatrix& m, double theta, Vec2 y0) {
  const double mean = 0.5 * m.trace();
  const double disc = m.discriminant();
  // exp(theta A) = e^{mean theta} (phi0 I + phi1 (A - mean I)) with phi0, phi1
  // depending on the spectral type of the traceless part.
  double phi0, phi1;
  if (std::abs(disc) < kDefectiveThreshold) {
    phi0 = 1.0;
    phi1 = theta;
  } else if (disc > 0.0) {
    const double w = 0.5 * std::sqrt(disc);
    phi0 = std::cosh(w * theta);
    phi1 = std::sinh(w * theta) / w;
  } else {
    const double w = 0.5 * std::sqrt(-disc);
    phi0 = std::cos(w * theta);
    phi1 = std::sin(w * theta) / w;
  }
  const double scale = std::exp(mean * theta);
  const Vec2 by{(m.a - mean) * y0.y1 + m.b * y0.y2,
                m.c * y0.y1 + (m.d - mean) * y0.y2};
  return scale * (phi0 * y0 + phi1 * by);
}

BerwaldMatrix berwald_matrix_from_seed(const SeedJet& seed) {
  require_admissible(seed);
  // Normalize the profile scale to a0 = 1/2; the norm equation is invariant
  // under that rescaling, so the matched matrix is shared.
  const double k = 1.0 / (2.0 * seed.a0);
  const double n1 = seed.a1 * k, n2 = seed.a2 * k, n3 = seed.a3 * k;
  const double c0 = n1;
  const double c1 = n2 - 2.0 * n1 * n1;
  const double c2 = 0.5 * n3 - 3.0 * n1 * n2 + 4.0 * n1 * n1 * n1;
  const double m = c1 + c0 * c0 + 1.0;  // normalized admissibility margin, > 0
  BerwaldMatrix out;
  out.a = -c0;
  out.c = 1.0;
  out.d = -(c2 + 2.0 * c1 * c0 + c0 * c0 * c0 + c0) / m;
  out.b = out.a * out.d - m;
  return out;
}

namespace {

// Jets of the reconstructed profile at a point of the arc, by the chain rule
// through the closed-form exponential.
struct ArcJet {
  double theta;
  double t;
  double t_theta;  // dt/dtheta = cross(y, Ay)/|y|^2
  NormJet jet;
  double y1;
};

ArcJet arc_jet(const BerwaldMatrix& m, Vec2 y0, double theta) {
  const Vec2 y = matrix_exp_apply(m, theta, y0);
  const Vec2 w1 = m.apply(y);
  const Vec2 w2 = m.apply(w1);
  const Vec2 w3 = m.apply(w2);

  const double q = dot(y, y);
  const double dq = 2.0 * dot(y, w1);
  const double d2q = 2.0 * (dot(w1, w1) + dot(y, w2));
  const double d3q = 2.0 * (3.0 * dot(w1, w2) + dot(y, w3));

  const double f = 1.0 / (2.0 * q);
  const double f1 = -dq / (2.0 * q * q);
  const double f2 = dq * dq / (q * q * q) - d2q / (2.0 * q * q);
  const double f3 = -3.0 * dq * dq * dq / (q * q * q * q) +
                    3.0 * dq * d2q / (q * q * q) - d3q / (2.0 * q * q);

  const double c1 = cross(y, w1);
  const double c2 = cross(y, w2);
  const double c3 = cross(w1, w2) + cross(y, w3);

  const double t1 = c1 / q;
  const double t2 = c2 / q - c1 * dq / (q * q);
  const double t3 = c3 / q - 2.0 * c2 * dq / (q * q) - c1 * d2q / (q * q) +
                    2.0 * c1 * dq * dq / (q * q * q);

  ArcJet out;
  out.theta = theta;
  out.t = polar_angle(y);
  out.t_theta = t1;
  out.y1 = y.y1;
  const double df = f1 / t1;
  const double d2f = (f2 - df * t2) / (t1 * t1);
  const double d3f = (f3 - 3.0 * d2f * t2 * t1 - df * t3) / (t1 * t1 * t1);
  out.jet = NormJet{out.t, f, df, d2f, d3f};
  return out;
}

}  // namespace

IndicatrixArc::IndicatrixArc(const BerwaldMatrix& m, double a0, Interval theta_span,
                             bool truncated)
    : m_(m), a0_(a0), span_(theta_span), truncated_(truncated) {
  require_valid(m);
  if (!(a0 > 0.0)) throw ValidationError("indicatrix arc: a0 must be positive");
  if (!(theta_span.lo < 0.0 && theta_span.hi > 0.0))
    throw ValidationError("indicatrix arc: theta span must contain 0");
}

Vec2 IndicatrixArc::at(double theta) const {
  if (!span_.contains(theta))
    throw DomainError("indicatrix arc: theta outside the usable span");
  const double start = 1.0 / std::sqrt(2.0 * a0_);
  return matrix_exp_apply(m_, theta, {start, 0.0});
}

IndicatrixArc indicatrix_from_matrix(const BerwaldMatrix& m, double a0,
                                     Interval theta_span) {
  require_valid(m);
  if (!(a0 > 0.0)) throw ValidationError("indicatrix arc: a0 must be positive");
  const Vec2 y0{1.0 / std::sqrt(2.0 * a0), 0.0};
  const double step = 1e-2;
  auto usable = [&](double theta) {
    const ArcJet aj = arc_jet(m, y0, theta);
    if (!(aj.y1 > 0.0)) return false;              // leaves the half-plane
    if (!(aj.t_theta > 1e-10)) return false;       // angle no longer monotone
    const double margin = convexity_margin(aj.jet);
    return aj.jet.f > kMinProfile &&
           margin > kMarginGuardFactor * 4.0 * aj.jet.f * aj.jet.f;
  };
  Interval span{0.0, 0.0};
  bool truncated = false;
  for (int dir : {+1, -1}) {
    double theta = 0.0;
    const double limit = dir > 0 ? theta_span.hi : -theta_span.lo;
    while (std::abs(theta) < limit) {
      const double next =
          dir * std::min(std::abs(theta) + step, limit);
      if (!usable(next)) {
        truncated = true;
        break;
      }
      theta = next;
    }
    if (dir > 0)
      span.hi = theta;
    else
      span.lo = theta;
  }
  if (!(span.lo < span.hi))
    throw ValidationError("indicatrix arc: no usable span around theta = 0");
  return IndicatrixArc(m, a0, span, truncated);
}

namespace {

class MatrixIndicatrixSource final : public JetSource {
public:
  MatrixIndicatrixSource(BerwaldMatrix m, Vec2 y0, std::vector<double> thetas,
                         std::vector<double> angles)
      : m_(m), y0_(y0), thetas_(std::move(thetas)), angles_(std::move(angles)) {}

  NormJet jet(double t) const override {
    // bracket t in the monotone angle table, then polish with safeguarded Newton
    auto it = std::lower_bound(angles_.begin(), angles_.end(), t);
    const std::size_t hi = std::min<std::size_t>(
        std::max<std::size_t>(it - angles_.begin(), 1), angles_.size() - 1);
    const std::size_t lo = hi - 1;
    double th_lo = thetas_[lo], th_hi = thetas_[hi];
    double theta = th_lo + (th_hi - th_lo) * (t - angles_[lo]) /
                               (angles_[hi] - angles_[lo]);
    ArcJet aj = arc_jet(m_, y0_, theta);
    for (int iter = 0; iter < 80; ++iter) {
      const double err = aj.t - t;
      if (std::abs(err) < 1e-15 * (1.0 + std::abs(t))) break;
      if (err > 0)
        th_hi = theta;
      else
        th_lo = theta;
      double next = theta - err / aj.t_theta;
      if (!(next > th_lo && next < th_hi)) next = 0.5 * (th_lo + th_hi);
      theta = next;
      aj = arc_jet(m_, y0_, theta);
    }
    return aj.jet;
  }

private:
  BerwaldMatrix m_;
  Vec2 y0_;
  std::vector<double> thetas_;
  std::vector<double> angles_;
};

}  // namespace

NormCurve norm_from_indicatrix(const IndicatrixArc& arc) {
  const Vec2 y0{1.0 / std::sqrt(2.0 * arc.a0()), 0.0};
  const BerwaldMatrix& m = arc.matrix();
  // Tabulate the angle map outward from theta = 0, trimming each side where
  // the angle stops strictly increasing (the arc hugs an eigendirection).
  const int n_half = 400;
  std::vector<double> thetas{0.0};
  std::vector<double> angles{arc_jet(m, y0, 0.0).t};
  for (int dir : {+1, -1}) {
    const double limit = dir > 0 ? arc.theta_span().hi : arc.theta_span().lo;
    std::vector<double> th, an;
    double prev = angles.front();
    for (int i = 1; i <= n_half; ++i) {
      const double theta = limit * i / n_half;
      const ArcJet aj = arc_jet(m, y0, theta);
      if (dir * (aj.t - prev) < 1e-13) break;
      th.push_back(theta);
      an.push_back(aj.t);
      prev = aj.t;
    }
    if (dir > 0) {
      thetas.insert(thetas.end(), th.begin(), th.end());
      angles.insert(angles.end(), an.begin(), an.end());
    } else {
      thetas.insert(thetas.begin(), th.rbegin(), th.rend());
      angles.insert(angles.begin(), an.rbegin(), an.rend());
    }
  }
  if (angles.size() < 3)
    throw DomainError("norm_from_indicatrix: usable arc is too short");
  Interval domain{angles.front(), angles.back()};
  auto src = std::make_shared<MatrixIndicatrixSource>(m, y0, std::move(thetas),
                                                      std::move(angles));
  return NormCurve(domain, CurveKind::MatrixIndicatrix, std::move(src));
}

void require_valid(const CatalogParams& p) {
  require_finite(p.lambda, "lambda");
  require_finite(p.mu, "mu");
  if (!(p.mu > 0.0)) throw ValidationError("catalog: mu must be positive");
  switch (p.case_id) {
    case 1:
      if (!(p.lambda >= 0.0))
        throw ValidationError("catalog case 1 requires lambda >= 0");
      return;
    case 2:
      if (!(p.lambda > 2.0))
        throw ValidationError("catalog case 2 requires lambda > 2");
      return;
    case 3:
      if (!(p.lambda > 0.0))
        throw ValidationError("catalog case 3 requires lambda > 0");
      return;
    default:
      throw ValidationError("catalog case must be 1, 2 or 3");
  }
}

namespace {

Interval default_domain(int case_id) {
  switch (case_id) {
    case 1: return {-0.75, 0.75};
    case 2: return {0.2, 1.2};
    default: return {-0.6, 0.6};
  }
}

// f = mu * exp(g(t)) with closed-form log-derivatives.
NormCurve curve_from_log_derivatives(Interval domain, double mu, ProfileFn g,
                                     ProfileFn g1, ProfileFn g2, ProfileFn g3,
                                     CurveKind kind) {
  auto f = [mu, g](double t) { return mu * std::exp(g(t)); };
  return make_analytic_curve(
      domain, f,
      [f, g1](double t) { return f(t) * g1(t); },
      [f, g1, g2](double t) {
        const double a = g1(t);
        return f(t) * (g2(t) + a * a);
      },
      [f, g1, g2, g3](double t) {
        const double a = g1(t), b = g2(t);
        return f(t) * (g3(t) + 3.0 * a * b + a * a * a);
      },
      kind);
}

}  // namespace

NormCurve catalog_norm(const CatalogParams& p) {
  return catalog_norm(p, default_domain(p.case_id));
}

NormCurve catalog_norm(const CatalogParams& p, Interval domain) {
  require_valid(p);
  const double L = p.lambda;
  switch (p.case_id) {
    case 1:
      // f = mu exp(-2 lambda t): spiral indicatrix, circle when lambda = 0
      return curve_from_log_derivatives(
          domain, p.mu, [L](double t) { return -2.0 * L * t; },
          [L](double) { return -2.0 * L; }, [](double) { return 0.0; },
          [](double) { return 0.0; }, CurveKind::CatalogCase1);
    case 2:
      // f = mu cos^(2-lambda) t sin^lambda t on (0, pi/2)
      if (!(domain.lo > 0.0 && domain.hi < M_PI / 2))
        throw ValidationError("catalog case 2 domain must lie inside (0, pi/2)");
      return curve_from_log_derivatives(
          domain, p.mu,
          [L](double t) {
            return (2.0 - L) * std::log(std::cos(t)) + L * std::log(std::sin(t));
          },
          [L](double t) { return (L - 2.0) * std::tan(t) + L / std::tan(t); },
          [L](double t) {
            const double sec2 = 1.0 / (std::cos(t) * std::cos(t));
            const double csc2 = 1.0 / (std::sin(t) * std::sin(t));
            return (L - 2.0) * sec2 - L * csc2;
          },
          [L](double t) {
            const double ct = std::cos(t), st = std::sin(t);
            const double sec2 = 1.0 / (ct * ct), csc2 = 1.0 / (st * st);
            return 2.0 * (L - 2.0) * sec2 * std::tan(t) +
                   2.0 * L * csc2 / std::tan(t);
          },
          CurveKind::CatalogCase2);
    default:
      // f = mu cos^2 t exp(-2 lambda tan t) on (-pi/2, pi/2)
      if (!(domain.lo > -M_PI / 2 && domain.hi < M_PI / 2))
        throw ValidationError("catalog case 3 domain must lie inside (-pi/2, pi/2)");
      return curve_from_log_derivatives(
          domain, p.mu,
          [L](double t) {
            return 2.0 * std::log(std::cos(t)) - 2.0 * L * std::tan(t);
          },
          [L](double t) {
            const double sec2 = 1.0 / (std::cos(t) * std::cos(t));
            return -2.0 * std::tan(t) - 2.0 * L * sec2;
          },
          [L](double t) {
            const double sec2 = 1.0 / (std::cos(t) * std::cos(t));
            return -2.0 * sec2 - 4.0 * L * sec2 * std::tan(t);
          },
          [L](double t) {
            const double tn = std::tan(t);
            const double sec2 = 1.0 / (std::cos(t) * std::cos(t));
            return -4.0 * sec2 * tn - 4.0 * L * (2.0 * sec2 * tn * tn + sec2 * sec2);
          },
          CurveKind::CatalogCase3);
  }
}

QuadraticSprayFit fit_spray_quadratic(const LieAlgebra2& alg,
                                      const NormCurve& curve, int angle_samples) {
  if (angle_samples < 4)
    throw ValidationError("fit_spray_quadratic: need at least 4 angle samples");
  const Interval dom = curve.domain();
  const std::array<double, 3> radii{0.7, 1.0, 1.4};
  const int rows = angle_samples * static_cast<int>(radii.size());

  Eigen::MatrixXd design(rows, 3);
  Eigen::MatrixXd rhs(rows, 2);
  int row = 0;
  double scale = 0.0;
  for (int i = 0; i < angle_samples; ++i) {
    const double t = grid_point(dom, i, angle_samples);
    const NormJet jet = curve.jet_at(t);
    for (const double r : radii) {
      const Vec2 y{r * std::cos(t), r * std::sin(t)};
      const Vec2 eta = spray_vector(alg, jet, r);
      design(row, 0) = y.y1 * y.y1;
      design(row, 1) = y.y1 * y.y2;
      design(row, 2) = y.y2 * y.y2;
      rhs(row, 0) = eta.y1;
      rhs(row, 1) = eta.y2;
      scale = std::max({scale, std::abs(eta.y1), std::abs(eta.y2)});
      ++row;
    }
  }
  if (!(scale > 0.0))
    throw ValidationError("fit_spray_quadratic: spray vanishes on the whole grid");

  const Eigen::MatrixXd sol = design.colPivHouseholderQr().solve(rhs);
  const Eigen::MatrixXd misfit = design * sol - rhs;

  QuadraticSprayFit out;
  for (int comp = 0; comp < 2; ++comp)
    for (int k = 0; k < 3; ++k) out.coeff[comp][k] = sol(k, comp);
  out.residual = misfit.cwiseAbs().maxCoeff() / scale;
  return out;
}

double spray_quadratic_residual(const LieAlgebra2& alg, const NormCurve& curve,
                                int angle_samples) {
  return fit_spray_quadratic(alg, curve, angle_samples).residual;
}

double berwald_pde_residual(const BerwaldMatrix& m, const NormCurve& curve,
                            int angle_samples) {
  require_finite(m.a, "matrix.a");
  require_finite(m.b, "matrix.b");
  require_finite(m.c, "matrix.c");
  require_finite(m.d, "matrix.d");
  const double frob =
      std::sqrt(m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d);
  if (!(frob > 0.0)) throw ValidationError("berwald_pde_residual: zero matrix");
  const Interval dom = curve.domain();
  double worst = 0.0;
  for (int i = 0; i < angle_samples; ++i) {
    const double t = grid_point(dom, i, angle_samples);
    const NormJet jet = curve.jet_at(t);
    const double ct = std::cos(t), st = std::sin(t);
    const double F = std::sqrt(2.0 * jet.f);  // at r = 1
    // gradient of F = r sqrt(2 f) in the linear coordinates, r = 1
    const double g1 = (2.0 * jet.f * ct - jet.df * st) / F;
    const double g2 = (2.0 * jet.f * st + jet.df * ct) / F;
    const double field1 = m.a * ct + m.b * st;
    const double field2 = m.c * ct + m.d * st;
    worst = std::max(worst, std::abs(field1 * g1 + field2 * g2) / (F * frob));
  }
  return worst;
}

}  // namespace finsler
