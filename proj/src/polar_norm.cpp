#include "finsler/polar_norm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace finsler {

namespace {

void require_finite_jet(const NormJet& jet) {
  require_finite(jet.t, "jet.t");
  require_finite(jet.f, "jet.f");
  require_finite(jet.df, "jet.df");
  require_finite(jet.d2f, "jet.d2f");
  require_finite(jet.d3f, "jet.d3f");
}

}  // namespace

double convexity_margin(const NormJet& jet) {
  require_finite_jet(jet);
  return 2.0 * jet.f * jet.d2f - jet.df * jet.df + 4.0 * jet.f * jet.f;
}

PolarGram polar_gram(const NormJet& jet, double r) {
  if (!(r > 0.0)) throw DomainError("polar_gram: r must be positive");
  if (!(jet.f > 0.0)) throw DomainError("polar_gram: profile value must be positive");
  const double margin = convexity_margin(jet);
  return PolarGram{2.0 * jet.f, 0.0, r * r / (2.0 * jet.f) * margin};
}

SymMat2 gram_in_basis(const NormJet& jet, double r) {
  if (!(r > 0.0)) throw DomainError("gram_in_basis: r must be positive");
  if (!(jet.f > 0.0))
    throw DomainError("gram_in_basis: profile value must be positive");
  const double margin = convexity_margin(jet);
  if (!(margin > 0.0))
    throw ConvexityError("gram_in_basis: convexity margin is not positive");
  const double ct = std::cos(jet.t), st = std::sin(jet.t);
  const double y1 = r * ct, y2 = r * st;
  const double r2 = r * r;
  // second derivatives of F^2 = 2 r^2 f(t) in the linear coordinates
  const double p = 2.0 * jet.df * y1 - jet.d2f * y2;
  const double q = 2.0 * jet.df * y2 + jet.d2f * y1;
  SymMat2 g;
  g.a11 = 2.0 * jet.f - p * y2 / r2;
  g.a12 = p * y1 / r2 - jet.df;
  g.a22 = 2.0 * jet.f + q * y1 / r2;
  return g;
}

double cartan_scalar(const NormJet& jet) {
  require_finite_jet(jet);
  if (!(jet.f > 0.0))
    throw DomainError("cartan_scalar: profile value must be positive");
  return jet.df / jet.f + jet.d3f / (4.0 * jet.f);
}

Vec2 indicatrix_point(const NormJet& jet) {
  if (!(jet.f > 0.0))
    throw DomainError("indicatrix_point: profile value must be positive");
  const double inv = 1.0 / std::sqrt(2.0 * jet.f);
  return {std::cos(jet.t) * inv, std::sin(jet.t) * inv};
}

Vec2 indicatrix_tangent(const NormJet& jet) {
  const double s = std::sqrt(2.0 * jet.f);
  const double inv = 1.0 / s;
  const double slope = jet.df / (s * s * s);  // f'/(2f)^{3/2}
  const double ct = std::cos(jet.t), st = std::sin(jet.t);
  return {-st * inv - ct * slope, ct * inv - st * slope};
}

double indicatrix_tangent_norm(const NormJet& jet) {
  const double margin = convexity_margin(jet);
  if (!(margin > 0.0))
    throw ConvexityError("indicatrix_tangent_norm: margin is not positive");
  return std::sqrt(margin) / (2.0 * jet.f);
}

double norm_value(const NormJet& jet, double r) {
  if (!(r > 0.0)) throw DomainError("norm_value: r must be positive");
  return r * std::sqrt(2.0 * jet.f);
}

const char* to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::SolvedLandsberg: return "solved-landsberg";
    case CurveKind::SolvedConstantCurvature: return "solved-cfc";
    case CurveKind::CatalogCase1: return "catalog-case-1";
    case CurveKind::CatalogCase2: return "catalog-case-2";
    case CurveKind::CatalogCase3: return "catalog-case-3";
    case CurveKind::MatrixIndicatrix: return "matrix-indicatrix";
    case CurveKind::Custom: return "custom";
  }
  return "unknown";
}

NormCurve::NormCurve(Interval domain, CurveKind kind,
                     std::shared_ptr<const JetSource> source, int certificate_samples)
    : domain_(domain), kind_(kind), source_(std::move(source)) {
  if (!(domain_.hi > domain_.lo))
    throw ValidationError("NormCurve: domain must be a nondegenerate interval");
  if (!source_) throw ValidationError("NormCurve: missing jet source");
  double min_margin = std::numeric_limits<double>::infinity();
  double min_f = std::numeric_limits<double>::infinity();
  const int n = std::max(certificate_samples, 2);
  for (int i = 0; i < n; ++i) {
    const double t = grid_point(domain_, i, n);
    const NormJet j = source_->jet(t);
    min_f = std::min(min_f, j.f);
    min_margin = std::min(min_margin, convexity_margin(j));
  }
  if (!(min_f > 0.0))
    throw ConvexityError("NormCurve: profile is not positive on the domain");
  if (!(min_margin > 0.0))
    throw ConvexityError("NormCurve: convexity margin is not positive on the domain");
  min_margin_ = min_margin;
  min_f_ = min_f;
}

NormJet NormCurve::jet_at(double t) const {
  if (!domain_.contains(t))
    throw DomainError("NormCurve: angle outside the profile domain");
  NormJet j = source_->jet(t);
  j.t = t;
  return j;
}

namespace {

class AnalyticSource final : public JetSource {
public:
  AnalyticSource(ProfileFn f, ProfileFn df, ProfileFn d2f, ProfileFn d3f)
      : f_(std::move(f)), df_(std::move(df)), d2f_(std::move(d2f)), d3f_(std::move(d3f)) {}

  NormJet jet(double t) const override {
    return NormJet{t, f_(t), df_(t), d2f_(t), d3f_(t)};
  }

private:
  ProfileFn f_, df_, d2f_, d3f_;
};

}  // namespace

NormCurve make_analytic_curve(Interval domain, ProfileFn f, ProfileFn df,
                              ProfileFn d2f, ProfileFn d3f, CurveKind kind) {
  auto src = std::make_shared<AnalyticSource>(std::move(f), std::move(df),
                                              std::move(d2f), std::move(d3f));
  return NormCurve(domain, kind, std::move(src));
}

NormCurve make_round_curve(double f0, Interval domain) {
  if (!(f0 > 0.0)) throw ValidationError("make_round_curve: f0 must be positive");
  auto zero = [](double) { return 0.0; };
  return make_analytic_curve(domain, [f0](double) { return f0; }, zero, zero, zero);
}

NormCurve make_quadratic_curve(double q11, double q12, double q22, Interval domain) {
  // f(t) = (q11 + q22)/4 + (q12/2) sin 2t + ((q11 - q22)/4) cos 2t
  const double mean = 0.25 * (q11 + q22);
  const double cs = 0.5 * q12;
  const double cc = 0.25 * (q11 - q22);
  return make_analytic_curve(
      domain,
      [=](double t) { return mean + cs * std::sin(2 * t) + cc * std::cos(2 * t); },
      [=](double t) { return 2 * cs * std::cos(2 * t) - 2 * cc * std::sin(2 * t); },
      [=](double t) { return -4 * cs * std::sin(2 * t) - 4 * cc * std::cos(2 * t); },
      [=](double t) { return -8 * cs * std::cos(2 * t) + 8 * cc * std::sin(2 * t); });
}

}  // namespace finsler
