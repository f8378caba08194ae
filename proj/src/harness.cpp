#include "finsler/harness.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

#include "finsler/flow_oracles.hpp"
#include "finsler/io.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace finsler {

const char* to_string(CaseStatus s) {
  switch (s) {
    case CaseStatus::Pass: return "pass";
    case CaseStatus::Fail: return "fail";
    case CaseStatus::Truncated: return "truncated";
  }
  return "unknown";
}

namespace {

// Portable uniform double in [0, 1): 53 high bits of the generator output.
double next_unit(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double lerp_in(double lo, double hi, double u) { return lo + (hi - lo) * u; }

}  // namespace

std::vector<SeedJet> sample_seeds(const SeedBox& box, int n, std::uint64_t rng_seed) {
  if (n < 0) throw ValidationError("sample_seeds: n must be nonnegative");
  std::mt19937_64 gen(rng_seed);
  std::vector<SeedJet> out;
  out.reserve(n);
  long attempts = 0;
  const long max_attempts = 10000L * std::max(n, 1);
  while (static_cast<int>(out.size()) < n) {
    if (++attempts > max_attempts)
      throw ValidationError("sample_seeds: rejection sampling failed to converge");
    SeedJet s;
    s.a0 = lerp_in(box.a0_lo, box.a0_hi, next_unit(gen));
    const double mag = lerp_in(box.a1_abs_lo, box.a1_abs_hi, next_unit(gen));
    s.a1 = next_unit(gen) < 0.5 ? -mag : mag;
    s.a2 = lerp_in(box.a2_lo, box.a2_hi, next_unit(gen));
    s.a3 = lerp_in(box.a3_lo, box.a3_hi, next_unit(gen));
    if (s.margin() >= box.margin) out.push_back(s);
  }
  return out;
}

CaseReport verify_case(const SeedJet& seed, const RunConfig& cfg) {
  require_admissible(seed);
  CaseReport rep;
  rep.seed = seed;

  const double w = cfg.t_half_width;
  const int grid_n = 101;
  rep.grid.resize(grid_n);
  for (int i = 0; i < grid_n; ++i)
    rep.grid[i] = -w + 2.0 * w * i / (grid_n - 1);

  SolveOptions solve_opt;
  solve_opt.abs_tol = cfg.tol_ode;
  solve_opt.rel_tol = cfg.tol_ode;

  // Pipeline 1: the Landsberg profile solved from the seed.
  SolveReport solve_rep;
  const Interval span{-w * 1.05, w * 1.05};
  NormCurve f1 = solve_landsberg(seed, span, solve_opt, &solve_rep);

  // Pipeline 2: the matched linear-flow norm, reconstructed from its
  // indicatrix arc.
  rep.matrix = berwald_matrix_from_seed(seed);
  const IndicatrixArc arc = indicatrix_from_matrix(rep.matrix, seed.a0);
  NormCurve f2 = norm_from_indicatrix(arc);

  rep.covered = Interval{std::max(f1.domain().lo, f2.domain().lo),
                         std::min(f1.domain().hi, f2.domain().hi)};
  const bool full_cover = rep.covered.lo <= -w && rep.covered.hi >= w;

  double sup = 0.0;
  for (const double t : rep.grid) {
    if (!rep.covered.contains(t)) continue;
    const double v1 = f1.jet_at(t).f;
    const double v2 = f2.jet_at(t).f;
    sup = std::max(sup, std::abs(v1 - v2) / seed.a0);
  }
  rep.sup_error = sup;

  // Diagnostics: the reconstruction must have a quadratic spray and the
  // solved profile must conserve its first integral.
  const LieAlgebra2 alg = canonical_algebra();
  rep.spray_quadratic_residual = spray_quadratic_residual(alg, f2);
  const double kappa0 = landsberg_first_integral(seed.jet());
  double drift = 0.0;
  for (const double t : rep.grid) {
    if (!rep.covered.contains(t)) continue;
    drift = std::max(drift,
                     std::abs(landsberg_first_integral(f1.jet_at(t)) - kappa0));
  }
  rep.landsberg_drift = drift / std::max(1.0, std::abs(kappa0));

  if (!full_cover)
    rep.status = CaseStatus::Truncated;
  else
    rep.status = sup <= cfg.tol_compare ? CaseStatus::Pass : CaseStatus::Fail;
  return rep;
}

BatchReport batch_verify(const RunConfig& cfg, ExecMode mode) {
  BatchReport report;
  report.config = cfg;
  const std::vector<SeedJet> seeds =
      sample_seeds(cfg.seed_box, cfg.n_cases, cfg.rng_seed);
  report.cases.resize(seeds.size());

  if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < static_cast<int>(seeds.size()); ++i)
      report.cases[i] = verify_case(seeds[i], cfg);
  } else {
    for (std::size_t i = 0; i < seeds.size(); ++i)
      report.cases[i] = verify_case(seeds[i], cfg);
  }

  for (const CaseReport& c : report.cases) {
    switch (c.status) {
      case CaseStatus::Pass: ++report.pass; break;
      case CaseStatus::Fail: ++report.fail; break;
      case CaseStatus::Truncated: ++report.truncated; break;
    }
    report.max_sup_error = std::max(report.max_sup_error, c.sup_error);
  }
  return report;
}

namespace {

struct InvariantRun {
  std::ostream& out;
  bool all_ok = true;

  void check(const std::string& name, double value, double bound) {
    const bool ok = std::isfinite(value) && value <= bound;
    all_ok = all_ok && ok;
    out << (ok ? "ok   " : "FAIL ") << name << "  (" << value << " <= " << bound
        << ")\n";
  }
  void check_bool(const std::string& name, bool ok) {
    all_ok = all_ok && ok;
    out << (ok ? "ok   " : "FAIL ") << name << "\n";
  }
};

}  // namespace

bool run_invariant_suite(std::ostream& out) {
  InvariantRun run{out};
  const LieAlgebra2 alg = canonical_algebra();

  // sample curves: a round norm, two Riemannian profiles, a solved Landsberg
  // profile, a solved constant-curvature profile and a catalog member
  const NormCurve round = make_round_curve(0.5);
  const NormCurve quad = make_quadratic_curve(2.0, 0.6, 1.0);
  const SeedJet seed{0.5, 0.5, 0.0, 0.0};
  const NormCurve lands = solve_landsberg(seed);
  const NormCurve cfc = solve_constant_curvature(seed, -1.0);
  const NormCurve cat3 = catalog_norm({3, 0.5, 0.5});
  const std::vector<const NormCurve*> curves{&round, &quad, &lands, &cfc, &cat3};

  // ---- spray identities on a jet/point sample ----
  {
    double worst_orth = 0.0, worst_defining = 0.0, worst_homog = 0.0,
           worst_tangent = 0.0;
    for (const NormCurve* curve : curves) {
      const Interval dom = curve->domain();
      for (int i = 1; i < 8; ++i) {
        const double t = dom.lo + dom.width() * i / 8.0;
        const NormJet jet = curve->jet_at(t);
        for (const double r : {0.7, 1.0, 1.6}) {
          const Vec2 y{r * std::cos(t), r * std::sin(t)};
          const Vec2 eta = spray_vector(alg, jet, r);
          const SymMat2 g = gram_in_basis(jet, r);
          worst_orth = std::max(
              worst_orth, std::abs(g.quad(eta, y)) / g.quad(y, y));
          for (const Vec2 u : {Vec2{1, 0}, Vec2{0, 1}}) {
            const double lhs = g.quad(eta, u);
            const double rhs = g.quad(y, alg.bracket(u, y));
            worst_defining = std::max(worst_defining, std::abs(lhs - rhs));
          }
          for (const double lam : {0.5, 2.0, 10.0}) {
            const Vec2 scaled = spray_vector(alg, jet, lam * r);
            const Vec2 expect = (lam * lam) * eta;
            worst_homog = std::max(worst_homog,
                                   norm(scaled - expect) /
                                       std::max(1e-300, norm(expect)));
          }
        }
        const Vec2 on_ind = spray_vector(alg, jet, 1.0 / std::sqrt(2 * jet.f));
        const Vec2 expect = spray_tangent_ratio(alg, jet) * indicatrix_tangent(jet);
        worst_tangent = std::max(worst_tangent, norm(on_ind - expect));
      }
    }
    run.check("spray is g-orthogonal to the base point", worst_orth, 1e-10);
    run.check("spray defining identity g(eta,u) = g(y,[u,y])", worst_defining, 1e-9);
    run.check("spray 2-homogeneity (relative)", worst_homog, 1e-12);
    run.check("spray equals rho * indicatrix tangent", worst_tangent, 1e-10);
  }

  // ---- connection operator ----
  {
    double worst = 0.0;
    for (const NormCurve* curve : curves) {
      const Interval dom = curve->domain();
      for (int i = 2; i < 7; ++i) {
        const double t = dom.lo + dom.width() * i / 8.0;
        const Vec2 y{1.2 * std::cos(t), 1.2 * std::sin(t)};
        const Vec2 n_yy = connection_operator(alg, *curve, y, y);
        const Vec2 eta = spray_at(alg, *curve, y);
        worst = std::max(worst, norm(n_yy - eta));
      }
    }
    run.check("connection N(y,y) equals the spray", worst, 1e-7);
  }

  // ---- geodesic flow and parallel transport ----
  {
    double worst_speed = 0.0, worst_norm_drift = 0.0;
    for (const NormCurve* curve : {&round, &quad, &lands}) {
      const double t0 = 0.02;
      const NormJet j0 = curve->jet_at(t0);
      const Vec2 y0 = indicatrix_point(j0);
      const Vec2 u0 = (1.0 / indicatrix_tangent_norm(j0)) * indicatrix_tangent(j0);
      const ParallelField pf = parallel_transport(alg, *curve, y0, u0, 1.0);
      const double s_max = pf.s_end();
      for (int k = 0; k <= 20; ++k) {
        const double s = s_max * k / 20.0;
        const Vec2 y = pf.base_at(s);
        const Vec2 w = pf.value_at(s);
        const NormJet j = curve->jet_at(polar_angle(y));
        const double fval = norm_value(j, norm(y));
        worst_speed = std::max(worst_speed, std::abs(fval - 1.0));
        const SymMat2 g = gram_in_basis(j, norm(y));
        worst_norm_drift = std::max(worst_norm_drift, std::abs(g.quad(w, w) - 1.0));
      }
    }
    run.check("geodesic flow preserves the norm (relative)", worst_speed, 1e-8);
    run.check("parallel transport preserves the g-norm", worst_norm_drift, 1e-7);
  }

  // ---- first integral conservation on solved profiles ----
  {
    double worst = 0.0;
    const double kappa0 = landsberg_first_integral(seed.jet());
    for (int i = 0; i <= 40; ++i) {
      const double t = grid_point(lands.domain(), i, 41);
      worst = std::max(worst,
                       std::abs(landsberg_first_integral(lands.jet_at(t)) - kappa0));
    }
    run.check("Landsberg first integral is conserved (relative)",
              worst / std::abs(kappa0), 1e-10);
  }

  // ---- two independent curvature routes agree ----
  {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double t = -0.06 + 0.12 * i / 19.0;
      const NormJet j = cfc.jet_at(t);
      const double k1 = flag_curvature(alg, cfc, j);
      const double k2 = flag_curvature_via_riemann(alg, cfc, j);
      worst = std::max(worst, std::abs(k1 - k2));
    }
    run.check("flag curvature vs Lie-derivative oracle", worst, 1e-4);
  }

  // ---- the two Landsberg pipelines agree ----
  {
    double worst = 0.0;
    const NormCurve wavy = make_analytic_curve(
        {-0.5, 0.5}, [](double t) { return 0.5 + 0.1 * std::sin(3 * t); },
        [](double t) { return 0.3 * std::cos(3 * t); },
        [](double t) { return -0.9 * std::sin(3 * t); },
        [](double t) { return -2.7 * std::cos(3 * t); });
    for (const NormCurve* curve : {&lands, &quad, &wavy}) {
      for (int i = 0; i < 5; ++i) {
        const double t = -0.08 + 0.04 * i;
        const NormJet j = curve->jet_at(t);
        const double v1 = landsberg_scalar(alg, *curve, j);
        const double v2 = landsberg_scalar_via_transport(alg, *curve, j);
        worst = std::max(worst, std::abs(v1 - v2));
      }
    }
    run.check("Landsberg scalar vs parallel-transport route", worst, 1e-6);
  }

  // ---- report determinism: bytes and execution mode ----
  {
    RunConfig cfg;
    cfg.n_cases = 3;
    cfg.rng_seed = 7;
    const std::string once = report_json(batch_verify(cfg, ExecMode::Serial));
    const std::string twice = report_json(batch_verify(cfg, ExecMode::Serial));
    const std::string parallel = report_json(batch_verify(cfg, ExecMode::Parallel));
    run.check_bool("verification report bytes are reproducible", once == twice);
    run.check_bool("serial and parallel batches agree byte-for-byte",
                   once == parallel);
  }

  return run.all_ok;
}

}  // namespace finsler
