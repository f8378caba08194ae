// Command-line front end: profile solvers, catalog construction, batch
// verification and the invariant suite.  Exit codes: 0 success, 1 a
// verification failed, 2 usage or validation error.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "finsler/berwald.hpp"
#include "finsler/flow_oracles.hpp"
#include "finsler/harness.hpp"
#include "finsler/io.hpp"
#include "finsler/solvers.hpp"

namespace {

finsler::SeedJet parse_seed(const std::vector<double>& values) {
  if (values.size() != 4)
    throw finsler::ValidationError("--seed expects four values a0,a1,a2,a3");
  return finsler::SeedJet{values[0], values[1], values[2], values[3]};
}

void emit(const std::string& bytes, const std::string& out_path) {
  if (out_path.empty())
    std::fwrite(bytes.data(), 1, bytes.size(), stdout);
  else
    finsler::write_file(out_path, bytes);
}

int run(int argc, char** argv) {
  CLI::App app{"left-invariant conic Finsler metrics on 2D Lie groups"};
  app.require_subcommand(1);

  // ---- solve ----
  auto* solve = app.add_subcommand("solve", "integrate a profile from a seed jet");
  solve->require_subcommand(1);
  std::vector<double> seed_values;
  double half_width = 0.15;
  double tol = 1e-10;
  double cfc_c = 0.0;
  std::string out_path;

  auto add_solve_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed_values, "initial jet a0,a1,a2,a3")
        ->required()
        ->delimiter(',')
        ->expected(4);
    cmd->add_option("--t", half_width, "half-width of the angle span");
    cmd->add_option("--tol", tol, "integrator tolerance");
    cmd->add_option("--out", out_path, "write CSV here instead of stdout");
  };
  auto* solve_landsberg_cmd =
      solve->add_subcommand("landsberg", "profile with vanishing Landsberg curvature");
  add_solve_common(solve_landsberg_cmd);
  auto* solve_cfc_cmd =
      solve->add_subcommand("cfc", "profile with constant flag curvature");
  add_solve_common(solve_cfc_cmd);
  solve_cfc_cmd->add_option("--c", cfc_c, "the constant curvature value")->required();

  // ---- catalog ----
  auto* catalog = app.add_subcommand("catalog", "closed-form Berwald profile");
  int case_id = 1;
  double cat_lambda = 0.0;
  double cat_mu = 0.5;
  catalog->add_option("--case", case_id, "catalog case (1, 2 or 3)")->required();
  catalog->add_option("--lambda", cat_lambda, "case parameter lambda")->required();
  catalog->add_option("--mu", cat_mu, "positive scale mu (default 0.5)");
  catalog->add_option("--out", out_path, "write CSV here instead of stdout");

  // ---- verify ----
  auto* verify = app.add_subcommand("verify", "batch verification runs");
  verify->require_subcommand(1);
  auto* theorem_d = verify->add_subcommand(
      "theorem-d", "every admissible Landsberg seed reproduces its Berwald model");
  finsler::RunConfig cfg;
  bool serial = false;
  std::string report_path;
  theorem_d->add_option("--n", cfg.n_cases, "number of sampled seeds");
  theorem_d->add_option("--rng", cfg.rng_seed, "sampler seed");
  theorem_d->add_option("--tol-compare", cfg.tol_compare,
                        "sup-error tolerance for a pass");
  theorem_d->add_option("--report", report_path, "write the JSON report here");
  theorem_d->add_flag("--serial", serial,
                      "run the serial reference instead of the OpenMP batch");

  // ---- curvature ----
  auto* curvature = app.add_subcommand(
      "curvature", "print the flag-curvature profile of a solved metric");
  std::vector<double> curv_seed_values;
  double curv_c = 0.0;
  bool curv_has_c = false;
  curvature->add_option("--seed", curv_seed_values, "initial jet a0,a1,a2,a3")
      ->required()
      ->delimiter(',')
      ->expected(4);
  auto* copt = curvature->add_option("--c", curv_c,
                                     "solve for this constant curvature "
                                     "(default: the Landsberg profile)");

  // ---- invariants ----
  auto* invariants =
      app.add_subcommand("invariants", "run the full property suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  if (solve_landsberg_cmd->parsed() || solve_cfc_cmd->parsed()) {
    const finsler::SeedJet seed = parse_seed(seed_values);
    finsler::SolveOptions opt;
    opt.abs_tol = opt.rel_tol = tol;
    const finsler::Interval span{-half_width, half_width};
    finsler::SolveReport rep;
    const finsler::NormCurve curve =
        solve_landsberg_cmd->parsed()
            ? finsler::solve_landsberg(seed, span, opt, &rep)
            : finsler::solve_constant_curvature(seed, cfc_c, span, opt, &rep);
    if (!rep.message.empty()) std::cerr << "warning: " << rep.message << "\n";
    emit(finsler::curve_csv(curve), out_path);
    return 0;
  }

  if (catalog->parsed()) {
    const finsler::NormCurve curve =
        finsler::catalog_norm({case_id, cat_lambda, cat_mu});
    emit(finsler::curve_csv(curve), out_path);
    return 0;
  }

  if (theorem_d->parsed()) {
    const finsler::BatchReport report = finsler::batch_verify(
        cfg, serial ? finsler::ExecMode::Serial : finsler::ExecMode::Parallel);
    if (!report_path.empty())
      finsler::write_file(report_path, finsler::report_json(report));
    std::cout << "cases: " << report.cases.size() << "  pass: " << report.pass
              << "  fail: " << report.fail << "  truncated: " << report.truncated
              << "  max_sup_error: " << finsler::format_double(report.max_sup_error)
              << "\n";
    return report.all_pass() ? 0 : 1;
  }

  if (curvature->parsed()) {
    const finsler::SeedJet seed = parse_seed(curv_seed_values);
    curv_has_c = copt->count() > 0;
    const finsler::NormCurve curve =
        curv_has_c ? finsler::solve_constant_curvature(seed, curv_c)
                   : finsler::solve_landsberg(seed);
    const finsler::LieAlgebra2 alg = finsler::canonical_algebra();
    // keep the difference stencils inside the solved domain
    const finsler::Interval dom{curve.domain().lo + 6e-3, curve.domain().hi - 6e-3};
    std::string out = "t,K\n";
    const int n = 41;
    for (int i = 0; i < n; ++i) {
      const double t = dom.lo + dom.width() * i / (n - 1);
      const finsler::NormJet jet = curve.jet_at(t);
      out += finsler::format_double(t);
      out += ',';
      out += finsler::format_double(finsler::flag_curvature(alg, curve, jet));
      out += '\n';
    }
    std::fwrite(out.data(), 1, out.size(), stdout);
    return 0;
  }

  if (invariants->parsed())
    return finsler::run_invariant_suite(std::cout) ? 0 : 1;

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const finsler::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
