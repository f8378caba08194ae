#ifndef FINSLER_HARNESS_HPP
#define FINSLER_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "finsler/berwald.hpp"
#include "finsler/solvers.hpp"
#include "finsler/types.hpp"

namespace finsler {

// Sampling box for admissible seeds; candidates violating the admissibility
// margin are rejected and redrawn.
struct SeedBox {
  double a0_lo = 0.2, a0_hi = 2.0;
  double a1_abs_lo = 0.1, a1_abs_hi = 1.5;  // sign drawn separately
  double a2_lo = -1.0, a2_hi = 1.0;
  double a3_lo = -2.0, a3_hi = 2.0;
  double margin = 0.05;  // require 2 a0 a2 - a1^2 + 4 a0^2 >= margin
};

struct RunConfig {
  std::uint64_t rng_seed = 42;
  int n_cases = 100;
  double t_half_width = 0.1;
  double tol_ode = 1e-10;
  double tol_compare = 1e-7;
  SeedBox seed_box;
};

enum class CaseStatus { Pass, Fail, Truncated };
const char* to_string(CaseStatus s);

// Result of checking one seed: the Landsberg solve against the matched
// linear-flow (Berwald) reconstruction on a uniform comparison grid.
struct CaseReport {
  SeedJet seed;
  BerwaldMatrix matrix;
  double sup_error = 0.0;  // sup over the grid of |f1 - f2| / a0
  std::vector<double> grid;
  CaseStatus status = CaseStatus::Fail;
  Interval covered{0.0, 0.0};  // sub-interval both pipelines reached
  // diagnostics
  double spray_quadratic_residual = 0.0;  // of the reconstructed norm
  double landsberg_drift = 0.0;           // first-integral drift of the solved norm
};

// Solve the Landsberg profile from the seed, reconstruct the matched Berwald
// norm through its indicatrix arc, and compare the two profiles on a
// (2k+1)-point uniform grid over [-t_half_width, t_half_width].
CaseReport verify_case(const SeedJet& seed, const RunConfig& cfg);

struct BatchReport {
  RunConfig config;
  std::vector<CaseReport> cases;
  int pass = 0;
  int fail = 0;
  int truncated = 0;
  double max_sup_error = 0.0;

  bool all_pass() const { return fail == 0 && truncated == 0; }
};

enum class ExecMode {
  Serial,    // reference implementation, kept for testing
  Parallel,  // OpenMP over cases; identical output by construction
};

// Draw seeds by rejection from cfg.seed_box (deterministic in rng_seed) and
// run verify_case on each.  Case order and report bytes are independent of
// the execution mode.
BatchReport batch_verify(const RunConfig& cfg, ExecMode mode = ExecMode::Parallel);

// Deterministic seed sampler used by batch_verify; exposed for tests and for
// the other acceptance batches.
std::vector<SeedJet> sample_seeds(const SeedBox& box, int n, std::uint64_t rng_seed);

// Property suite behind the `invariants` subcommand: prints one line per
// invariant to `out` and returns true when all hold.
bool run_invariant_suite(std::ostream& out);

}  // namespace finsler

#endif
