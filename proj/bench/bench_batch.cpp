// Compares the serial reference batch against the OpenMP batch and checks
// that both produce identical report bytes.

#include <chrono>
#include <cstdio>

#include "finsler/harness.hpp"
#include "finsler/io.hpp"

namespace {

double run_once(const finsler::RunConfig& cfg, finsler::ExecMode mode,
                std::string& bytes) {
  const auto start = std::chrono::steady_clock::now();
  const finsler::BatchReport report = finsler::batch_verify(cfg, mode);
  const auto stop = std::chrono::steady_clock::now();
  bytes = finsler::report_json(report);
  return std::chrono::duration<double>(stop - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  finsler::RunConfig cfg;
  cfg.n_cases = argc > 1 ? std::atoi(argv[1]) : 400;
  cfg.rng_seed = 42;

  std::string serial_bytes, parallel_bytes;
  const double t_serial = run_once(cfg, finsler::ExecMode::Serial, serial_bytes);
  const double t_parallel =
      run_once(cfg, finsler::ExecMode::Parallel, parallel_bytes);

  std::printf("cases            : %d\n", cfg.n_cases);
  std::printf("serial reference : %8.3f s\n", t_serial);
  std::printf("openmp batch     : %8.3f s\n", t_parallel);
  std::printf("speedup          : %8.2fx\n", t_serial / t_parallel);
  std::printf("reports identical: %s\n",
              serial_bytes == parallel_bytes ? "yes" : "NO");
  return serial_bytes == parallel_bytes ? 0 : 1;
}
