// Timing harness: sequential chains vs the parallel driver (identical
// output is asserted, not assumed) and the HRF convolution kernel at
// several thread counts.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bdlm/draws.hpp"
#include "bdlm/sampler.hpp"
#include "bdlm/sim.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int threads_available() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace

int main(int argc, char** argv) {
  int T = 285;
  int chains = 4;
  int iters = 200;
  if (argc > 1) T = std::atoi(argv[1]);
  if (argc > 2) chains = std::atoi(argv[2]);
  if (argc > 3) iters = std::atoi(argv[3]);
  if (T < 2 || chains < 1 || iters < 1) {
    std::fprintf(stderr, "usage: %s [T] [chains] [iters]\n", argv[0]);
    return 1;
  }
  std::printf("threads available: %d\n", threads_available());

  bdlm::SimRecipe recipe;
  recipe.T = T;
  recipe.phi = bdlm::default_connectivity_truth();
  recipe.seed = 7;
  const bdlm::TrivariateData sim = bdlm::simulate_trivariate(recipe);
  const bdlm::ModelSpec spec = bdlm::trivariate_spec(sim.y, sim.regressor);

  bdlm::McmcConfig cfg;
  cfg.n_iter = iters;
  cfg.burn_in = 0;
  cfg.seed = 11;
  cfg.n_chains = chains;

  auto serial_start = Clock::now();
  std::vector<bdlm::DrawsStore> serial;
  serial.reserve(static_cast<std::size_t>(chains));
  for (int c = 1; c <= chains; ++c) {
    serial.push_back(bdlm::run_chain(spec, cfg, c));
  }
  const double serial_s = seconds_since(serial_start);
  std::printf("chains serial:   %d x %d sweeps (T=%d)  %.3f s\n", chains, iters,
              T, serial_s);

  auto parallel_start = Clock::now();
  const std::vector<bdlm::DrawsStore> parallel = bdlm::run_chains(spec, cfg);
  const double parallel_s = seconds_since(parallel_start);
  std::printf("chains parallel: %d x %d sweeps (T=%d)  %.3f s  (speedup %.2fx)\n",
              chains, iters, T, parallel_s, serial_s / parallel_s);

  for (int c = 0; c < chains; ++c) {
    if (serial[static_cast<std::size_t>(c)].cols !=
        parallel[static_cast<std::size_t>(c)].cols) {
      std::fprintf(stderr, "chain %d: serial and parallel draws differ\n", c + 1);
      return 1;
    }
  }
  std::printf("serial and parallel chain draws are identical\n");

  const double total_time = 4000.0;
  const auto design = bdlm::default_block_design(total_time);
  const int n_scans = static_cast<int>(total_time / 2.0);
  bdlm::HrfParams hrf;
  auto conv_start = Clock::now();
  std::vector<double> x;
  for (int rep = 0; rep < 20; ++rep) {
    x = bdlm::convolve_stimulus(design, hrf, 2.0, n_scans);
  }
  const double conv_s = seconds_since(conv_start);
  std::printf("convolution:     20 x %d scans at dt=%.2f  %.3f s\n", n_scans,
              design.microtime_dt, conv_s);
  (void)x;
  return 0;
}
