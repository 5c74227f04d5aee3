// Runs the photon-counting Monte Carlo on a small link and compares the
// empirical worst-case error with the Chernoff bound.

#include <qfp/simulator.hpp>

#include <cstdio>

int main() {
  const auto setup = qfp::SimulationSetup::for_mean_count(5.0, 0.244, 1.0, 400);
  const auto batch = qfp::run_trials(setup, qfp::TrialMode::worst_case_distance, 20000, 7);
  std::printf("mu = %.3f  V_e = %.4f  V_d = %.4f\n", batch.mu, batch.vis.v_e, batch.vis.v_d);
  std::printf("errors: equal %llu / %llu, different %llu / %llu\n",
              static_cast<unsigned long long>(batch.errors_equal),
              static_cast<unsigned long long>(batch.runs_equal),
              static_cast<unsigned long long>(batch.errors_different),
              static_cast<unsigned long long>(batch.runs_different));
  std::printf("average error %.5f  95%% CI [%.5f, %.5f]  Chernoff bound %.5f\n", batch.avg_error,
              batch.wilson_ci.lo, batch.wilson_ci.hi, batch.chernoff_bound);
}
