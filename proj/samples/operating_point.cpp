// Prints the optimal operating point and the classical baselines for a few
// input sizes at nu = 1e-7, eps = 1e-5.

#include <qfp/classical.hpp>
#include <qfp/optimizer.hpp>

#include <cstdio>

int main() {
  const double nu = 1e-7;
  const double eps = 1e-5;
  std::printf("%10s %10s %8s %10s %12s %12s %12s\n", "n", "noise", "delta*", "beta*", "N_Q*", "N_B",
              "N_C");
  for (double n : {1e4, 1e6, 1e8, 1e10, 1e12}) {
    const auto op = qfp::optimize(n, nu, eps);
    const auto cb = qfp::baseline(n, nu, eps);
    std::printf("%10.3g %10.3g %8.4f %10.4g %12.5g %12.5g %12.5g\n", n, op.noise_param,
                op.delta_star, op.beta_star, op.n_q_star, cb.n_b, cb.n_c);
  }
}
