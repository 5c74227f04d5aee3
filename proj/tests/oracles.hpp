#pragma once

// Reference implementations used only by the tests. Each one computes its
// quantity from the defining formula by brute force (grids, direct sums,
// dense matrices), sharing no code with the library beyond plain data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace oracle {

inline double h2(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

inline double gv(double d) { return 1.0 - h2(d); }

/// 1 - (1/2)[(1+a)^l (1+b)^(1-l) + (1-a)^l (1-b)^(1-l)], straight from pow.
inline double chernoff_f(double a, double b, double l) {
  return 1.0 - 0.5 * (std::pow(1.0 + a, l) * std::pow(1.0 + b, 1.0 - l) +
                      std::pow(1.0 - a, l) * std::pow(1.0 - b, 1.0 - l));
}

struct GridMax {
  double lambda;
  double value;
};

/// Maximum of chernoff_f over `points` equally spaced lambdas in [lo, hi].
inline GridMax chernoff_grid(double a, double b, long points, double lo = 0.0, double hi = 1.0) {
  GridMax best{lo, -std::numeric_limits<double>::infinity()};
  for (long i = 0; i < points; ++i) {
    const double l = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    const double v = chernoff_f(a, b, l);
    if (v > best.value) best = {l, v};
  }
  return best;
}

/// Two-level grid: 1001 points on [0, 1], then 2001 points on the +-1e-3
/// neighbourhood of the coarse winner, for a final spacing of 1e-6.
inline GridMax chernoff_grid_fine(double a, double b) {
  const GridMax coarse = chernoff_grid(a, b, 1001);
  const double lo = std::max(0.0, coarse.lambda - 1e-3);
  const double hi = std::min(1.0, coarse.lambda + 1e-3);
  return chernoff_grid(a, b, 2001, lo, hi);
}

/// Chernoff information by Newton iteration on the derivative of the bracket
/// (strictly convex in lambda). Valid for 0 <= b < a < 1.
inline double chernoff_newton(double a, double b) {
  if (a == b) return 0.0;
  const double xp = 1.0 + a, yp = 1.0 + b, xm = 1.0 - a, ym = 1.0 - b;
  const double lp = std::log(xp / yp), lm = std::log(xm / ym);
  double l = 0.5;
  for (int it = 0; it < 60; ++it) {
    const double tp = yp * std::exp(l * lp);
    const double tm = ym * std::exp(l * lm);
    const double g1 = tp * lp + tm * lm;
    const double g2 = tp * lp * lp + tm * lm * lm;
    const double step = g1 / g2;
    l = std::clamp(l - step, 0.0, 1.0);
    if (std::abs(step) < 1e-13) break;
  }
  return chernoff_f(a, b, l);
}

/// Poisson pmf by the recursion p_k = p_{k-1} m / k.
inline std::vector<double> poisson_table(double mean, std::size_t kmax) {
  std::vector<double> p(kmax + 1);
  p[0] = std::exp(-mean);
  for (std::size_t k = 1; k <= kmax; ++k) p[k] = p[k - 1] * mean / static_cast<double>(k);
  return p;
}

/// y = T x over GF(2) with T[i][j] = diag[i - j + n - 1], as a dense matrix.
inline std::vector<int> dense_toeplitz(const std::vector<int>& diag, std::size_t n, std::size_t m,
                                       const std::vector<int>& x) {
  std::vector<std::vector<int>> t(m, std::vector<int>(n));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) t[i][j] = diag[i + n - 1 - j];
  std::vector<int> y(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    int acc = 0;
    for (std::size_t j = 0; j < n; ++j) acc += t[i][j] * x[j];
    y[i] = acc % 2;
  }
  return y;
}

struct GridOptimum {
  double delta;
  double beta;
  double nq;
};

/// min over a (delta, log beta) grid of max(Chernoff requirement, slot
/// requirement). The delta grid covers (0, 1/2) uniformly.
inline GridOptimum optimizer_grid(double n, double nu, double eps, int nd, int nb,
                                  double log_beta_lo, double log_beta_hi) {
  const double budget = std::log(1.0 / (2.0 * eps));
  GridOptimum best{0, 0, std::numeric_limits<double>::infinity()};
  for (int i = 0; i < nd; ++i) {
    const double delta = 0.5 * (i + 0.5) / nd;
    const double r = gv(delta);
    for (int j = 0; j < nb; ++j) {
      const double lb = log_beta_lo + (log_beta_hi - log_beta_lo) * j / (nb - 1);
      const double beta = std::exp(lb);
      const double ve = 1.0 / (1.0 + beta);
      const double vd = (1.0 - 2.0 * delta) / (1.0 + beta);
      const double c = chernoff_newton(ve, vd);
      const double chern = budget / (2.0 * (1.0 + beta) * c);
      const double slot = (n * nu / 2.0) / (beta * r);
      const double nq = std::max(chern, slot);
      if (nq < best.nq) best = {delta, beta, nq};
    }
  }
  return best;
}

/// 2000 x 2000 search: a 200 x 200 scan over log beta in [-12, 12] picks the
/// window, then the full grid spans +-0.3 around it in log beta.
inline GridOptimum optimizer_brute_force(double n, double nu, double eps) {
  const GridOptimum coarse = optimizer_grid(n, nu, eps, 200, 200, -12.0, 12.0);
  const double centre = std::log(coarse.beta);
  return optimizer_grid(n, nu, eps, 2000, 2000, centre - 0.3, centre + 0.3);
}

}  // namespace oracle
