#pragma once

// Scalar special functions and generic 1-D numerical routines.

#include <qfp/errors.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>

namespace qfp {

struct Tolerance {
  double rel = 1e-10;
  double abs = 1e-12;
  int max_iter = 200;

  void validate() const {
    detail::require(rel > 0.0, "tolerance: rel must be > 0");
    detail::require(abs >= 0.0, "tolerance: abs must be >= 0");
    detail::require(max_iter >= 1, "tolerance: max_iter must be >= 1");
  }
};

/// Binary entropy H2(p) in bits. 0*log(0) is taken as 0, so both endpoints
/// return exactly 0.
inline double binary_entropy(double p) {
  detail::require(p >= 0.0 && p <= 1.0, "binary_entropy: p must lie in [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  const double q = 1.0 - p;
  return -(p * std::log(p) + q * std::log1p(-p)) / std::numbers::ln2;
}

/// Asymptotic Gilbert-Varshamov code rate r(delta) = 1 - H2(delta).
///
/// Evaluated through t = 1 - 2*delta as
///   [(1+t)ln(1+t) + (1-t)ln(1-t)] / (2 ln 2),
/// which keeps full relative precision as delta -> 1/2 where the direct
/// difference 1 - H2 cancels.
inline double gv_rate(double delta) {
  detail::require(delta >= 0.0 && delta < 0.5,
                  "gv_rate: delta must lie in [0, 1/2)");
  if (delta == 0.0) return 1.0;
  const double t = 1.0 - 2.0 * delta;
  double sum = 0.0;
  if (t < 0.1) {
    // sum_{k>=1} t^{2k} / (k (2k - 1))
    const double t2 = t * t;
    double power = t2;
    for (int k = 1; k < 40; ++k) {
      const double term = power / (k * (2.0 * k - 1.0));
      sum += term;
      if (term < sum * 1e-18) break;
      power *= t2;
    }
  } else {
    sum = (1.0 + t) * std::log1p(t) + (1.0 - t) * std::log1p(-t);
  }
  return sum / (2.0 * std::numbers::ln2);
}

/// Entropy of a thermal state with mean excitation number x, in bits:
/// g(x) = (x+1) log2(x+1) - x log2(x), with g(0) = 0.
inline double thermal_entropy(double x) {
  detail::require(x >= 0.0, "thermal_entropy: x must be >= 0");
  if (x == 0.0) return 0.0;
  return ((x + 1.0) * std::log1p(x) - x * std::log(x)) / std::numbers::ln2;
}

/// Bisection on [lo, hi]. Requires f(lo) and f(hi) of opposite sign (or one of
/// them zero). Stops when |f(mid)| <= tol.abs or the bracket is narrower than
/// tol.abs + tol.rel * |mid|.
template <typename F>
double find_root(F&& f, double lo, double hi, const Tolerance& tol = {}) {
  tol.validate();
  if (lo > hi) std::swap(lo, hi);
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (std::isnan(f_lo) || std::isnan(f_hi) || std::signbit(f_lo) == std::signbit(f_hi)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "find_root: root not bracketed: f(" << lo << ") = " << f_lo << ", f(" << hi
        << ") = " << f_hi;
    throw SolverError(msg.str());
  }
  for (int iter = 0; iter < tol.max_iter; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    const double f_mid = f(mid);
    if (std::isnan(f_mid)) throw SolverError("find_root: function returned NaN");
    if (std::abs(f_mid) <= tol.abs || (hi - lo) <= tol.abs + tol.rel * std::abs(mid)) {
      return mid;
    }
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  throw SolverError("find_root: no convergence after " + std::to_string(tol.max_iter) +
                    " iterations");
}

struct Minimum {
  double argmin;
  double value;
};

/// Minimize f on [lo, hi]: a coarse uniform grid (endpoints included) locates
/// the best cell, then golden-section search refines inside the neighbouring
/// cells. Non-finite function values are treated as +inf. The returned point
/// is the best of everything evaluated, so minima at an endpoint are exact.
template <typename F>
Minimum minimize_1d(F&& f, double lo, double hi, const Tolerance& tol = {},
                    int grid_points = 33) {
  tol.validate();
  detail::require(lo < hi, "minimize_1d: need lo < hi");
  detail::require(grid_points >= 3, "minimize_1d: need at least 3 grid points");

  constexpr double inf = std::numeric_limits<double>::infinity();
  auto eval = [&](double x) {
    const double v = f(x);
    return std::isfinite(v) ? v : inf;
  };

  Minimum best{lo, inf};
  int best_index = -1;
  const double step = (hi - lo) / (grid_points - 1);
  for (int i = 0; i < grid_points; ++i) {
    const double x = (i == grid_points - 1) ? hi : lo + i * step;
    const double v = eval(x);
    if (v < best.value) {
      best = {x, v};
      best_index = i;
    }
  }
  if (best_index < 0) throw SolverError("minimize_1d: function not finite anywhere on grid");

  double a = best_index == 0 ? lo : lo + (best_index - 1) * step;
  double b = best_index == grid_points - 1 ? hi : lo + (best_index + 1) * step;

  constexpr double inv_phi = 0.6180339887498948482;  // 1/golden ratio
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  for (int iter = 0;; ++iter) {
    const double mid = 0.5 * (a + b);
    if ((b - a) <= tol.abs + tol.rel * std::abs(mid)) break;
    if (iter >= tol.max_iter) {
      throw SolverError("minimize_1d: no convergence after " + std::to_string(tol.max_iter) +
                        " iterations");
    }
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = eval(d);
    }
  }
  for (const auto& [x, v] : std::array<Minimum, 2>{{{c, fc}, {d, fd}}}) {
    if (v < best.value) best = {x, v};
  }
  const double mid = 0.5 * (a + b);
  const double f_mid = eval(mid);
  if (f_mid < best.value) best = {mid, f_mid};
  return best;
}

}  // namespace qfp
