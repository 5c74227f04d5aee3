#pragma once

// Classical fingerprinting baselines expressed as optical photon numbers.

#include <qfp/errors.hpp>
#include <qfp/mathkit.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qfp {

struct ClassicalBaseline {
  double i_c = 0.0;  // constructive protocol fingerprint length, bits
  double i_b = 0.0;  // lower bound on fingerprint length, bits
  double pie = 0.0;  // photon information efficiency, bits per photon
  double n_c = 0.0;  // photons, i_c / pie
  double n_b = 0.0;  // photons, i_b / pie
};

/// I_C = 2 sqrt(n) ceil(log2(1/eps) / 2).
inline double classical_bits(double n, double eps) {
  detail::require(n >= 1.0, "classical_bits: n must be >= 1");
  detail::require(eps > 0.0 && eps < 1.0, "classical_bits: eps must lie in (0, 1)");
  return 2.0 * std::sqrt(n) * std::ceil(0.5 * std::log2(1.0 / eps));
}

/// I_B = sqrt(n / (2 ln 2)) (1/2 - sqrt(eps)) - 1/2, clamped at 0.
inline double classical_bound_bits(double n, double eps) {
  detail::require(n >= 1.0, "classical_bound_bits: n must be >= 1");
  detail::require(eps >= 0.0 && eps < 1.0, "classical_bound_bits: eps must lie in [0, 1)");
  const double value = std::sqrt(n / (2.0 * std::numbers::ln2)) * (0.5 - std::sqrt(eps)) - 0.5;
  return std::max(value, 0.0);
}

/// Holevo-limited rate B [g(S/B + nu) - g(nu)] in bits per unit time.
inline double holevo_rate(double s, double bandwidth, double nu) {
  detail::require(s > 0.0 && bandwidth > 0.0 && nu > 0.0,
                  "holevo_rate: s, bandwidth and nu must be > 0");
  // g(nu + x) - g(nu) regrouped so no two O(1) terms cancel.
  const double x = s / bandwidth;
  const double nats = x * std::log1p(1.0 / (nu + x)) + (nu + 1.0) * std::log1p(x / (nu + 1.0)) -
                      nu * std::log1p(x / nu);
  return bandwidth * nats / std::numbers::ln2;
}

/// Photon information efficiency log2(1 + 1/nu), the wideband limit of the
/// Holevo rate per signal photon.
inline double pie(double nu) {
  detail::require(nu > 0.0, "pie: nu must be > 0");
  return std::log1p(1.0 / nu) / std::numbers::ln2;
}

inline ClassicalBaseline baseline(double n, double nu, double eps) {
  ClassicalBaseline b;
  b.i_c = classical_bits(n, eps);
  b.i_b = classical_bound_bits(n, eps);
  b.pie = pie(nu);
  b.n_c = b.i_c / b.pie;
  b.n_b = b.i_b / b.pie;
  return b;
}

}  // namespace qfp
