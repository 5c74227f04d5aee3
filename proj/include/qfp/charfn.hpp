#pragma once

// Characteristic function Z(l+, l-) = E[exp(i l+ k+ + i l- k-)] of the
// photocount pair, in its exact Gaussian-averaged form and in the
// product-Poisson form obtained by dropping O(nu L S/B) terms.

#include <qfp/errors.hpp>

#include <cmath>
#include <complex>
#include <span>

namespace qfp {

using Complex = std::complex<double>;

namespace detail {
inline Complex expm1_i(double lambda) { return std::polar(1.0, lambda) - 1.0; }
}  // namespace detail

/// Exact Z for per-slot phase differences theta^x - theta^y (radians), with
/// circular Gaussian noise of variance nu on every amplitude. Each port sees
///   exp[w G / (1 - w nu)] (1 - w nu)^(-L),  w = e^{i lambda} - 1,
/// where G = (S/B) sum_l (1 +- cos dtheta_l) is the noiseless port energy.
inline Complex char_fn_exact(std::span<const double> phase_diffs, double s, double bandwidth,
                             double nu, double lambda_plus, double lambda_minus) {
  detail::require(s > 0.0 && bandwidth > 0.0, "char_fn_exact: s and bandwidth must be > 0");
  detail::require(nu >= 0.0, "char_fn_exact: nu must be >= 0");
  const double per_slot = s / bandwidth;
  double cos_sum = 0.0;
  for (double d : phase_diffs) cos_sum += std::cos(d);
  const double slots = static_cast<double>(phase_diffs.size());
  const double g_plus = per_slot * (slots + cos_sum);
  const double g_minus = per_slot * (slots - cos_sum);

  auto port = [&](double lambda, double energy) {
    const Complex w = detail::expm1_i(lambda);
    const Complex denom = 1.0 - w * nu;
    return std::exp(w * energy / denom - slots * std::log(denom));
  };
  return port(lambda_plus, g_plus) * port(lambda_minus, g_minus);
}

/// Product-Poisson Z: exp[w+ mu (1+V)] exp[w- mu (1-V)].
inline Complex char_fn_approx(double v, double mu, double lambda_plus, double lambda_minus) {
  detail::require(mu >= 0.0, "char_fn_approx: mu must be >= 0");
  detail::require(v >= -1.0 && v <= 1.0, "char_fn_approx: visibility must lie in [-1, 1]");
  return std::exp(detail::expm1_i(lambda_plus) * (mu * (1.0 + v)) +
                  detail::expm1_i(lambda_minus) * (mu * (1.0 - v)));
}

struct PoissonModel {
  double mu = 0.0;
  double v = 0.0;
};

/// mu = L (S/B + nu) and V = sum cos(dtheta) / (L (1 + B nu / S)) for a
/// given phase-difference pattern.
inline PoissonModel poisson_model(std::span<const double> phase_diffs, double s,
                                  double bandwidth, double nu) {
  detail::require(!phase_diffs.empty(), "poisson_model: need at least one slot");
  double cos_sum = 0.0;
  for (double d : phase_diffs) cos_sum += std::cos(d);
  const double slots = static_cast<double>(phase_diffs.size());
  return {slots * (s / bandwidth + nu), cos_sum / (slots * (1.0 + bandwidth * nu / s))};
}

}  // namespace qfp
