#pragma once

// Analytical model of the noisy coherent-state fingerprinting protocol:
// visibilities, photocount statistics, the two photon-budget requirements,
// the noise parameter and the phase-reference overhead.

#include <qfp/chernoff.hpp>
#include <qfp/errors.hpp>
#include <qfp/mathkit.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace qfp {

/// One problem instance. n, nu, eps and s describe the task and the link;
/// delta (code distance) and beta = B nu / S (rescaled bandwidth) are the
/// free design variables.
struct ProtocolConfig {
  double n = 1.0;       // input length, bits
  double nu = 1e-7;     // noise PSD, photons per unit time per unit bandwidth
  double eps = 1e-5;    // target average error probability
  double s = 1.0;       // signal power, photons per unit time
  double delta = 0.25;  // minimum relative Hamming distance of the code
  double beta = 1.0;    // rescaled bandwidth

  /// Throws DomainError on a violated invariant. Returns non-fatal warnings.
  std::vector<std::string> validate() const {
    detail::require(n >= 1.0, "config: n must be >= 1");
    detail::require(nu > 0.0, "config: nu must be > 0");
    detail::require(eps > 0.0 && eps < 0.5, "config: eps must lie in (0, 1/2)");
    detail::require(s > 0.0, "config: s must be > 0");
    detail::require(delta >= 0.0 && delta < 0.5, "config: delta must lie in [0, 1/2)");
    detail::require(beta > 0.0, "config: beta must be > 0");
    std::vector<std::string> warnings;
    if (nu > 1e-2) {
      warnings.push_back("nu = " + std::to_string(nu) +
                         " is outside the nu << 1 regime; the Poissonian photocount model "
                         "is only approximate there");
    }
    return warnings;
  }
};

struct DerivedModel {
  std::uint64_t l_slots = 0;  // ceil(n / (2 r(delta))), used by the simulator
  double l_real = 0.0;        // n / (2 r(delta)), used by the analytical formulas
  double bandwidth = 0.0;     // B = beta S / nu
  double mu = 0.0;            // mean photocounts per sender, n_q (1 + beta)
  VisibilityPair vis;
  double n_q = 0.0;  // signal photons per sender, S L / B
};

/// V_e = 1/(1+beta), V_d = (1-2 delta)/(1+beta).
inline VisibilityPair visibilities(double delta, double beta) {
  detail::require(delta >= 0.0 && delta < 0.5, "visibilities: delta must lie in [0, 1/2)");
  detail::require(beta > 0.0, "visibilities: beta must be > 0");
  const double v_e = 1.0 / (1.0 + beta);
  return {v_e, (1.0 - 2.0 * delta) / (1.0 + beta)};
}

inline DerivedModel derive(const ProtocolConfig& cfg) {
  cfg.validate();
  DerivedModel d;
  const double rate = gv_rate(cfg.delta);
  d.l_real = cfg.n / (2.0 * rate);
  d.l_slots = static_cast<std::uint64_t>(std::ceil(d.l_real));
  d.bandwidth = cfg.beta * cfg.s / cfg.nu;
  d.n_q = cfg.n * cfg.nu / (2.0 * cfg.beta * rate);
  d.mu = d.n_q * (1.0 + cfg.beta);
  d.vis = visibilities(cfg.delta, cfg.beta);
  return d;
}

/// log of the Poisson pmf; a zero mean puts all mass on k = 0.
inline double poisson_log_pmf(std::uint64_t k, double mean) {
  if (mean == 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  const double kd = static_cast<double>(k);
  return kd * std::log(mean) - mean - std::lgamma(kd + 1.0);
}

/// log p(k+, k- | V): independent Poisson counts with means mu(1 +- V).
inline double photocount_log_pmf(std::uint64_t k_plus, std::uint64_t k_minus, double mu,
                                 double v) {
  detail::require(mu >= 0.0, "photocount_pmf: mu must be >= 0");
  detail::require(v >= -1.0 && v <= 1.0, "photocount_pmf: visibility must lie in [-1, 1]");
  return poisson_log_pmf(k_plus, mu * (1.0 + v)) + poisson_log_pmf(k_minus, mu * (1.0 - v));
}

inline double photocount_pmf(std::uint64_t k_plus, std::uint64_t k_minus, double mu, double v) {
  return std::exp(photocount_log_pmf(k_plus, k_minus, mu, v));
}

/// log[1/(2 eps)], the photon number needed without noise (natural log).
inline double noiseless_nq(double eps) {
  detail::require(eps > 0.0 && eps < 0.5, "noiseless_nq: eps must lie in (0, 1/2)");
  return -std::log(2.0 * eps);
}

/// Signal photons per sender that make the Chernoff bound reach eps.
inline double nq_chernoff_requirement(double delta, double beta, double eps) {
  detail::require(delta > 0.0,
                  "nq_chernoff_requirement: diverges at delta = 0 (no distance, no information)");
  const VisibilityPair vis = visibilities(delta, beta);
  const double c = per_count(vis).per_count;
  return noiseless_nq(eps) / (2.0 * (1.0 + beta) * c);
}

/// Signal photons per sender needed to fit n/(2 r(delta)) slots of width
/// 1/B = nu/(beta S) into the transmission time.
inline double nq_slot_requirement(double delta, double beta, double n, double nu) {
  detail::require(n >= 1.0, "nq_slot_requirement: n must be >= 1");
  detail::require(nu > 0.0, "nq_slot_requirement: nu must be > 0");
  detail::require(beta > 0.0, "nq_slot_requirement: beta must be > 0");
  detail::require(delta < 0.5, "nq_slot_requirement: diverges as delta -> 1/2");
  return (n * nu / 2.0) / (beta * gv_rate(delta));
}

/// Noise parameter (n nu / 2) / log[1/(2 eps)].
inline double noise_parameter(double n, double nu, double eps) {
  detail::require(n >= 1.0, "noise_parameter: n must be >= 1");
  detail::require(nu > 0.0, "noise_parameter: nu must be > 0");
  return (n * nu / 2.0) / noiseless_nq(eps);
}

struct PhaseOverhead {
  double n_est = 0.0;          // photons spent on relative-phase estimation
  double w = 1.0;              // visibility reduction factor
  double nq_multiplier = 1.0;  // 1/W, applied to the large-noise N_Q*
};

/// Reference-signal overhead for a relative-phase uncertainty dphi (radians).
inline PhaseOverhead phase_overhead(double dphi) {
  detail::require(dphi > 0.0, "phase_overhead: dphi must be > 0");
  const double var = dphi * dphi;
  PhaseOverhead out;
  out.n_est = 18.0 / var;
  out.w = std::exp(-var / 2.0);
  out.nq_multiplier = std::exp(var / 2.0);
  return out;
}

/// Same, parameterized by the target visibility factor W in (0, 1).
inline PhaseOverhead phase_overhead_for_w(double w) {
  detail::require(w > 0.0 && w < 1.0, "phase_overhead: W must lie in (0, 1)");
  return phase_overhead(std::sqrt(-2.0 * std::log(w)));
}

}  // namespace qfp
