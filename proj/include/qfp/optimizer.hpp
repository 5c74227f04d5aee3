#pragma once

// Operating-point optimization: choose the code distance delta and rescaled
// bandwidth beta minimizing the signal photon number N_Q subject to both the
// Chernoff (error) and slot-count (duration) requirements.
//
// Both requirements are equal at the optimum, which ties beta to delta via
//   beta r(delta) / (2 (1+beta) C(1/(1+beta), (1-2 delta)/(1+beta))) = noise_param
// and leaves a one-dimensional search over delta.

#include <qfp/chernoff.hpp>
#include <qfp/errors.hpp>
#include <qfp/mathkit.hpp>
#include <qfp/protocol.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <string_view>

namespace qfp {

enum class Regime { near_noiseless, crossover, noise_dominated };

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::near_noiseless: return "near_noiseless";
    case Regime::crossover: return "crossover";
    case Regime::noise_dominated: return "noise_dominated";
  }
  return "unknown";
}

/// Informational label only: < 0.1 near-noiseless, > 10 noise-dominated.
inline Regime classify_regime(double noise_param) {
  if (noise_param < 0.1) return Regime::near_noiseless;
  if (noise_param > 10.0) return Regime::noise_dominated;
  return Regime::crossover;
}

// Search interval for delta; both requirement curves diverge at the ends.
inline constexpr double kDeltaMin = 1e-4;
inline constexpr double kDeltaMax = 0.5 - 1e-6;

// Bracket for log(beta), widened once on failure.
inline constexpr double kLogBetaSpan = 30.0;
inline constexpr double kLogBetaSpanWide = 60.0;
inline constexpr double kResidualLimit = 1e-6;

/// Left-hand side of the implicit beta(delta) relation.
inline double implicit_lhs(double delta, double beta) {
  const VisibilityPair vis = visibilities(delta, beta);
  return beta * gv_rate(delta) / (2.0 * (1.0 + beta) * per_count(vis).per_count);
}

/// Rescaled bandwidth at which the Chernoff and slot requirements coincide
/// for the given delta. Root found by bisection in log(beta).
inline double solve_beta(double delta, double noise_param, const Tolerance& tol = {}) {
  detail::require(delta > 0.0 && delta < 0.5, "solve_beta: delta must lie in (0, 1/2)");
  detail::require(noise_param > 0.0, "solve_beta: noise parameter must be > 0");
  const double log_target = std::log(noise_param);
  auto residual = [&](double log_beta) {
    return std::log(implicit_lhs(delta, std::exp(log_beta))) - log_target;
  };
  // A bracket can also collapse onto a jump of the residual; accept only
  // points where the residual itself is small.
  auto solve = [&](double span) {
    const double log_beta = find_root(residual, -span, span, tol);
    const double r = residual(log_beta);
    if (!(std::abs(r) <= kResidualLimit)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "bisection ended at log(beta) = " << log_beta << " with residual " << r;
      throw SolverError(msg.str());
    }
    return std::exp(log_beta);
  };
  try {
    return solve(kLogBetaSpan);
  } catch (const SolverError&) {
  }
  try {
    return solve(kLogBetaSpanWide);
  } catch (const SolverError& e) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "solve_beta: bracket exhausted for delta = " << delta << ", noise_param = " << noise_param
        << ": residual(" << -kLogBetaSpanWide << ") = " << residual(-kLogBetaSpanWide)
        << ", residual(" << kLogBetaSpanWide << ") = " << residual(kLogBetaSpanWide) << " ("
        << e.what() << ")";
    throw SolverError(msg.str());
  }
}

/// Optimum expressed per unit of log[1/(2 eps)]; depends on the noise
/// parameter alone.
struct NoiseOptimum {
  double noise_param = 0.0;
  double delta_star = 0.0;
  double beta_star = 0.0;
  double nq_factor = 0.0;  // N_Q* / log[1/(2 eps)]
};

inline NoiseOptimum optimize_noise(double noise_param, const Tolerance& tol = {}) {
  detail::require(noise_param > 0.0 && std::isfinite(noise_param),
                  "optimize: noise parameter must be finite and > 0");
  // Slot requirement in units of log[1/(2 eps)].
  auto factor = [&](double delta) {
    return noise_param / (solve_beta(delta, noise_param, tol) * gv_rate(delta));
  };
  const Minimum best = minimize_1d(factor, kDeltaMin, kDeltaMax, tol);
  NoiseOptimum out;
  out.noise_param = noise_param;
  out.delta_star = best.argmin;
  out.beta_star = solve_beta(best.argmin, noise_param, tol);
  out.nq_factor = best.value;
  return out;
}

struct OperatingPoint {
  double delta_star = 0.0;
  double beta_star = 0.0;
  double n_q_star = 0.0;
  double noise_param = 0.0;
  Regime regime = Regime::crossover;
  DerivedModel derived;  // evaluated for unit signal power
};

inline OperatingPoint optimize(double n, double nu, double eps, const Tolerance& tol = {}) {
  ProtocolConfig cfg{n, nu, eps, 1.0, 0.25, 1.0};
  cfg.validate();
  const double noise = noise_parameter(n, nu, eps);
  const NoiseOptimum opt = optimize_noise(noise, tol);

  OperatingPoint point;
  point.delta_star = opt.delta_star;
  point.beta_star = opt.beta_star;
  point.n_q_star = nq_slot_requirement(opt.delta_star, opt.beta_star, n, nu);
  point.noise_param = noise;
  point.regime = classify_regime(noise);
  cfg.delta = opt.delta_star;
  cfg.beta = opt.beta_star;
  point.derived = derive(cfg);
  return point;
}

/// Maximizer of delta^2 r(delta) on [0, 1/2], about 0.244.
inline double delta_tilde() {
  static const double value = [] {
    auto objective = [](double d) { return -d * d * (1.0 - binary_entropy(d)); };
    return minimize_1d(objective, 0.0, 0.5).argmin;
  }();
  return value;
}

/// 1/sqrt(2 delta~^2 r(delta~)), about 6.51.
inline double asymptotic_constant() {
  const double d = delta_tilde();
  return 1.0 / std::sqrt(2.0 * d * d * gv_rate(d));
}

/// Large-noise optimal bandwidth sqrt(N delta~^2 / r(delta~)).
inline double asymptotic_beta(double noise_param) {
  detail::require(noise_param > 0.0, "asymptotic_beta: noise parameter must be > 0");
  const double d = delta_tilde();
  return std::sqrt(noise_param * d * d / gv_rate(d));
}

/// Large-noise optimal photon number, about 6.51 sqrt(n nu log[1/(2 eps)]).
inline double asymptotic_nq(double n, double nu, double eps) {
  detail::require(n >= 1.0, "asymptotic_nq: n must be >= 1");
  detail::require(nu > 0.0, "asymptotic_nq: nu must be > 0");
  return asymptotic_constant() * std::sqrt(n * nu * noiseless_nq(eps));
}

}  // namespace qfp
