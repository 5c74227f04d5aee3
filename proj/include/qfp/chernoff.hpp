#pragma once

// Chernoff information per photocount for discriminating two interference
// visibilities from a pair of Poissonian photocounts.
//
// For visibilities (a, b) the per-count exponent at order lambda is
//
//   F(lambda) = 1 - (1/2) [ (1+a)^l (1+b)^(1-l) + (1-a)^l (1-b)^(1-l) ]
//
// and the Chernoff information per count is max over lambda in [0, 1] of F.
// F is evaluated as a sum of two non-negative weighted AM-GM gaps so that it
// keeps full relative precision when both visibilities are tiny, which is the
// regime the large-noise optimizer lives in.

#include <qfp/errors.hpp>
#include <qfp/mathkit.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

namespace qfp {

/// Interference visibilities under the equal-inputs (v_e) and worst-case
/// different-inputs (v_d) hypotheses. Invariant: 0 <= v_d <= v_e <= 1.
struct VisibilityPair {
  double v_e = 0.0;
  double v_d = 0.0;

  static VisibilityPair make(double v_e, double v_d) {
    VisibilityPair vis{v_e, v_d};
    vis.validate();
    return vis;
  }

  void validate() const {
    detail::require(v_e >= 0.0 && v_e <= 1.0, "visibility: v_e must lie in [0, 1]");
    detail::require(v_d >= 0.0 && v_d <= 1.0, "visibility: v_d must lie in [0, 1]");
    detail::require(v_d <= v_e, "visibility: need v_d <= v_e");
  }

  friend bool operator==(const VisibilityPair&, const VisibilityPair&) = default;
};

enum class ChernoffMethod { closed_form, numeric_fallback };

inline std::string_view to_string(ChernoffMethod m) {
  return m == ChernoffMethod::closed_form ? "closed_form" : "numeric_fallback";
}

struct ChernoffResult {
  double lambda_star = 0.5;
  double per_count = 0.0;  // nats per count
  ChernoffMethod method = ChernoffMethod::closed_form;
};

namespace detail {

// phi(l, u) = l (e^u - 1) - (e^{l u} - 1) >= 0 for l in [0, 1].
inline double amgm_kernel(double lambda, double u) {
  if (std::abs(u) < 1.0) {
    // sum_{k>=2} (l - l^k) u^k / k!
    double sum = 0.0;
    double term = u;  // u^k / k!
    double lambda_pow = lambda;
    for (int k = 2; k < 60; ++k) {
      term *= u / k;
      lambda_pow *= lambda;
      const double add = (lambda - lambda_pow) * term;
      sum += add;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return lambda * std::expm1(u) - std::expm1(lambda * u);
}

// l x + (1-l) y - x^l y^(1-l) for x, y >= 0, with diff = x - y supplied
// separately so small differences are not recomputed from rounded x and y.
// Zero arguments use the limit taken from the interior of [0, 1].
inline double amgm_gap(double x, double y, double diff, double lambda) {
  if (diff == 0.0) return 0.0;
  if (y == 0.0) return x * lambda;
  if (x == 0.0) return y * (1.0 - lambda);
  return y * amgm_kernel(lambda, std::log1p(diff / y));
}

}  // namespace detail

/// F(lambda) for an arbitrary pair (a, b) in [0, 1]^2.
inline double chernoff_exponent(double a, double b, double lambda) {
  const double diff = a - b;
  return 0.5 * (detail::amgm_gap(1.0 + a, 1.0 + b, diff, lambda) +
                detail::amgm_gap(1.0 - a, 1.0 - b, -diff, lambda));
}

/// Stationary point of F in closed form, before clamping. Empty when any of
/// the logarithms involved is singular (a = 1, b = 1, or a = b) or the result
/// is not finite.
inline std::optional<double> lambda_star_closed_form(double a, double b) {
  if (a == b || a >= 1.0 || b >= 1.0) return std::nullopt;
  const double diff = a - b;
  const double u_plus = std::log1p(diff / (1.0 + b));    // log[(1+a)/(1+b)]
  const double u_minus = std::log1p(-diff / (1.0 - b));  // log[(1-a)/(1-b)]
  const double ratio = -u_minus / u_plus;
  if (!(ratio > 0.0) || !std::isfinite(ratio)) return std::nullopt;
  const double numerator = std::log1p(-2.0 * b / (1.0 + b)) + std::log(ratio);
  const double lambda = numerator / (u_plus - u_minus);
  if (!std::isfinite(lambda)) return std::nullopt;
  return lambda;
}

inline constexpr double kSmallVisibility = 1e-5;

/// Chernoff information per count over the full square [0, 1]^2. Symmetric
/// under (a, b) -> (b, a) with lambda -> 1 - lambda.
inline ChernoffResult chernoff_surface(double a, double b) {
  detail::require(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0,
                  "chernoff: visibilities must lie in [0, 1]");
  if (a == b) return {0.5, 0.0, ChernoffMethod::closed_form};

  // lambda* = 1/2 + O(max(a, b)^2); below this scale the closed form is
  // dominated by rounding.
  if (std::max(a, b) < kSmallVisibility) {
    return {0.5, chernoff_exponent(a, b, 0.5), ChernoffMethod::closed_form};
  }

  if (const auto closed = lambda_star_closed_form(a, b)) {
    const double lambda = std::clamp(*closed, 0.0, 1.0);
    return {lambda, chernoff_exponent(a, b, lambda), ChernoffMethod::closed_form};
  }

  const auto best = minimize_1d([&](double l) { return -chernoff_exponent(a, b, l); }, 0.0, 1.0);
  return {best.argmin, -best.value, ChernoffMethod::numeric_fallback};
}

/// Optimal Chernoff exponent lambda*. Throws DegenerateError when v_e == v_d
/// since every lambda is then optimal.
inline double lambda_star(const VisibilityPair& vis) {
  vis.validate();
  if (vis.v_e == vis.v_d) {
    throw DegenerateError("lambda_star: v_e == v_d, every exponent is optimal");
  }
  return chernoff_surface(vis.v_e, vis.v_d).lambda_star;
}

/// Chernoff information per count C(v_e, v_d), in nats. Exactly 0 with
/// lambda* = 1/2 when the visibilities coincide.
inline ChernoffResult per_count(const VisibilityPair& vis) {
  vis.validate();
  return chernoff_surface(vis.v_e, vis.v_d);
}

/// Low-visibility approximation (v_e - v_d)^2 / 8.
inline double per_count_low_vis(const VisibilityPair& vis) {
  vis.validate();
  const double d = vis.v_e - vis.v_d;
  return d * d / 8.0;
}

/// Chernoff upper bound on the average error of the equality test with mu
/// mean photocounts per sender: (1/2) exp[-2 mu C(v_e, v_d)].
inline double error_bound(double mu, const VisibilityPair& vis) {
  detail::require(mu >= 0.0, "error_bound: mu must be >= 0");
  return 0.5 * std::exp(-2.0 * mu * per_count(vis).per_count);
}

}  // namespace qfp
