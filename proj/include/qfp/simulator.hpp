#pragma once

// Monte Carlo of the full physical chain:
//   Toeplitz ECC -> quadrature PSK -> AWGN -> 50/50 beam splitter
//   -> Poisson photodetection -> likelihood-ratio referee.
//
// Detection is exact: photocounts are Poisson conditional on the optical
// energies I+- computed from the noisy amplitudes, so the small-noise
// Poissonian model is never assumed inside the simulator.

#include <qfp/bits.hpp>
#include <qfp/chernoff.hpp>
#include <qfp/errors.hpp>
#include <qfp/protocol.hpp>
#include <qfp/toeplitz.hpp>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <map>
#include <numbers>
#include <random>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

namespace qfp {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the independent RNG stream owned by one trial.
inline std::uint64_t trial_stream_seed(std::uint64_t seed, std::uint64_t trial) {
  return splitmix64(seed ^ splitmix64(trial));
}

/// L phases, each a multiple of pi/2, stored as quarter turns 0..3.
struct PhaseTuple {
  std::vector<std::uint8_t> quarter_turns;

  std::size_t size() const { return quarter_turns.size(); }
  double radians(std::size_t l) const { return quarter_turns[l] * (std::numbers::pi / 2.0); }

  /// e^{i theta_l}, exact for the four constellation points.
  std::complex<double> phasor(std::size_t l) const {
    static constexpr std::complex<double> table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[quarter_turns[l] & 3u];
  }
};

struct AmplitudeTrain {
  std::vector<std::complex<double>> amps;
  std::size_t size() const { return amps.size(); }
};

struct CountPair {
  std::uint64_t k_plus = 0;
  std::uint64_t k_minus = 0;
  friend auto operator<=>(const CountPair&, const CountPair&) = default;
};

using CountHistogram = std::map<CountPair, std::uint64_t>;

inline void merge_into(CountHistogram& into, const CountHistogram& from) {
  for (const auto& [k, c] : from) into[k] += c;
}

/// Quadrature PSK: bit pair (b1, b2) -> pi b1 + (pi/2)(b1 xor b2), i.e.
/// 00 -> 0, 01 -> pi/2, 11 -> pi, 10 -> 3pi/2.
inline PhaseTuple qpsk_phases(const BitVector& codeword) {
  detail::require(codeword.size() % 2 == 0, "qpsk_phases: codeword length must be even");
  PhaseTuple out;
  out.quarter_turns.resize(codeword.size() / 2);
  for (std::size_t l = 0; l < out.size(); ++l) {
    const unsigned b1 = codeword.get(2 * l);
    const unsigned b2 = codeword.get(2 * l + 1);
    out.quarter_turns[l] = static_cast<std::uint8_t>(2 * b1 + (b1 ^ b2));
  }
  return out;
}

/// Binary PSK without coding: bit z -> pi z, one pulse per bit.
inline PhaseTuple bpsk_phases(const BitVector& bits) {
  PhaseTuple out;
  out.quarter_turns.resize(bits.size());
  for (std::size_t l = 0; l < bits.size(); ++l) out.quarter_turns[l] = bits.get(l) ? 2 : 0;
  return out;
}

/// sqrt(S/B) e^{i theta} plus circular Gaussian noise with E|xi|^2 = nu
/// (nu/2 per quadrature). nu = 0 gives the noiseless amplitudes exactly.
template <typename Engine>
AmplitudeTrain apply_awgn(const PhaseTuple& phases, double signal_per_slot, double nu,
                          Engine& rng) {
  detail::require(signal_per_slot >= 0.0, "apply_awgn: signal per slot must be >= 0");
  detail::require(nu >= 0.0, "apply_awgn: nu must be >= 0");
  const double amplitude = std::sqrt(signal_per_slot);
  AmplitudeTrain out;
  out.amps.resize(phases.size());
  if (nu == 0.0) {
    for (std::size_t l = 0; l < phases.size(); ++l) out.amps[l] = amplitude * phases.phasor(l);
    return out;
  }
  boost::random::normal_distribution<double> gauss(0.0, std::sqrt(nu / 2.0));
  for (std::size_t l = 0; l < phases.size(); ++l) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    out.amps[l] = amplitude * phases.phasor(l) + std::complex<double>(re, im);
  }
  return out;
}

template <typename Engine>
AmplitudeTrain apply_awgn(const PhaseTuple& phases, double s, double bandwidth, double nu,
                          Engine& rng) {
  detail::require(s > 0.0 && bandwidth > 0.0, "apply_awgn: s and bandwidth must be > 0");
  return apply_awgn(phases, s / bandwidth, nu, rng);
}

struct PortEnergies {
  double plus = 0.0;
  double minus = 0.0;
};

/// I+- = sum_l |(a_l +- b_l)/sqrt(2)|^2.
inline PortEnergies beam_splitter_energies(const AmplitudeTrain& a, const AmplitudeTrain& b) {
  detail::require(a.size() == b.size(), "detect: amplitude trains must have equal length");
  PortEnergies e;
  for (std::size_t l = 0; l < a.size(); ++l) {
    e.plus += std::norm(a.amps[l] + b.amps[l]);
    e.minus += std::norm(a.amps[l] - b.amps[l]);
  }
  e.plus *= 0.5;
  e.minus *= 0.5;
  return e;
}

inline constexpr double kMaxPoissonMean = 1e6;

template <typename Engine>
std::uint64_t sample_poisson(double mean, Engine& rng) {
  detail::require(mean >= 0.0, "poisson: mean must be >= 0");
  if (mean >= kMaxPoissonMean) {
    throw CapacityError("poisson: mean photocount " + std::to_string(mean) +
                        " exceeds the supported limit of 1e6");
  }
  if (mean == 0.0) return 0;
  boost::random::poisson_distribution<std::int64_t, double> dist(mean);
  return static_cast<std::uint64_t>(dist(rng));
}

template <typename Engine>
CountPair detect(const AmplitudeTrain& a, const AmplitudeTrain& b, Engine& rng) {
  const PortEnergies e = beam_splitter_energies(a, b);
  CountPair k;
  k.k_plus = sample_poisson(e.plus, rng);
  k.k_minus = sample_poisson(e.minus, rng);
  return k;
}

enum class Hypothesis { equal, different };

inline std::string_view to_string(Hypothesis h) {
  return h == Hypothesis::equal ? "equal" : "different";
}

/// log p(k | V_e) - log p(k | V_d). The mu-dependent terms cancel, and a
/// zero count contributes nothing even when its log-ratio is infinite.
inline double log_likelihood_ratio(const CountPair& k, const VisibilityPair& vis) {
  // count * log[(den + diff) / den]
  auto term = [](std::uint64_t count, double diff, double den) {
    if (count == 0 || diff == 0.0) return 0.0;
    return static_cast<double>(count) * std::log1p(diff / den);
  };
  const double diff = vis.v_e - vis.v_d;
  return term(k.k_plus, diff, 1.0 + vis.v_d) + term(k.k_minus, -diff, 1.0 - vis.v_d);
}

/// Likelihood-ratio test for equiprobable hypotheses. An exact tie is broken
/// by a fair coin; the coin is drawn on every call.
template <typename Engine>
Hypothesis referee_decide(const CountPair& counts, double mu, const VisibilityPair& vis,
                          Engine& rng) {
  detail::require(mu > 0.0, "referee: mu must be > 0");
  vis.validate();
  const bool coin = (rng() >> 63) != 0;
  const double llr = log_likelihood_ratio(counts, vis);
  if (llr > 0.0) return Hypothesis::equal;
  if (llr < 0.0) return Hypothesis::different;
  return coin ? Hypothesis::equal : Hypothesis::different;
}

/// Physical parameters of one simulated link.
struct SimulationSetup {
  std::uint64_t n = 1;            // input bits fed to the code
  std::uint64_t l_slots = 1;      // pulses per sender
  double signal_per_slot = 0.0;   // S/B
  double nu = 0.0;                // noise photons per slot
  double delta = 0.25;            // design minimum relative distance
  std::uint64_t slot_limit = 100'000'000;

  std::uint64_t m() const { return 2 * l_slots; }
  std::uint64_t planted_distance() const {
    return static_cast<std::uint64_t>(std::ceil(delta * static_cast<double>(m())));
  }
  double mu() const { return static_cast<double>(l_slots) * (signal_per_slot + nu); }

  /// Visibilities the referee assumes: V_e = (S/B)/(S/B + nu), V_d = (1-2 delta) V_e.
  VisibilityPair design_visibilities() const {
    const double v_e = signal_per_slot / (signal_per_slot + nu);
    return {v_e, (1.0 - 2.0 * delta) * v_e};
  }

  void validate() const {
    detail::require(n >= 1, "simulation: n must be >= 1");
    detail::require(l_slots >= 1, "simulation: need at least one slot");
    detail::require(m() >= n, "simulation: codeword shorter than input");
    detail::require(signal_per_slot > 0.0, "simulation: signal per slot must be > 0");
    detail::require(nu >= 0.0, "simulation: nu must be >= 0");
    detail::require(delta >= 0.0 && delta < 0.5, "simulation: delta must lie in [0, 1/2)");
    if (l_slots > slot_limit) {
      throw CapacityError("simulation: " + std::to_string(l_slots) + " slots exceed the limit of " +
                          std::to_string(slot_limit));
    }
  }

  /// Slots from the Gilbert-Varshamov length ceil(n / (2 r(delta))), S/B = nu/beta.
  static SimulationSetup from_config(const ProtocolConfig& cfg) {
    cfg.validate();
    detail::require(cfg.n == std::floor(cfg.n), "simulation: n must be an integer");
    SimulationSetup s;
    s.n = static_cast<std::uint64_t>(cfg.n);
    s.l_slots = derive(cfg).l_slots;
    s.signal_per_slot = cfg.nu / cfg.beta;
    s.nu = cfg.nu;
    s.delta = cfg.delta;
    return s;
  }

  /// Bench-scale link with a prescribed mean count mu over l_slots pulses:
  /// S/B = mu / (L (1+beta)) and nu = beta S/B.
  static SimulationSetup for_mean_count(double mu, double delta, double beta,
                                        std::uint64_t l_slots) {
    detail::require(mu > 0.0 && beta > 0.0 && l_slots >= 1,
                    "simulation: need mu > 0, beta > 0 and at least one slot");
    SimulationSetup s;
    s.l_slots = l_slots;
    s.delta = delta;
    s.signal_per_slot = mu / (static_cast<double>(l_slots) * (1.0 + beta));
    s.nu = beta * s.signal_per_slot;
    const double two_r_l = 2.0 * gv_rate(delta) * static_cast<double>(l_slots);
    s.n = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(two_r_l)));
    return s;
  }
};

enum class TrialMode { random_inputs, worst_case_distance, equal_inputs };

inline std::string_view to_string(TrialMode m) {
  switch (m) {
    case TrialMode::random_inputs: return "random_inputs";
    case TrialMode::worst_case_distance: return "worst_case_distance";
    case TrialMode::equal_inputs: return "equal_inputs";
  }
  return "unknown";
}

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double half_width() const { return 0.5 * (hi - lo); }
};

/// Wilson score interval for a binomial proportion; z = 1.959964 gives 95%.
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  detail::require(trials > 0, "wilson_interval: need at least one trial");
  detail::require(successes <= trials, "wilson_interval: successes exceed trials");
  const double nt = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double center = (p + z2 / (2.0 * nt)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt)) / denom;
  const double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ99 = 2.5758293035489004;

/// Aggregate of a batch. Every trial runs one equal-inputs instance and,
/// outside equal_inputs mode, one different-inputs instance.
struct TrialBatch {
  TrialMode mode = TrialMode::worst_case_distance;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t runs_equal = 0;
  std::uint64_t runs_different = 0;
  std::uint64_t errors_equal = 0;
  std::uint64_t errors_different = 0;
  double avg_error = 0.0;
  Interval wilson_ci;  // 95%, on the pooled error count
  double mu = 0.0;
  VisibilityPair vis;
  double chernoff_bound = 0.5;
  CountHistogram count_histogram;            // equal-inputs instances
  CountHistogram count_histogram_different;  // different-inputs instances

  std::uint64_t runs() const { return runs_equal + runs_different; }
  std::uint64_t errors() const { return errors_equal + errors_different; }

  /// Equal-prior average over the hypotheses that were exercised.
  void finalize() {
    if (runs_equal > 0 && runs_different > 0) {
      avg_error = 0.5 * (static_cast<double>(errors_equal) / static_cast<double>(runs_equal) +
                         static_cast<double>(errors_different) /
                             static_cast<double>(runs_different));
    } else if (runs() > 0) {
      avg_error = static_cast<double>(errors()) / static_cast<double>(runs());
    }
    if (runs() > 0) wilson_ci = wilson_interval(errors(), runs(), kZ95);
  }

  void merge(const TrialBatch& other) {
    trials += other.trials;
    runs_equal += other.runs_equal;
    runs_different += other.runs_different;
    errors_equal += other.errors_equal;
    errors_different += other.errors_different;
    merge_into(count_histogram, other.count_histogram);
    merge_into(count_histogram_different, other.count_histogram_different);
  }
};

namespace detail {

// Codeword at Hamming distance exactly `distance` from `base`, with the
// differing positions uniform over all subsets (Floyd's sampling).
template <typename Engine>
BitVector plant_distance(const BitVector& base, std::uint64_t distance, Engine& rng) {
  const std::uint64_t m = base.size();
  BitVector mask(m);
  for (std::uint64_t j = m - distance; j < m; ++j) {
    boost::random::uniform_int_distribution<std::uint64_t> pick(0, j);
    const std::uint64_t t = pick(rng);
    mask.set(mask.get(t) ? j : t, true);
  }
  return base ^ mask;
}

struct TrialContext {
  const SimulationSetup& setup;
  TrialMode mode;
  const ToeplitzCode* code;
  double mu;
  VisibilityPair vis;
};

template <typename Engine>
Hypothesis run_instance(const TrialContext& ctx, const BitVector& cx, const BitVector& cy,
                        Engine& rng, CountHistogram& hist) {
  const AmplitudeTrain a = apply_awgn(qpsk_phases(cx), ctx.setup.signal_per_slot, ctx.setup.nu, rng);
  const AmplitudeTrain b = apply_awgn(qpsk_phases(cy), ctx.setup.signal_per_slot, ctx.setup.nu, rng);
  const CountPair counts = detect(a, b, rng);
  ++hist[counts];
  return referee_decide(counts, ctx.mu, ctx.vis, rng);
}

inline void run_trial(const TrialContext& ctx, std::uint64_t seed, std::uint64_t trial,
                      TrialBatch& acc) {
  Rng rng(trial_stream_seed(seed, trial));
  const SimulationSetup& s = ctx.setup;
  ++acc.trials;

  // Equal inputs: same codeword on both arms, independent noise.
  BitVector cx;
  BitVector x;
  if (ctx.mode == TrialMode::worst_case_distance) {
    cx = BitVector::random(s.m(), rng);
  } else {
    x = BitVector::random(s.n, rng);
    cx = ctx.code->encode(x);
  }
  ++acc.runs_equal;
  if (run_instance(ctx, cx, cx, rng, acc.count_histogram) != Hypothesis::equal) {
    ++acc.errors_equal;
  }
  if (ctx.mode == TrialMode::equal_inputs) return;

  BitVector cy;
  if (ctx.mode == TrialMode::worst_case_distance) {
    cy = plant_distance(cx, s.planted_distance(), rng);
  } else {
    BitVector y = BitVector::random(s.n, rng);
    while (y == x) y = BitVector::random(s.n, rng);
    cy = ctx.code->encode(y);
  }
  ++acc.runs_different;
  if (run_instance(ctx, cx, cy, rng, acc.count_histogram_different) != Hypothesis::different) {
    ++acc.errors_different;
  }
}

}  // namespace detail

/// Runs `trials` independent trials. Each trial owns an RNG stream keyed by
/// (seed, trial index), so the batch is bit-identical for any thread count.
/// Random-input modes draw one Toeplitz code per batch from the seed.
inline TrialBatch run_trials(const SimulationSetup& setup, TrialMode mode, std::uint64_t trials,
                             std::uint64_t seed, unsigned threads = 1) {
  setup.validate();
  detail::require(trials >= 1, "run_trials: need at least one trial");

  TrialBatch batch;
  batch.mode = mode;
  batch.seed = seed;
  batch.mu = setup.mu();
  batch.vis = setup.design_visibilities();
  batch.chernoff_bound = error_bound(batch.mu, batch.vis);

  ToeplitzCode code;
  if (mode != TrialMode::worst_case_distance) {
    code = ToeplitzCode::random(setup.n, setup.m(), splitmix64(seed ^ 0x746f65706c69747aULL));
  }
  const detail::TrialContext ctx{setup, mode, &code, batch.mu, batch.vis};

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(trials, 256))));
  std::vector<TrialBatch> parts(threads);
  auto work = [&](unsigned part) {
    const std::uint64_t begin = trials * part / threads;
    const std::uint64_t end = trials * (part + 1) / threads;
    for (std::uint64_t t = begin; t < end; ++t) detail::run_trial(ctx, seed, t, parts[part]);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    std::vector<std::exception_ptr> failures(threads);
    for (unsigned p = 0; p < threads; ++p) {
      pool.emplace_back([&, p] {
        try {
          work(p);
        } catch (...) {
          failures[p] = std::current_exception();
        }
      });
    }
    pool.clear();
    for (const auto& f : failures)
      if (f) std::rethrow_exception(f);
  }
  for (const auto& part : parts) batch.merge(part);
  batch.finalize();
  return batch;
}

inline TrialBatch run_trials(const ProtocolConfig& cfg, TrialMode mode, std::uint64_t trials,
                             std::uint64_t seed, unsigned threads = 1) {
  return run_trials(SimulationSetup::from_config(cfg), mode, trials, seed, threads);
}

}  // namespace qfp
