#pragma once

// The `qfp` command-line front end. run_cli() parses argv, dispatches to one
// subcommand and maps library exceptions to exit codes:
//   0 ok, 2 domain error (or bad usage), 3 solver failure, 4 resource limit.

#include <qfp/chernoff.hpp>
#include <qfp/classical.hpp>
#include <qfp/errors.hpp>
#include <qfp/format.hpp>
#include <qfp/optimizer.hpp>
#include <qfp/protocol.hpp>
#include <qfp/simulator.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace qfp::cli {

inline constexpr std::uint64_t kDefaultSeed = 20240917;
inline constexpr const char* kSeedEnv = "QFP_SEED";

enum ExitCode : int { kOk = 0, kDomain = 2, kSolver = 3, kCapacity = 4 };

/// --seed if given, else $QFP_SEED, else kDefaultSeed.
inline std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
    std::uint64_t value = 0;
    const std::string_view s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw DomainError(std::string(kSeedEnv) + " must be an unsigned 64-bit integer, got '" +
                        env + "'");
    }
    return value;
  }
  return kDefaultSeed;
}

/// Canonical command line for a parsed subcommand: every option the user set,
/// in declaration order, with the seed replaced by its resolved value.
inline std::string echo_command(const CLI::App& sub, std::uint64_t seed) {
  std::string out = "qfp " + sub.get_name();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_name();
    if (name == "--seed" || name == "--help" || opt->count() == 0) continue;
    out += " " + name;
    if (opt->get_expected_min() == 0) continue;  // flag
    for (const auto& r : opt->results()) out += " " + shell_quote(r);
  }
  out += " --seed " + std::to_string(seed);
  return out;
}

inline std::string csv_header_comment(const std::string& command, std::uint64_t seed) {
  return "# qfp " + std::string(kVersion) + " | " + command + " | seed=" + std::to_string(seed);
}

/// Opens `path` for writing, or returns the fallback stream for "" and "-".
class OutputTarget {
 public:
  OutputTarget(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw DomainError("cannot open output file '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

inline void emit(const Report& r, bool json, std::ostream& out) {
  if (json) {
    out << r.to_json().dump(2) << '\n';
  } else {
    r.print(out);
  }
}

// ---------------------------------------------------------------------------
// chernoff

struct ChernoffArgs {
  double ve = 1.0;
  double vd = 0.0;
  bool json = false;
};

inline int cmd_chernoff(const ChernoffArgs& a, std::ostream& out) {
  const VisibilityPair vis = VisibilityPair::make(a.ve, a.vd);
  const ChernoffResult r = per_count(vis);
  Report rep;
  rep.add("v_e", vis.v_e)
      .add("v_d", vis.v_d)
      .add("lambda_star", r.lambda_star)
      .add("per_count", r.per_count)
      .add("per_count_low_vis", per_count_low_vis(vis))
      .add("method", std::string(to_string(r.method)));
  emit(rep, a.json, out);
  return kOk;
}

// ---------------------------------------------------------------------------
// optimize

struct OptimizeArgs {
  double n = 1e12;
  double nu = 1e-7;
  double eps = 1e-5;
  bool json = false;
};

inline Report optimize_report(double n, double nu, double eps) {
  const OperatingPoint op = optimize(n, nu, eps);
  const double asym = asymptotic_nq(n, nu, eps);
  Report rep;
  rep.add("n", n)
      .add("nu", nu)
      .add("eps", eps)
      .add("noise_param", op.noise_param)
      .add("regime", std::string(to_string(op.regime)))
      .add("delta_star", op.delta_star)
      .add("r_delta_star", gv_rate(op.delta_star))
      .add("beta_star", op.beta_star)
      .add("nq_star", op.n_q_star)
      .add("nq_noiseless", noiseless_nq(eps))
      .add("nq_asymptotic", asym)
      .add("nq_over_asymptotic", op.n_q_star / asym)
      .add("slots", op.derived.l_real)
      .add("bandwidth_unit_s", op.derived.bandwidth)
      .add("mu", op.derived.mu)
      .add("v_e", op.derived.vis.v_e)
      .add("v_d", op.derived.vis.v_d)
      .add("chernoff_bound", error_bound(op.derived.mu, op.derived.vis));
  return rep;
}

inline int cmd_optimize(const OptimizeArgs& a, std::ostream& out) {
  emit(optimize_report(a.n, a.nu, a.eps), a.json, out);
  return kOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  std::string axis = "noise_param";
  double from = 1e-4;
  double to = 1e4;
  std::uint64_t points = 81;
  double nu = 1e-7;
  double eps = 1e-5;
  std::string output;
  std::string format = "csv";
  unsigned threads = 1;
};

inline const std::vector<std::string>& sweep_columns(const std::string& axis) {
  static const std::vector<std::string> noise_cols{
      "noise_param", "delta_star",      "r_delta_star",
      "beta_star",   "beta_asymptotic", "nq_over_log_inv_2eps"};
  static const std::vector<std::string> n_cols{"n",   "noise_param", "nq_star",     "nq_asymptotic",
                                               "n_c", "n_b",         "nq_noiseless"};
  return axis == "n" ? n_cols : noise_cols;
}

/// `points` values from `from` to `to`, equally spaced in log10; the end
/// points are returned exactly.
inline std::vector<double> log_space(double from, double to, std::uint64_t points) {
  detail::require(from > 0.0 && to > 0.0, "sweep: range endpoints must be > 0");
  detail::require(points >= 2, "sweep: need at least 2 points");
  std::vector<double> xs(points);
  const double a = std::log10(from);
  const double b = std::log10(to);
  for (std::uint64_t i = 0; i < points; ++i) {
    xs[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  xs.front() = from;
  xs.back() = to;
  return xs;
}

struct SweepRow {
  double x = 0.0;
  std::vector<double> values;  // empty on failure
  std::string error;
  int code = kOk;
};

inline std::vector<double> sweep_values(const SweepArgs& a, double x) {
  if (a.axis == "n") {
    const OperatingPoint op = optimize(x, a.nu, a.eps);
    const ClassicalBaseline cb = baseline(x, a.nu, a.eps);
    return {x,      op.noise_param, op.n_q_star, asymptotic_nq(x, a.nu, a.eps),
            cb.n_c, cb.n_b,         noiseless_nq(a.eps)};
  }
  const NoiseOptimum opt = optimize_noise(x);
  return {x,  opt.delta_star, gv_rate(opt.delta_star), opt.beta_star, asymptotic_beta(x),
          opt.nq_factor};
}

template <typename F>
int guarded(F&& f, std::string* message);

inline std::vector<SweepRow> run_sweep(const SweepArgs& a) {
  detail::require(a.axis == "noise_param" || a.axis == "n",
                  "sweep: axis must be noise_param or n");
  const std::vector<double> xs = log_space(a.from, a.to, a.points);
  std::vector<SweepRow> rows(xs.size());
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < xs.size(); i += stride) {
      rows[i].x = xs[i];
      rows[i].code = guarded([&] { rows[i].values = sweep_values(a, xs[i]); }, &rows[i].error);
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(a.threads, xs.size()));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }
  return rows;
}

inline void write_sweep_csv(const SweepArgs& a, const std::vector<SweepRow>& rows,
                            const std::string& header, std::ostream& os) {
  const auto& cols = sweep_columns(a.axis);
  os << header << '\n';
  for (const auto& c : cols) os << c << ',';
  os << "error\n";
  for (const auto& row : rows) {
    if (row.values.empty()) {
      os << format_number(row.x);
      for (std::size_t i = 1; i < cols.size(); ++i) os << ',';
    } else {
      for (std::size_t i = 0; i < row.values.size(); ++i) {
        os << (i ? "," : "") << format_number(row.values[i]);
      }
    }
    os << ',' << csv_field(row.error) << '\n';
  }
}

inline void write_sweep_json(const SweepArgs& a, const std::vector<SweepRow>& rows,
                             const std::string& command, std::uint64_t seed, std::ostream& os) {
  const auto& cols = sweep_columns(a.axis);
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["command"] = command;
  j["seed"] = seed;
  j["columns"] = cols;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json r;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (!row.values.empty()) {
        r[cols[i]] = row.values[i];
      } else if (i == 0) {
        r[cols[i]] = row.x;
      } else {
        r[cols[i]] = nullptr;
      }
    }
    r["error"] = row.error;
    j["rows"].push_back(std::move(r));
  }
  os << j.dump(2) << '\n';
}

/// Exit 0 when at least 90% of the rows succeed, otherwise the code of the
/// first failure.
inline int cmd_sweep(const SweepArgs& a, const std::string& command, std::uint64_t seed,
                     std::ostream& out, std::ostream& err) {
  detail::require(a.format == "csv" || a.format == "json", "sweep: format must be csv or json");
  const std::vector<SweepRow> rows = run_sweep(a);
  OutputTarget target(a.output, out);
  if (a.format == "json") {
    write_sweep_json(a, rows, command, seed, target.get());
  } else {
    write_sweep_csv(a, rows, csv_header_comment(command, seed), target.get());
  }
  std::size_t failed = 0;
  int first_code = kOk;
  for (const auto& row : rows) {
    if (row.code == kOk) continue;
    if (failed++ == 0) first_code = row.code;
    err << "sweep: row " << format_number(row.x) << " failed: " << row.error << '\n';
  }
  if (10 * (rows.size() - failed) >= 9 * rows.size()) return kOk;
  return first_code;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::optional<double> n, nu, eps, s, delta, beta, mu, signal_per_slot;
  std::optional<std::uint64_t> slots;
  bool optimize_point = false;
  std::string mode = "worst_case_distance";
  std::uint64_t trials = 10000;
  unsigned threads = 1;
  std::uint64_t slot_limit = 100'000'000;
  std::string output;
  std::string histogram;
  bool json = false;
};

inline TrialMode parse_mode(const std::string& s) {
  if (s == "random_inputs") return TrialMode::random_inputs;
  if (s == "worst_case_distance") return TrialMode::worst_case_distance;
  if (s == "equal_inputs") return TrialMode::equal_inputs;
  throw DomainError("simulate: mode must be random_inputs, worst_case_distance or equal_inputs");
}

/// Three ways to describe the link:
///   --slots --mu [--delta --beta]           bench link with mean count mu
///   --slots --signal-per-slot [--nu --delta] explicit link, nu may be 0
///   --n --nu --eps (--delta --beta | --optimize)
inline SimulationSetup simulation_setup(const SimulateArgs& a) {
  SimulationSetup setup;
  if (a.slots) {
    const double delta = a.delta.value_or(0.25);
    if (a.mu) {
      setup = SimulationSetup::for_mean_count(*a.mu, delta, a.beta.value_or(1.0), *a.slots);
    } else {
      detail::require(a.signal_per_slot.has_value(),
                      "simulate: --slots needs --mu or --signal-per-slot");
      setup.l_slots = *a.slots;
      setup.signal_per_slot = *a.signal_per_slot;
      setup.nu = a.nu.value_or(0.0);
      setup.delta = delta;
      const double two_r_l = 2.0 * gv_rate(delta) * static_cast<double>(setup.l_slots);
      setup.n = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(two_r_l));
    }
    if (a.n) {
      detail::require(*a.n >= 1.0 && *a.n == std::floor(*a.n), "simulate: n must be an integer >= 1");
      setup.n = static_cast<std::uint64_t>(*a.n);
    }
  } else {
    detail::require(a.n && a.nu && a.eps, "simulate: need --n, --nu and --eps (or --slots)");
    ProtocolConfig cfg{*a.n, *a.nu, *a.eps, a.s.value_or(1.0), 0.25, 1.0};
    if (a.optimize_point) {
      const OperatingPoint op = optimize(cfg.n, cfg.nu, cfg.eps);
      cfg.delta = op.delta_star;
      cfg.beta = op.beta_star;
    } else {
      detail::require(a.delta && a.beta, "simulate: need --delta and --beta, or --optimize");
      cfg.delta = *a.delta;
      cfg.beta = *a.beta;
    }
    setup = SimulationSetup::from_config(cfg);
  }
  setup.slot_limit = a.slot_limit;
  return setup;
}

/// True when the empirical error does not exceed the Chernoff bound by more
/// than the 99% Wilson half-width.
inline bool bound_satisfied(const TrialBatch& b) {
  const Interval ci99 = wilson_interval(b.errors(), b.runs(), kZ99);
  return b.avg_error <= b.chernoff_bound + ci99.half_width();
}

inline Report simulate_report(const SimulationSetup& setup, const TrialBatch& b) {
  Report rep;
  rep.add("mode", std::string(to_string(b.mode)))
      .add("trials", b.trials)
      .add("seed", b.seed)
      .add("n", setup.n)
      .add("slots", setup.l_slots)
      .add("signal_per_slot", setup.signal_per_slot)
      .add("nu", setup.nu)
      .add("delta", setup.delta)
      .add("mu", b.mu)
      .add("v_e", b.vis.v_e)
      .add("v_d", b.vis.v_d)
      .add("errors_equal", b.errors_equal)
      .add("errors_different", b.errors_different)
      .add("avg_error", b.avg_error)
      .add("ci_lo", b.wilson_ci.lo)
      .add("ci_hi", b.wilson_ci.hi)
      .add("chernoff_bound", b.chernoff_bound)
      .add("bound_satisfied", bound_satisfied(b));
  return rep;
}

inline void write_report_csv(const Report& rep, const std::string& header, std::ostream& os) {
  os << header << '\n';
  const auto& e = rep.entries();
  for (std::size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << e[i].first;
  os << '\n';
  for (std::size_t i = 0; i < e.size(); ++i) {
    os << (i ? "," : "") << csv_field(Report::render(e[i].second));
  }
  os << '\n';
}

inline void write_histogram_csv(const TrialBatch& b, const std::string& header, std::ostream& os) {
  os << header << '\n' << "hypothesis,k_plus,k_minus,count\n";
  for (const auto& [k, c] : b.count_histogram) {
    os << "equal," << k.k_plus << ',' << k.k_minus << ',' << c << '\n';
  }
  for (const auto& [k, c] : b.count_histogram_different) {
    os << "different," << k.k_plus << ',' << k.k_minus << ',' << c << '\n';
  }
}

inline int cmd_simulate(const SimulateArgs& a, const std::string& command, std::uint64_t seed,
                        std::ostream& out) {
  const TrialMode mode = parse_mode(a.mode);
  const SimulationSetup setup = simulation_setup(a);
  const TrialBatch batch = run_trials(setup, mode, a.trials, seed, a.threads);
  const Report rep = simulate_report(setup, batch);
  const std::string header = csv_header_comment(command, seed);
  if (!a.output.empty()) {
    OutputTarget target(a.output, out);
    write_report_csv(rep, header, target.get());
  }
  if (!a.histogram.empty()) {
    OutputTarget target(a.histogram, out);
    write_histogram_csv(batch, header, target.get());
  }
  emit(rep, a.json, out);
  return kOk;
}

// ---------------------------------------------------------------------------
// classical / phase-overhead

struct ClassicalArgs {
  double n = 1e12;
  double nu = 1e-7;
  double eps = 1e-5;
  bool json = false;
};

inline int cmd_classical(const ClassicalArgs& a, std::ostream& out) {
  const ClassicalBaseline b = baseline(a.n, a.nu, a.eps);
  Report rep;
  rep.add("n", a.n)
      .add("nu", a.nu)
      .add("eps", a.eps)
      .add("i_c", b.i_c)
      .add("i_b", b.i_b)
      .add("pie", b.pie)
      .add("n_c", b.n_c)
      .add("n_b", b.n_b);
  emit(rep, a.json, out);
  return kOk;
}

struct PhaseArgs {
  std::optional<double> w;
  std::optional<double> dphi;
  bool json = false;
};

inline int cmd_phase_overhead(const PhaseArgs& a, std::ostream& out) {
  detail::require(a.w.has_value() != a.dphi.has_value(),
                  "phase-overhead: give exactly one of --w and --dphi");
  const PhaseOverhead p = a.w ? phase_overhead_for_w(*a.w) : phase_overhead(*a.dphi);
  Report rep;
  rep.add("dphi", a.w ? std::sqrt(-2.0 * std::log(*a.w)) : *a.dphi)
      .add("w", p.w)
      .add("n_est", p.n_est)
      .add("nq_multiplier", p.nq_multiplier);
  emit(rep, a.json, out);
  return kOk;
}

// ---------------------------------------------------------------------------

/// Runs f and converts library exceptions to an exit code plus a message.
template <typename F>
int guarded(F&& f, std::string* message) {
  try {
    f();
    return kOk;
  } catch (const CapacityError& e) {
    *message = e.what();
    return kCapacity;
  } catch (const SolverError& e) {
    *message = e.what();
    return kSolver;
  } catch (const std::domain_error& e) {
    *message = e.what();
    return kDomain;
  } catch (const std::invalid_argument& e) {
    *message = e.what();
    return kDomain;
  }
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coherent-state fingerprinting over noisy optical channels", "qfp"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed_flag;
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed_flag,
                    "RNG seed (default: $QFP_SEED, else " + std::to_string(kDefaultSeed) + ")");
  };

  ChernoffArgs ch;
  auto* c_ch = app.add_subcommand("chernoff", "Chernoff information per count for (v_e, v_d)");
  c_ch->add_option("--ve", ch.ve, "visibility under equal inputs")->required();
  c_ch->add_option("--vd", ch.vd, "visibility under different inputs")->required();
  c_ch->add_flag("--json", ch.json, "machine-readable output");

  OptimizeArgs op;
  auto* c_op = app.add_subcommand("optimize", "optimal (delta, beta) and photon number");
  c_op->add_option("--n", op.n, "input length in bits")->required();
  c_op->add_option("--nu", op.nu, "noise PSD in photons")->required();
  c_op->add_option("--eps", op.eps, "target average error")->required();
  c_op->add_flag("--json", op.json, "machine-readable output");

  SweepArgs sw;
  auto* c_sw = app.add_subcommand("sweep", "log-spaced sweep over noise parameter or input size");
  c_sw->add_option("--axis", sw.axis, "noise_param or n")
      ->check(CLI::IsMember({"noise_param", "n"}));
  c_sw->add_option("--from", sw.from, "first axis value")->required();
  c_sw->add_option("--to", sw.to, "last axis value")->required();
  c_sw->add_option("--points", sw.points, "number of points (>= 2)");
  c_sw->add_option("--nu", sw.nu, "noise PSD (n axis)");
  c_sw->add_option("--eps", sw.eps, "target error (n axis)");
  c_sw->add_option("--output", sw.output, "output file (default stdout)");
  c_sw->add_option("--format", sw.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  c_sw->add_option("--threads", sw.threads, "worker threads");
  add_seed(c_sw);

  SimulateArgs si;
  auto* c_si = app.add_subcommand("simulate", "Monte Carlo of the full protocol chain");
  c_si->add_option("--n", si.n, "input length in bits");
  c_si->add_option("--nu", si.nu, "noise photons per slot");
  c_si->add_option("--eps", si.eps, "target average error");
  c_si->add_option("--s", si.s, "signal power (default 1)");
  c_si->add_option("--delta", si.delta, "code relative distance");
  c_si->add_option("--beta", si.beta, "rescaled bandwidth");
  c_si->add_flag("--optimize", si.optimize_point, "use the optimizer's (delta, beta)");
  c_si->add_option("--slots", si.slots, "pulses per sender (bench link)");
  c_si->add_option("--mu", si.mu, "mean photocounts per sender (bench link)");
  c_si->add_option("--signal-per-slot", si.signal_per_slot, "S/B (bench link)");
  c_si->add_option("--mode", si.mode, "random_inputs, worst_case_distance or equal_inputs");
  c_si->add_option("--trials", si.trials, "number of trials");
  c_si->add_option("--threads", si.threads, "worker threads");
  c_si->add_option("--slot-limit", si.slot_limit, "maximum pulses per sender");
  c_si->add_option("--output", si.output, "summary CSV file");
  c_si->add_option("--histogram", si.histogram, "photocount histogram CSV file");
  c_si->add_flag("--json", si.json, "machine-readable summary");
  add_seed(c_si);

  ClassicalArgs cl;
  auto* c_cl = app.add_subcommand("classical", "classical fingerprinting photon baselines");
  c_cl->add_option("--n", cl.n, "input length in bits")->required();
  c_cl->add_option("--nu", cl.nu, "noise PSD in photons")->required();
  c_cl->add_option("--eps", cl.eps, "target average error")->required();
  c_cl->add_flag("--json", cl.json, "machine-readable output");

  PhaseArgs ph;
  auto* c_ph = app.add_subcommand("phase-overhead", "phase-reference overhead");
  auto* o_w = c_ph->add_option("--w", ph.w, "target visibility factor W");
  auto* o_d = c_ph->add_option("--dphi", ph.dphi, "phase uncertainty in radians");
  o_w->excludes(o_d);
  c_ph->add_flag("--json", ph.json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kDomain;
  }

  std::string message;
  int code = kOk;
  const int failure = guarded(
      [&] {
        if (c_ch->parsed()) {
          code = cmd_chernoff(ch, out);
        } else if (c_op->parsed()) {
          code = cmd_optimize(op, out);
        } else if (c_sw->parsed()) {
          const std::uint64_t seed = resolve_seed(seed_flag);
          code = cmd_sweep(sw, echo_command(*c_sw, seed), seed, out, err);
        } else if (c_si->parsed()) {
          const std::uint64_t seed = resolve_seed(seed_flag);
          code = cmd_simulate(si, echo_command(*c_si, seed), seed, out);
        } else if (c_cl->parsed()) {
          code = cmd_classical(cl, out);
        } else if (c_ph->parsed()) {
          code = cmd_phase_overhead(ph, out);
        }
      },
      &message);
  if (failure != kOk) {
    err << "error: " << message << '\n';
    return failure;
  }
  return code;
}

}  // namespace qfp::cli
