// lowspace: generate instances, run the low-space solvers, check the hash
// family statistically, and measure step scaling.
//
// Exit codes: 0 ok / distinct / disjoint, 10 collision or witness found,
// 1 validation failed, 2 bad arguments, 3 I/O or file format error.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <lowspace/collide.hpp>
#include <lowspace/instance_io.hpp>
#include <lowspace/instances.hpp>
#include <lowspace/report.hpp>
#include <lowspace/solvers.hpp>
#include <lowspace/stats.hpp>

using namespace lowspace;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitFound = 10;

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

struct solve_flags {
  std::uint64_t seed = 0;
  double trials_mult = 2;
  double budget_mult = 8;
  std::optional<double> delta;
  std::optional<std::uint64_t> f2_hint;
  unsigned workers = 1;
  bool json = false;

  solver_config config() const {
    solver_config c;
    c.seed = seed;
    c.trial_multiplier = trials_mult;
    c.budget_multiplier = budget_mult;
    c.failure_target = delta;
    c.f2_hint = f2_hint;
    c.workers = workers;
    return c;
  }
};

void add_solve_flags(CLI::App* cmd, solve_flags& f) {
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--trials-mult", f.trials_mult, "trial count multiplier c_T")->check(CLI::Range(1.0, 1e9));
  cmd->add_option("--budget-mult", f.budget_mult, "step budget multiplier c_B")->check(CLI::Range(1.0, 1e9));
  cmd->add_option("--delta", f.delta, "failure probability target (default 1/n)");
  cmd->add_option("--f2-hint", f.f2_hint, "bound on F2, tried first");
  cmd->add_option("--workers", f.workers, "worker threads")->check(CLI::Range(1u, 1024u));
  cmd->add_flag("--json", f.json, "print a JSON report instead of text");
}

json array_params(const std::string& path, const input_array& a) {
  return {{"file", path}, {"n", a.size()}, {"m", a.bound()}};
}

void emit(const report& r, bool as_json) {
  if (as_json) std::cout << r.to_json_text();
  else std::cout << r.to_text();
}

// gen ----------------------------------------------------------------------

struct gen_flags {
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::string kind = "planted_pairs";
  std::uint64_t pairs = 1;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "text";
  bool json = false;
};

int run_gen(const gen_flags& f) {
  const auto t0 = clock_type::now();
  instance_spec spec{f.n, f.m, parse_instance_kind(f.kind), f.pairs, f.seed};
  const input_array a = generate(spec);
  write_instance(f.out, a, f.format == "binary" ? instance_format::binary : instance_format::text);
  report r;
  r.command = "gen";
  r.params = {{"n", f.n}, {"m", spec.bound()}, {"kind", to_string(spec.kind)},
              {"pairs", f.pairs}, {"seed", f.seed}, {"format", f.format}};
  r.result = {{"file", f.out}, {"f2", lowspace::f2(a).f2}};
  r.timing = {{"seconds", seconds_since(t0)}};
  if (f.json) emit(r, true);
  else std::cout << "wrote " << a.size() << " values to " << f.out << "\n";
  return kExitOk;
}

// solve-ed -----------------------------------------------------------------

int run_solve_ed(const std::string& in, const solve_flags& f, const std::string& dump_seed) {
  const input_array a = read_instance(in);
  const auto t0 = clock_type::now();
  const auto res = element_distinctness(a, f.config());
  const double secs = seconds_since(t0);

  if (!dump_seed.empty() && res.stats.witness) {
    const auto [seed, s] = replay_trial(a, f.seed, kEdStreamTag, *res.stats.witness);
    const auto bytes = serialize(seed);
    std::ofstream out(dump_seed, std::ios::binary);
    if (!out) throw io_error("cannot open " + dump_seed);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw io_error("write failed: " + dump_seed);
  }

  report r;
  r.command = "solve-ed";
  r.params = {{"input", array_params(in, a)}, {"config", to_json(f.config())}};
  if (res.has_collision())
    r.result = {{"verdict", "collision"}, {"i", res.i}, {"j", res.j}};
  else
    r.result = {{"verdict", "distinct"}};
  r.stats = to_json(res.stats);
  r.timing = {{"seconds", secs}};
  if (f.json) emit(r, true);
  else if (res.has_collision()) std::cout << "COLLISION " << res.i << " " << res.j << "\n";
  else std::cout << "DISTINCT\n";
  return res.has_collision() ? kExitFound : kExitOk;
}

// solve-ld -----------------------------------------------------------------

int run_solve_ld(const std::string& pa, const std::string& pb, std::optional<std::uint64_t> p,
                 const solve_flags& f) {
  const input_array a = read_instance(pa);
  const input_array b = read_instance(pb);
  const auto t0 = clock_type::now();
  const auto res = p ? list_disjointness(a, b, *p, f.config()) : list_disjointness_doubling(a, b, f.config());
  const double secs = seconds_since(t0);

  report r;
  r.command = "solve-ld";
  r.params = {{"a", array_params(pa, a)}, {"b", array_params(pb, b)},
              {"p", p ? json(*p) : json(nullptr)}, {"config", to_json(f.config())}};
  if (res.disjoint) r.result = {{"verdict", "disjoint"}};
  else r.result = {{"verdict", "witness"}, {"i", res.i}, {"j", res.j}};
  r.stats = to_json(res.stats);
  r.timing = {{"seconds", secs}};
  if (f.json) emit(r, true);
  else if (res.disjoint) std::cout << "DISJOINT\n";
  else std::cout << "WITNESS " << res.i << " " << res.j << "\n";
  return res.disjoint ? kExitOk : kExitFound;
}

// solve-si -----------------------------------------------------------------

int run_solve_si(const std::string& pa, const std::string& pb, const solve_flags& f) {
  const input_array a = read_instance(pa);
  const input_array b = read_instance(pb);
  const auto t0 = clock_type::now();
  std::set<std::uint64_t> seen;  // report only; the stream itself keeps nothing
  const auto res = set_intersection(a, b, f.config(), [&](std::uint64_t v) {
    if (f.json) seen.insert(v);
    else std::cout << v << "\n";
  });
  const double secs = seconds_since(t0);
  if (!f.json) return kExitOk;

  report r;
  r.command = "solve-si";
  r.params = {{"a", array_params(pa, a)}, {"b", array_params(pb, b)}, {"config", to_json(f.config())}};
  r.result = {{"emitted", res.emitted}, {"elements", std::vector<std::uint64_t>(seen.begin(), seen.end())}};
  r.stats = to_json(res.stats);
  r.timing = {{"seconds", secs}};
  emit(r, true);
  return kExitOk;
}

// validate -----------------------------------------------------------------

struct validate_flags {
  std::string check;
  std::uint64_t n = 0;
  std::uint64_t samples = 0;
  unsigned levels = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  bool json = false;
};

json estimate_json(const estimate& e) { return to_json(e); }

int run_validate(const validate_flags& f) {
  const auto t0 = clock_type::now();
  const estimate_options opt{f.seed, f.workers};
  report r;
  r.command = "validate";
  r.params = {{"check", f.check}, {"seed", f.seed}};
  bool pass = true;

  if (f.check == "kwise") {
    json cases = json::array();
    const auto run = [&](std::uint64_t p, unsigned k, bool ok) {
      cases.push_back({{"p", p}, {"k", k}, {"uniform", ok}});
      pass = pass && ok;
    };
    for (unsigned k : {2u, 3u}) {
      run(5, k, kwise_exhaustive_uniform<5>(k));
      run(7, k, kwise_exhaustive_uniform<7>(k));
    }
    r.result = {{"cases", cases}};
  } else if (f.check == "star") {
    const std::uint64_t n = f.n ? f.n : 256;
    const std::uint64_t samples = f.samples ? f.samples : 100000;
    r.params["n"] = n;
    r.params["samples"] = samples;
    json rows = json::array();
    const unsigned lo = f.levels ? f.levels : 1;
    const unsigned hi = f.levels ? f.levels : prf_params::max_levels(n);
    for (unsigned l = lo; l <= hi; ++l) {
      const auto e = estimate_star_rate(l, samples, n, 0, opt);
      const double ideal = std::ldexp(1.0, -static_cast<int>(l));
      const double sd = std::sqrt(ideal * (1 - ideal) / static_cast<double>(samples));
      const bool ok = std::abs(e.point - ideal) <= 5 * sd;
      pass = pass && ok;
      rows.push_back({{"levels", l}, {"ideal", ideal}, {"estimate", estimate_json(e)}, {"pass", ok}});
    }
    r.result = {{"rows", rows}};
  } else if (f.check == "visit") {
    const std::uint64_t n = f.n ? f.n : 1024;
    const std::uint64_t samples = f.samples ? f.samples : 100000;
    const auto a = generate({n, 0, instance_kind::all_distinct, 0, f.seed});
    const unsigned l = f.levels ? f.levels : hinted_level(n, lowspace::f2(a).f2);
    const vertex v = 1 + f.seed % n;
    const auto pr = estimate_visit_prob(a, v, l, oracle_mode::pseudorandom(), samples, opt);
    const auto ro = estimate_visit_prob(a, v, l, oracle_mode::random_oracle(), samples, opt);
    const double root = std::sqrt(static_cast<double>(n));
    const bool in_window = pr.point >= 1 / (32 * root) && pr.point <= 32 / root;
    const double ratio = ro.point > 0 ? pr.point / ro.point : 0;
    const bool ratio_ok = ratio >= 0.25 && ratio <= 4;
    pass = in_window && ratio_ok;
    r.params.update({{"n", n}, {"samples", samples}, {"levels", l}, {"target", v}});
    r.result = {{"pseudorandom", estimate_json(pr)}, {"random_oracle", estimate_json(ro)},
                {"window", {1 / (32 * root), 32 / root}}, {"ratio", ratio},
                {"in_window", in_window}, {"ratio_ok", ratio_ok}};
  } else if (f.check == "pair") {
    const std::uint64_t n = f.n ? f.n : 512;
    const std::uint64_t samples = f.samples ? f.samples : 1000000;
    const auto a = generate({n, 0, instance_kind::planted_pairs, 1, f.seed});
    const std::uint64_t f2v = lowspace::f2(a).f2;
    const unsigned l = f.levels ? f.levels : hinted_level(n, f2v);
    const auto pr = estimate_pair_prob(a, l, oracle_mode::pseudorandom(), samples, opt);
    const auto ro = estimate_pair_prob(a, l, oracle_mode::random_oracle(), samples, opt);
    const double floor = 1.0 / (64.0 * static_cast<double>(f2v));
    const bool above = pr.point >= floor;
    const bool baseline_ok = ro.point >= pr.point / 4;
    pass = above && baseline_ok;
    r.params.update({{"n", n}, {"samples", samples}, {"levels", l}, {"f2", f2v}});
    r.result = {{"pseudorandom", estimate_json(pr)}, {"random_oracle", estimate_json(ro)},
                {"floor", floor}, {"above_floor", above}, {"baseline_ok", baseline_ok}};
  } else if (f.check == "oracle-equiv") {
    const std::uint64_t n = f.n ? f.n : 64;
    const std::uint64_t samples = f.samples ? f.samples : 10000;
    std::uint64_t mismatches = 0, bad_pairs = 0, step_violations = 0, pairs = 0;
    for (std::uint64_t t = 0; t < samples; ++t) {
      auto rng = derive_stream(f.seed, 0xe9, n, t);
      const auto kind = uniform_below(rng, 2) == 0 ? instance_kind::planted_pairs : instance_kind::random_iid;
      const auto a = generate({n, 0, kind, 1 + uniform_below(rng, 3), rng()});
      const unsigned l = 1 + static_cast<unsigned>(uniform_below(rng, prf_params::max_levels(n)));
      const auto seed = sample_prf(prf_params::standard(n, a.bound(), l), rng);
      const vertex s = 1 + uniform_below(rng, n);
      const auto fast = collide(a, seed, s);
      const auto ref = collide_oracle(a, seed, s);
      const auto reach = compute_reach_set(a, seed, s, n + 1);
      if (!fast.same_result(ref)) ++mismatches;
      if (fast.has_pair()) {
        ++pairs;
        if (fast.u == fast.v || a.value(fast.u) != a.value(fast.v)) ++bad_pairs;
      }
      if (fast.steps > 16 * reach.visited.size()) ++step_violations;
    }
    pass = mismatches == 0 && bad_pairs == 0 && step_violations == 0;
    r.params.update({{"n", n}, {"samples", samples}});
    r.result = {{"mismatches", mismatches}, {"invalid_pairs", bad_pairs},
                {"step_bound_violations", step_violations}, {"pairs", pairs}};
  } else {
    throw parameter_error("unknown check '" + f.check + "'");
  }

  r.result["pass"] = pass;
  r.timing = {{"seconds", seconds_since(t0)}};
  emit(r, f.json);
  return pass ? kExitOk : kExitFailed;
}

// bench --------------------------------------------------------------------

struct bench_flags {
  unsigned min_log_n = 10;
  unsigned max_log_n = 16;
  unsigned reps = 3;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  bool json = false;
};

int run_bench(const bench_flags& f) {
  if (f.min_log_n < 1 || f.max_log_n <= f.min_log_n || f.max_log_n > 30)
    throw parameter_error("need 1 <= min-log-n < max-log-n <= 30");
  std::vector<std::uint64_t> sizes;
  for (unsigned k = f.min_log_n; k <= f.max_log_n; ++k) sizes.push_back(std::uint64_t{1} << k);
  solver_config cfg;
  cfg.workers = f.workers;
  const auto t0 = clock_type::now();
  const auto table = scaling_bench(sizes, f.reps, f.seed, cfg, [](std::uint64_t n, unsigned r, const ed_result& res) {
    std::cerr << "n=" << n << " rep=" << r << " steps=" << res.stats.total_steps
              << (res.has_collision() ? "" : " (missed)") << "\n";
  });

  report r;
  r.command = "bench";
  r.params = {{"min_log_n", f.min_log_n}, {"max_log_n", f.max_log_n}, {"reps", f.reps},
              {"seed", f.seed}, {"workers", f.workers}};
  json rows = json::array(), row_secs = json::array();
  for (const auto& row : table.rows) {
    rows.push_back({{"n", row.n}, {"median_steps", row.median_steps}, {"steps", row.steps}, {"misses", row.misses}});
    row_secs.push_back({{"n", row.n}, {"seconds", row.seconds}});
  }
  r.result = {{"rows", rows}, {"slope", table.slope}};
  r.timing = {{"seconds", seconds_since(t0)}, {"rows", row_secs}};
  if (f.json) {
    emit(r, true);
  } else {
    std::cout << "n median_steps seconds\n";
    for (const auto& row : table.rows) std::cout << row.n << " " << row.median_steps << " " << row.seconds << "\n";
    std::cout << "slope " << table.slope << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-space element distinctness and friends"};
  app.require_subcommand(1, 1);

  gen_flags gen;
  auto* gen_cmd = app.add_subcommand("gen", "write a generated instance file");
  gen_cmd->add_option("--n", gen.n, "array length")->required()->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));
  gen_cmd->add_option("--m", gen.m, "values lie in [1, m]; default 4n");
  gen_cmd->add_option("--kind", gen.kind, "all_distinct | planted_pairs | all_equal | random_iid");
  gen_cmd->add_option("--pairs", gen.pairs, "planted pairs");
  gen_cmd->add_option("--seed", gen.seed, "generator seed");
  gen_cmd->add_option("--out", gen.out, "output file")->required();
  gen_cmd->add_option("--format", gen.format, "text | binary")->check(CLI::IsMember({"text", "binary"}));
  gen_cmd->add_flag("--json", gen.json, "print a JSON report");

  std::string ed_in, dump_seed;
  solve_flags ed;
  auto* ed_cmd = app.add_subcommand("solve-ed", "element distinctness");
  ed_cmd->add_option("--in", ed_in, "instance file")->required();
  ed_cmd->add_option("--dump-seed", dump_seed, "write the witness trial's hash seed here");
  add_solve_flags(ed_cmd, ed);

  std::string ld_a, ld_b;
  std::optional<std::uint64_t> ld_p;
  solve_flags ld;
  auto* ld_cmd = app.add_subcommand("solve-ld", "list disjointness");
  ld_cmd->add_option("--a", ld_a, "first list")->required();
  ld_cmd->add_option("--b", ld_b, "second list")->required();
  ld_cmd->add_option("--p", ld_p, "bound on F2(a) + F2(b); doubled from |a|+|b| when absent");
  add_solve_flags(ld_cmd, ld);

  std::string si_a, si_b;
  solve_flags si;
  auto* si_cmd = app.add_subcommand("solve-si", "set intersection of two duplicate-free lists");
  si_cmd->add_option("--a", si_a, "first list")->required();
  si_cmd->add_option("--b", si_b, "second list")->required();
  add_solve_flags(si_cmd, si);

  validate_flags val;
  auto* val_cmd = app.add_subcommand("validate", "statistical and oracle checks");
  val_cmd->add_option("--check", val.check, "kwise | star | visit | pair | oracle-equiv")
      ->required()
      ->check(CLI::IsMember({"kwise", "star", "visit", "pair", "oracle-equiv"}));
  val_cmd->add_option("--n", val.n, "instance size (check-specific default)");
  val_cmd->add_option("--samples", val.samples, "sample count (check-specific default)");
  val_cmd->add_option("--levels", val.levels, "level count l (default: schedule)");
  val_cmd->add_option("--seed", val.seed, "master seed");
  val_cmd->add_option("--workers", val.workers, "worker threads")->check(CLI::Range(1u, 1024u));
  val_cmd->add_flag("--json", val.json, "JSON instead of key = value text");

  bench_flags bench;
  auto* bench_cmd = app.add_subcommand("bench", "median steps of solve-ed on planted pairs vs n");
  bench_cmd->add_option("--min-log-n", bench.min_log_n, "smallest log2 n");
  bench_cmd->add_option("--max-log-n", bench.max_log_n, "largest log2 n");
  bench_cmd->add_option("--reps", bench.reps, "runs per size")->check(CLI::Range(1u, 1000u));
  bench_cmd->add_option("--seed", bench.seed, "master seed");
  bench_cmd->add_option("--workers", bench.workers, "worker threads")->check(CLI::Range(1u, 1024u));
  bench_cmd->add_flag("--json", bench.json, "print a JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*ed_cmd) return run_solve_ed(ed_in, ed, dump_seed);
    if (*ld_cmd) return run_solve_ld(ld_a, ld_b, ld_p, ld);
    if (*si_cmd) return run_solve_si(si_a, si_b, si);
    if (*val_cmd) return run_validate(val);
    if (*bench_cmd) return run_bench(bench);
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const format_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
