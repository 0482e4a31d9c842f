#include "cli.hpp"

#include <gsynth/gsynth.hpp>

#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace gsynth::cli {

namespace {

struct SolverConfig {
  std::string solver;  // "internal", a path, or empty for $GSYNTH_SOLVER
  std::vector<std::string> solver_args;
  double timeout_s = 0.0;  // per solve, 0 = none
  double budget_s = 0.0;   // per instance, 0 = none
  std::size_t memory_mb = 0;
  long long depth_cap = -1;
};

struct RunConfig {
  // gen
  std::string family = "er";
  std::size_t n = 10;
  std::vector<double> p{0.8};
  std::uint64_t seed = 0;
  std::string flips = "none";
  std::size_t parties = 4;
  std::string demo;
  // shared
  std::string instance_path;
  std::string output;
  std::string format = "text";
  // encode
  std::size_t depth = 0;
  // synth / oracle
  SolverConfig solver;
  std::string witness_out;
  std::size_t state_cap = default_state_cap;
  // verify
  std::string witness_path;
  // bench
  std::size_t n_min = 5;
  std::size_t n_max = 8;
  std::size_t seeds = 3;
  std::size_t jobs = 1;
  bool no_times = false;
};

class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class output_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::unique_ptr<SolverBackend> make_backend(const SolverConfig& cfg) {
  if (cfg.solver == "internal") {
    return std::make_unique<InProcessSolver>();
  }
  if (!cfg.solver.empty()) {
    if (cfg.solver_args.empty()) {
      return std::make_unique<ExternalSolver>(cfg.solver);
    }
    return std::make_unique<ExternalSolver>(cfg.solver, cfg.solver_args);
  }
  return default_backend();
}

SynthesisOptions make_options(const SolverConfig& cfg) {
  SynthesisOptions opts;
  auto to_ms = [](double s) {
    return std::chrono::milliseconds(static_cast<long long>(std::llround(s * 1000.0)));
  };
  if (cfg.timeout_s > 0) {
    opts.per_solve_timeout = to_ms(cfg.timeout_s);
  }
  if (cfg.budget_s > 0) {
    opts.total_budget = to_ms(cfg.budget_s);
  }
  if (cfg.memory_mb > 0) {
    opts.memory_mb = cfg.memory_mb;
  }
  if (cfg.depth_cap >= 0) {
    opts.depth_cap = static_cast<std::size_t>(cfg.depth_cap);
  }
  return opts;
}

std::size_t flip_count_for(const std::string& policy, std::size_t n) {
  if (policy == "none") {
    return 0;
  }
  if (policy == "half") {
    return n / 2;
  }
  std::size_t value = 0;
  const auto* end = policy.data() + policy.size();
  const auto res = std::from_chars(policy.data(), end, value);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw usage_error("--flips expects 'none', 'half' or a count, got '" + policy + "'");
  }
  return value;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) {
    throw output_error("cannot write '" + path + "'");
  }
}

std::string format_seconds(double s) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << s;
  return os.str();
}

SynthesisInstance load(const RunConfig& cfg) {
  if (cfg.instance_path.empty()) {
    throw usage_error("--instance is required");
  }
  auto inst = load_instance(cfg.instance_path);
  inst.validate();
  return inst;
}

// ---------------------------------------------------------------------------

int cmd_gen(const RunConfig& cfg, std::ostream& out) {
  SynthesisInstance inst;
  if (cfg.family == "er") {
    if (cfg.p.size() != 1) {
      throw usage_error("gen takes a single --p value");
    }
    inst = er_ghz_instance(cfg.n, cfg.p.front(), cfg.seed, flip_count_for(cfg.flips, cfg.n),
                           cfg.parties);
  } else if (cfg.family == "network") {
    if (cfg.p.size() != 1) {
      throw usage_error("gen takes a single --p value");
    }
    inst = network_ghz_instance(cfg.p.front(), cfg.seed, flip_count_for(cfg.flips, 14));
  } else if (cfg.family == "demo") {
    if (cfg.demo.empty()) {
      std::string names;
      for (const auto& name : demo_names()) {
        names += " " + name;
      }
      throw usage_error("--name is required for demo instances; available:" + names);
    }
    inst = demo_instance(cfg.demo);
  } else {
    throw usage_error("unknown family '" + cfg.family + "' (er, network, demo)");
  }
  const auto text = write_instance(inst);
  if (cfg.output.empty()) {
    out << text;
  } else {
    write_text_file(cfg.output, text);
  }
  return exit_reachable;
}

int cmd_encode(const RunConfig& cfg, std::ostream& out) {
  if (cfg.depth < 1) {
    throw usage_error("--depth must be at least 1 (number of unrolled states)");
  }
  const auto inst = load(cfg);
  const auto enc = encode_bmc(inst, cfg.depth);
  if (cfg.output.empty()) {
    out << write_dimacs(enc.formula);
  } else {
    write_text_file(cfg.output + ".cnf", write_dimacs(enc.formula));
    write_text_file(cfg.output + ".layout", write_layout(enc.layout));
    out << "wrote " << cfg.output << ".cnf (" << enc.formula.num_vars() << " variables, "
        << enc.formula.num_clauses() << " clauses) and " << cfg.output << ".layout\n";
  }
  return exit_reachable;
}

void print_outcome(const SynthesisInstance& inst, const SynthesisOutcome& res,
                   const std::string& solver_name, const std::string& format, std::ostream& out) {
  const auto ops = res.witness ? res.witness->ops : std::vector<Operation>{};
  if (format == "kv") {
    out << "verdict=" << to_string(res.verdict) << "\n";
    out << "n=" << inst.order() << "\n";
    out << "flips=" << inst.flips.size() << "\n";
    out << "solver=" << solver_name << "\n";
    if (res.threshold) {
      out << "threshold.max_lc=" << res.threshold->max_lc << "\n";
      out << "threshold.deletions=" << res.threshold->deletions << "\n";
      out << "threshold.max_operations=" << res.threshold->max_transitions << "\n";
    }
    out << "max_states=" << res.max_states << "\n";
    out << "depth=" << res.depth_explored << "\n";
    if (res.witness) {
      out << "operations=" << ops.size() << "\n";
      std::string joined;
      for (std::size_t i = 0; i < ops.size(); ++i) {
        joined += (i ? ";" : "") + to_string(ops[i], inst.flips);
      }
      out << "witness=" << joined << "\n";
    }
    if (!res.reason.empty()) {
      out << "reason=" << res.reason << "\n";
    }
    for (std::size_t i = 0; i < res.probes.size(); ++i) {
      const auto& p = res.probes[i];
      const auto prefix = "probe." + std::to_string(i) + ".";
      out << prefix << "states=" << p.states << "\n";
      out << prefix << "status=" << to_string(p.status) << "\n";
      out << prefix << "seconds=" << format_seconds(p.seconds) << "\n";
      out << prefix << "vars=" << p.vars << "\n";
      out << prefix << "clauses=" << p.clauses << "\n";
    }
    out << "total_solver_seconds=" << format_seconds(res.total_solver_seconds) << "\n";
    return;
  }

  out << "instance: n=" << inst.order() << ", |D|=" << inst.flips.size() << "\n";
  out << "solver: " << solver_name << "\n";
  if (res.threshold) {
    out << "completeness threshold: " << res.threshold->max_lc << " LC + "
        << res.threshold->deletions << " VD = " << res.threshold->max_transitions
        << " operations\n";
  } else if (res.max_states > 0) {
    out << "search cap: " << res.max_states - 1 << " operations (no completeness threshold)\n";
  }
  out << "verdict: " << to_string(res.verdict) << "\n";
  if (!res.reason.empty()) {
    out << "reason: " << res.reason << "\n";
  }
  if (res.witness) {
    out << "witness (" << ops.size() << " operations, " << res.depth_explored << " states):\n";
    for (auto op : ops) {
      out << "  " << to_string(op, inst.flips) << "\n";
    }
  }
  if (!res.probes.empty()) {
    out << "probes:\n";
    out << "  states  result    seconds      vars    clauses\n";
    for (const auto& p : res.probes) {
      out << "  " << std::setw(6) << p.states << "  " << std::left << std::setw(7)
          << to_string(p.status) << std::right << std::setw(10) << format_seconds(p.seconds)
          << std::setw(10) << p.vars << std::setw(11) << p.clauses << "\n";
    }
  }
  out << "total solver time: " << format_seconds(res.total_solver_seconds) << " s\n";
}

int cmd_synth(const RunConfig& cfg, std::ostream& out) {
  const auto inst = load(cfg);
  const auto backend = make_backend(cfg.solver);
  const auto res = synthesize(inst, *backend, make_options(cfg.solver));
  print_outcome(inst, res, backend->name(), cfg.format, out);
  if (res.witness && !cfg.witness_out.empty()) {
    write_text_file(cfg.witness_out, write_witness(res.witness->ops, inst.flips));
  }
  switch (res.verdict) {
    case Verdict::reachable:
      return exit_reachable;
    case Verdict::unreachable:
      return exit_unreachable;
    case Verdict::unknown:
      return exit_unknown;
  }
  return exit_internal;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const auto inst = load(cfg);
  if (cfg.witness_path.empty()) {
    throw usage_error("--witness is required");
  }
  std::ifstream in(cfg.witness_path);
  if (!in) {
    throw input_error("cannot open witness file '" + cfg.witness_path + "'");
  }
  const auto ops = read_witness(in, inst);
  Witness w;
  try {
    w = replay(inst.source, ops, inst.flips);
  } catch (const std::domain_error& e) {
    out << "FAIL: " << e.what() << "\n";
    return exit_unreachable;
  }
  const auto check = replay_verify(inst, w);
  if (check.ok) {
    out << "PASS: " << ops.size() << " operations transform the source into the target\n";
    return exit_reachable;
  }
  out << "FAIL at step " << check.step << ": " << check.reason << "\n";
  return exit_unreachable;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  const auto inst = load(cfg);
  ReachabilityResult res;
  try {
    res = reachable_bfs(inst, cfg.state_cap);
  } catch (const cap_exceeded& e) {
    if (cfg.format == "kv") {
      out << "verdict=unknown\nreason=" << e.what() << "\n";
    } else {
      out << "verdict: unknown\nreason: " << e.what() << "\n";
    }
    return exit_unknown;
  }
  const std::string verdict = res.reachable ? "reachable" : "unreachable";
  if (cfg.format == "kv") {
    out << "verdict=" << verdict << "\nexplored=" << res.explored << "\n";
    if (res.reachable) {
      out << "operations=" << res.shortest_length << "\n";
      std::string joined;
      for (std::size_t i = 0; i < res.witness.size(); ++i) {
        joined += (i ? ";" : "") + to_string(res.witness[i], inst.flips);
      }
      out << "witness=" << joined << "\n";
    }
  } else {
    out << "verdict: " << verdict << "\nexplored states: " << res.explored << "\n";
    if (res.reachable) {
      out << "shortest witness (" << res.shortest_length << " operations):\n";
      for (auto op : res.witness) {
        out << "  " << to_string(op, inst.flips) << "\n";
      }
    }
  }
  if (res.reachable && !cfg.witness_out.empty()) {
    write_text_file(cfg.witness_out, write_witness(res.witness, inst.flips));
  }
  return res.reachable ? exit_reachable : exit_unreachable;
}

struct BenchRow {
  std::string family;
  std::size_t n = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::size_t flips = 0;
  std::string verdict;
  std::size_t states = 0;
  long long ops = -1;
  std::string verified = "-";
  double seconds = 0.0;
};

int cmd_bench(const RunConfig& cfg, std::ostream& out) {
  struct Job {
    std::string family;
    std::size_t n;
    double p;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  if (cfg.family == "er") {
    if (cfg.n_min > cfg.n_max || cfg.n_min < 1) {
      throw usage_error("invalid --n-min/--n-max range");
    }
    for (std::size_t n = cfg.n_min; n <= cfg.n_max; ++n) {
      for (double p : cfg.p) {
        for (std::size_t s = 0; s < cfg.seeds; ++s) {
          jobs.push_back({"er", n, p, cfg.seed + s});
        }
      }
    }
  } else if (cfg.family == "network") {
    for (double p : cfg.p) {
      for (std::size_t s = 0; s < cfg.seeds; ++s) {
        jobs.push_back({"network14", 14, p, cfg.seed + s});
      }
    }
  } else {
    throw usage_error("bench supports --family er or network");
  }
  for (double p : cfg.p) {
    detail::check_probability(p);
  }

  const auto backend = make_backend(cfg.solver);
  const auto options = make_options(cfg.solver);
  std::vector<BenchRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::string first_error;

  auto worker = [&] {
    for (;;) {
      const auto i = next.fetch_add(1);
      if (i >= jobs.size()) {
        return;
      }
      const auto& job = jobs[i];
      auto& row = rows[i];
      try {
        const auto flips = flip_count_for(cfg.flips, job.n);
        const auto inst = job.family == "er"
                              ? er_ghz_instance(job.n, job.p, job.seed, flips, cfg.parties)
                              : network_ghz_instance(job.p, job.seed, flips);
        row.family = job.family;
        row.n = job.n;
        row.p = job.p;
        row.seed = job.seed;
        row.flips = flips;
        const auto res = synthesize(inst, *backend, options);
        row.verdict = std::string(to_string(res.verdict));
        if (res.verdict == Verdict::unknown &&
            res.reason.find("time") != std::string::npos) {
          row.verdict = "timeout";
        }
        row.states = res.depth_explored;
        row.seconds = res.total_solver_seconds;
        if (res.witness) {
          row.ops = static_cast<long long>(res.witness->ops.size());
          row.verified = replay_verify(inst, *res.witness).ok ? "yes" : "no";
        }
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (first_error.empty()) {
          first_error = e.what();
        }
        row.verdict = "error";
      }
    }
  };
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < std::max<std::size_t>(cfg.jobs, 1); ++t) {
    pool.emplace_back(worker);
  }
  worker();
  pool.clear();

  std::ostringstream table;
  if (cfg.format == "kv") {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      const auto prefix = "row." + std::to_string(i) + ".";
      table << prefix << "family=" << r.family << "\n"
            << prefix << "n=" << r.n << "\n"
            << prefix << "p=" << detail::format_double(r.p) << "\n"
            << prefix << "seed=" << r.seed << "\n"
            << prefix << "flips=" << r.flips << "\n"
            << prefix << "verdict=" << r.verdict << "\n"
            << prefix << "states=" << r.states << "\n"
            << prefix << "operations=" << r.ops << "\n"
            << prefix << "verified=" << r.verified << "\n";
      if (!cfg.no_times) {
        table << prefix << "solver_seconds=" << format_seconds(r.seconds) << "\n";
      }
    }
  } else {
    table << "family\tn\tp\tseed\tflips\tverdict\tstates\toperations\tverified";
    table << (cfg.no_times ? "\n" : "\tsolver_seconds\n");
    for (const auto& r : rows) {
      table << r.family << '\t' << r.n << '\t' << detail::format_double(r.p) << '\t' << r.seed
            << '\t' << r.flips << '\t' << r.verdict << '\t' << r.states << '\t' << r.ops << '\t'
            << r.verified;
      if (!cfg.no_times) {
        table << '\t' << format_seconds(r.seconds);
      }
      table << '\n';
    }
  }
  if (cfg.output.empty()) {
    out << table.str();
  } else {
    write_text_file(cfg.output, table.str());
  }
  if (!first_error.empty()) {
    throw std::runtime_error(first_error);
  }
  return exit_reachable;
}

void add_solver_flags(CLI::App* sub, SolverConfig& cfg) {
  sub->add_option("--solver", cfg.solver,
                  "'internal' or path to a DIMACS solver binary (default: $GSYNTH_SOLVER, else "
                  "internal)");
  sub->add_option("--solver-arg", cfg.solver_args, "argument passed to the external solver")
      ->allow_extra_args(false);
  sub->add_option("--timeout", cfg.timeout_s, "wall-clock seconds per solver call")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--budget", cfg.budget_s, "total wall-clock seconds per instance")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--memory-mb", cfg.memory_mb, "address-space limit for external solvers");
  sub->add_option("--depth-cap", cfg.depth_cap,
                  "maximum number of operations searched (required bound when flips are "
                  "allowed; defaults to a heuristic cap)")
      ->check(CLI::NonNegativeNumber);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph-state synthesis with bounded model checking"};
  app.name("gsynth");
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from a TOML/INI file");
  RunConfig cfg;

  auto* gen = app.add_subcommand("gen", "generate an instance file");
  gen->add_option("--family", cfg.family, "er | network | demo")->required();
  gen->add_option("--n", cfg.n, "vertex count (er)");
  gen->add_option("--p", cfg.p, "edge probability")->expected(1)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", cfg.seed, "random seed");
  gen->add_option("--flips", cfg.flips, "flip set size: none | half | <count>");
  gen->add_option("--parties", cfg.parties, "GHZ parties (er; vertices 0..k-1)");
  gen->add_option("--name", cfg.demo, "demo instance name");
  gen->add_option("-o,--output", cfg.output, "output file (default: stdout)");

  auto* encode = app.add_subcommand("encode", "write the unrolled formula as DIMACS");
  encode->add_option("--instance", cfg.instance_path, "instance file")->required();
  encode->add_option("--depth", cfg.depth, "number of unrolled states d (>= 1)")->required();
  encode->add_option("-o,--output", cfg.output,
                     "output prefix: writes <prefix>.cnf and <prefix>.layout (default: DIMACS "
                     "to stdout)");

  auto* synth = app.add_subcommand("synth", "search for a transformation");
  synth->add_option("--instance", cfg.instance_path, "instance file")->required();
  add_solver_flags(synth, cfg.solver);
  synth->add_option("--witness-out", cfg.witness_out, "write the witness here");
  synth->add_option("--format", cfg.format, "text | kv")->check(CLI::IsMember({"text", "kv"}));

  auto* verify = app.add_subcommand("verify", "replay a witness against an instance");
  verify->add_option("--instance", cfg.instance_path, "instance file")->required();
  verify->add_option("--witness", cfg.witness_path, "witness file")->required();

  auto* oracle = app.add_subcommand("oracle", "explicit-state breadth-first search");
  oracle->add_option("--instance", cfg.instance_path, "instance file")->required();
  oracle->add_option("--state-cap", cfg.state_cap, "maximum number of stored states");
  oracle->add_option("--witness-out", cfg.witness_out, "write the shortest witness here");
  oracle->add_option("--format", cfg.format, "text | kv")->check(CLI::IsMember({"text", "kv"}));

  auto* bench = app.add_subcommand("bench", "run a benchmark sweep");
  bench->add_option("--family", cfg.family, "er | network");
  bench->add_option("--n-min", cfg.n_min, "smallest vertex count (er)");
  bench->add_option("--n-max", cfg.n_max, "largest vertex count (er)");
  bench->add_option("--p", cfg.p, "edge probabilities")
      ->expected(1, 64)
      ->check(CLI::Range(0.0, 1.0));
  bench->add_option("--seeds", cfg.seeds, "seeds per configuration");
  bench->add_option("--seed", cfg.seed, "first seed");
  bench->add_option("--flips", cfg.flips, "flip set size: none | half | <count>");
  bench->add_option("--parties", cfg.parties, "GHZ parties (er)");
  bench->add_option("--jobs", cfg.jobs, "parallel instances");
  bench->add_flag("--no-times", cfg.no_times, "omit solver times (byte-stable output)");
  bench->add_option("-o,--output", cfg.output, "output file (default: stdout)");
  bench->add_option("--format", cfg.format, "text | kv")->check(CLI::IsMember({"text", "kv"}));
  add_solver_flags(bench, cfg.solver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : exit_usage;
  }

  try {
    if (*gen) {
      return cmd_gen(cfg, out);
    }
    if (*encode) {
      return cmd_encode(cfg, out);
    }
    if (*synth) {
      return cmd_synth(cfg, out);
    }
    if (*verify) {
      return cmd_verify(cfg, out);
    }
    if (*oracle) {
      return cmd_oracle(cfg, out);
    }
    if (*bench) {
      return cmd_bench(cfg, out);
    }
  } catch (const usage_error& e) {
    err << "gsynth: " << e.what() << "\n";
    return exit_usage;
  } catch (const parse_error& e) {
    err << "gsynth: malformed input: " << e.what() << "\n";
    return exit_data;
  } catch (const std::domain_error& e) {
    err << "gsynth: invalid input: " << e.what() << "\n";
    return exit_data;
  } catch (const witness_replay_error& e) {
    err << "gsynth: internal error: " << e.what() << "\n";
    return exit_internal;
  } catch (const std::logic_error& e) {
    err << "gsynth: internal error: " << e.what() << "\n";
    return exit_internal;
  } catch (const input_error& e) {
    err << "gsynth: " << e.what() << "\n";
    return exit_no_input;
  } catch (const output_error& e) {
    err << "gsynth: " << e.what() << "\n";
    return exit_io;
  } catch (const std::exception& e) {
    err << "gsynth: internal error: " << e.what() << "\n";
    return exit_internal;
  }
  return exit_usage;
}

}  // namespace gsynth::cli
