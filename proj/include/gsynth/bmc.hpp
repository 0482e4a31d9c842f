#pragma once

/// \file bmc.hpp
/// Bounded model checking driver: completeness threshold, binary search
/// over the number of unrolled states, and verdict assembly.
///
/// Under LC+VD (no flips) any reachable target is reachable with at most
/// M = 3(n - s)/2 local complementations (s = n mod 2) followed by one
/// deletion per vertex that must become isolated, so UNSAT at
/// M + Delta transitions proves unreachability. No such bound is claimed
/// once edge flips are allowed; the search is then capped and exhaustion
/// yields Unknown.

#include <gsynth/encoder.hpp>
#include <gsynth/graph.hpp>
#include <gsynth/instance.hpp>
#include <gsynth/solver.hpp>
#include <gsynth/witness.hpp>

#include <algorithm>
#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gsynth {

struct ThresholdInfo {
  std::size_t max_lc = 0;       // M
  std::size_t deletions = 0;    // Delta
  std::size_t max_transitions = 0;
};

/// Delta counts vertices isolated in the target but not in the source;
/// vertices isolated in both are never touched.
inline ThresholdInfo completeness_threshold(const SynthesisInstance& inst) {
  const auto n = inst.order();
  ThresholdInfo info;
  info.max_lc = 3 * (n - n % 2) / 2;
  const auto src = isolated_vertices(inst.source);
  for (auto v : isolated_vertices(inst.target)) {
    if (!std::binary_search(src.begin(), src.end(), v)) {
      ++info.deletions;
    }
  }
  info.max_transitions = info.max_lc + info.deletions;
  return info;
}

enum class TrivialCheck { pass, trivially_unreachable };

/// LC and VD never give an isolated vertex new edges. Skipped (pass) when
/// edge flips are allowed.
inline TrivialCheck trivial_unreachable_check(const SynthesisInstance& inst) {
  if (!inst.flips.empty()) {
    return TrivialCheck::pass;
  }
  const auto tgt = isolated_vertices(inst.target);
  for (auto v : isolated_vertices(inst.source)) {
    if (!std::binary_search(tgt.begin(), tgt.end(), v)) {
      return TrivialCheck::trivially_unreachable;
    }
  }
  return TrivialCheck::pass;
}

/// Transition cap used when flips are allowed and none is given.
inline std::size_t default_flip_depth_cap(const SynthesisInstance& inst) {
  const auto n = inst.order();
  return 3 * (n - n % 2) / 2 + n + inst.flips.size();
}

enum class Verdict { reachable, unreachable, unknown };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::reachable:
      return "reachable";
    case Verdict::unreachable:
      return "unreachable";
    case Verdict::unknown:
      return "unknown";
  }
  return "?";
}

struct DepthProbe {
  std::size_t states = 0;
  SolveStatus status = SolveStatus::unknown;
  double seconds = 0.0;
  std::size_t vars = 0;
  std::size_t clauses = 0;
  std::string diagnostic;
};

struct SynthesisOutcome {
  Verdict verdict = Verdict::unknown;
  std::optional<Witness> witness;  // set iff reachable
  std::string reason;
  /// Smallest satisfiable state count when reachable, otherwise the
  /// largest state count probed.
  std::size_t depth_explored = 0;
  /// Upper end of the searched window, in states.
  std::size_t max_states = 0;
  std::optional<ThresholdInfo> threshold;  // set when flips are empty
  std::vector<DepthProbe> probes;          // in probing order
  double total_solver_seconds = 0.0;
};

struct SynthesisOptions {
  std::optional<std::chrono::milliseconds> per_solve_timeout;
  std::optional<std::chrono::milliseconds> total_budget;
  std::optional<std::size_t> memory_mb;
  /// Maximum number of operations searched. Defaults to the completeness
  /// threshold without flips and to default_flip_depth_cap() with flips.
  std::optional<std::size_t> depth_cap;
};

class witness_replay_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Binary search for the smallest state count d in [1, cap + 1] whose
/// unrolling is satisfiable. Satisfiability is monotone in d because of the
/// identity transition. Each probe runs a fresh solver.
inline SynthesisOutcome synthesize(const SynthesisInstance& inst, const SolverBackend& backend,
                                   const SynthesisOptions& options = {}) {
  inst.validate();
  SynthesisOutcome out;
  const auto started = std::chrono::steady_clock::now();

  if (trivial_unreachable_check(inst) == TrivialCheck::trivially_unreachable) {
    out.verdict = Verdict::unreachable;
    out.reason = "a vertex isolated in the source has edges in the target";
    return out;
  }

  std::size_t max_transitions = 0;
  bool sound_bound = false;
  if (inst.flips.empty()) {
    out.threshold = completeness_threshold(inst);
    max_transitions = out.threshold->max_transitions;
    sound_bound = true;
    if (options.depth_cap && *options.depth_cap < max_transitions) {
      max_transitions = *options.depth_cap;
      sound_bound = false;
    }
  } else {
    max_transitions = options.depth_cap.value_or(default_flip_depth_cap(inst));
  }
  out.max_states = max_transitions + 1;

  std::map<std::size_t, Assignment> sat_models;
  std::optional<std::string> unknown_reason;

  auto probe = [&](std::size_t states) -> SolveStatus {
    SolveLimits limits;
    limits.memory_mb = options.memory_mb;
    limits.wall_time = options.per_solve_timeout;
    if (options.total_budget) {
      const auto used = std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - started);
      const auto left = *options.total_budget - used;
      if (left.count() <= 0) {
        unknown_reason = "global time budget exhausted";
        return SolveStatus::unknown;
      }
      limits.wall_time = limits.wall_time ? std::min(*limits.wall_time, left) : left;
    }
    auto enc = encode_bmc(inst, states);
    auto result = backend.solve(enc.formula, limits);
    out.probes.push_back({states, result.status, result.seconds, enc.formula.num_vars(),
                          enc.formula.num_clauses(), result.diagnostic});
    out.total_solver_seconds += result.seconds;
    out.depth_explored = std::max(out.depth_explored, states);
    if (result.status == SolveStatus::sat) {
      sat_models.emplace(states, std::move(result.model));
    } else if (result.status == SolveStatus::unknown) {
      unknown_reason = "solver returned unknown at " + std::to_string(states) +
                       " states: " + result.diagnostic;
    }
    return result.status;
  };

  std::size_t lo = 1;
  std::size_t hi = out.max_states;
  while (lo < hi) {
    const auto mid = lo + (hi - lo) / 2;
    const auto status = probe(mid);
    if (status == SolveStatus::sat) {
      hi = mid;
    } else if (status == SolveStatus::unsat) {
      lo = mid + 1;
    } else {
      out.verdict = Verdict::unknown;
      out.reason = *unknown_reason;
      return out;
    }
  }
  if (!sat_models.contains(lo)) {
    const auto status = probe(lo);
    if (status == SolveStatus::unknown) {
      out.verdict = Verdict::unknown;
      out.reason = *unknown_reason;
      return out;
    }
    if (status == SolveStatus::unsat) {
      if (sound_bound) {
        out.verdict = Verdict::unreachable;
        out.reason = "unsatisfiable at the completeness threshold (" +
                     std::to_string(max_transitions) + " operations)";
      } else {
        out.verdict = Verdict::unknown;
        out.reason = "no transformation within " + std::to_string(max_transitions) +
                     " operations and no completeness threshold applies";
      }
      return out;
    }
  }

  const auto& model = sat_models.at(lo);
  const StepLayout layout(inst.order(), inst.flips.size(), lo);
  Witness raw = decode(model, layout);
  Witness w = strip_identities(raw);
  const auto check = replay_verify(inst, w);
  if (!check.ok) {
    throw witness_replay_error("decoded witness fails replay: " + check.reason);
  }
  out.verdict = Verdict::reachable;
  out.depth_explored = lo;
  out.witness = std::move(w);
  return out;
}

}  // namespace gsynth
