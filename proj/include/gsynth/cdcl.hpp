#pragma once

/// \file cdcl.hpp
/// A compact conflict-driven clause-learning solver: two watched literals
/// with blockers, first-UIP learning with clause minimization, VSIDS
/// branching, phase saving, Luby restarts and LBD-based clause deletion.
///
/// It is the in-process backend. For large instances an external
/// competition solver is preferable (see solver.hpp).

#include <gsynth/cnf.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

namespace gsynth {

struct CdclLimits {
  std::optional<std::chrono::steady_clock::time_point> deadline;
  /// 0 means unbounded.
  std::uint64_t max_conflicts = 0;
};

struct CdclStats {
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t restarts = 0;
  std::uint64_t reductions = 0;
};

class CdclSolver {
 public:
  explicit CdclSolver(const CnfFormula& formula) : num_vars_(formula.num_vars()) {
    assigns_.assign(num_vars_, kUndef);
    level_.assign(num_vars_, 0);
    reason_.assign(num_vars_, kNoReason);
    seen_.assign(num_vars_, 0);
    phase_.assign(num_vars_, 1);  // 1 = prefer false
    activity_.assign(num_vars_, 0.0);
    watches_.resize(2 * num_vars_);
    heap_pos_.assign(num_vars_, -1);
    for (std::uint32_t v = 0; v < num_vars_; ++v) {
      heap_insert(v);
    }
    for (const auto& c : formula.clauses()) {
      add_input_clause(c);
      if (unsat_) {
        break;
      }
    }
  }

  SolveStatus solve(const CdclLimits& limits = {}) {
    if (unsat_) {
      return SolveStatus::unsat;
    }
    if (propagate() != kNoReason) {
      unsat_ = true;
      return SolveStatus::unsat;
    }
    max_learnts_ = std::max<double>(static_cast<double>(num_original_) / 3.0, 2000.0);

    std::uint64_t restart_index = 0;
    for (;;) {
      const auto budget = luby(restart_index++) * 100;
      const auto status = search(budget, limits);
      if (status) {
        return *status;
      }
      ++stats_.restarts;
      if (out_of_budget(limits)) {
        cancel_until(0);
        return SolveStatus::unknown;
      }
    }
  }

  /// Valid after solve() returned sat.
  Assignment model() const {
    Assignment a(num_vars_);
    for (std::uint32_t v = 0; v < num_vars_; ++v) {
      a.set(v + 1, assigns_[v] == kTrue);
    }
    return a;
  }

  const CdclStats& stats() const noexcept { return stats_; }

 private:
  using Lit = std::uint32_t;
  using ClauseRef = std::uint32_t;

  static constexpr std::int8_t kFalse = 0;
  static constexpr std::int8_t kTrue = 1;
  static constexpr std::int8_t kUndef = 2;
  static constexpr ClauseRef kNoReason = 0xffffffffU;

  struct ClauseRec {
    std::vector<Lit> lits;
    double activity = 0.0;
    std::uint32_t lbd = 0;
    bool learnt = false;
    bool deleted = false;
  };

  struct Watcher {
    ClauseRef cref;
    Lit blocker;
  };

  static Lit encode(Literal l) { return 2 * (l.var() - 1) + (l.positive() ? 0U : 1U); }
  static Lit negate(Lit l) { return l ^ 1U; }
  static std::uint32_t var_of(Lit l) { return l >> 1; }

  std::int8_t value(Lit l) const {
    const auto a = assigns_[var_of(l)];
    return a == kUndef ? kUndef : static_cast<std::int8_t>(a ^ static_cast<std::int8_t>(l & 1U));
  }

  std::uint32_t decision_level() const {
    return static_cast<std::uint32_t>(trail_lim_.size());
  }

  void add_input_clause(const Clause& input) {
    std::vector<Lit> lits;
    lits.reserve(input.size());
    for (auto l : input) {
      lits.push_back(encode(l));
    }
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t i = 1; i < lits.size(); ++i) {
      if (lits[i] == negate(lits[i - 1])) {
        return;  // tautology
      }
    }
    ++num_original_;
    if (lits.empty()) {
      unsat_ = true;
      return;
    }
    if (lits.size() == 1) {
      const auto v = value(lits[0]);
      if (v == kFalse) {
        unsat_ = true;
      } else if (v == kUndef) {
        enqueue(lits[0], kNoReason);
      }
      return;
    }
    attach(new_clause(std::move(lits), false));
  }

  ClauseRef new_clause(std::vector<Lit> lits, bool learnt) {
    ClauseRec rec;
    rec.lits = std::move(lits);
    rec.learnt = learnt;
    clauses_.push_back(std::move(rec));
    return static_cast<ClauseRef>(clauses_.size() - 1);
  }

  void attach(ClauseRef cref) {
    const auto& lits = clauses_[cref].lits;
    watches_[negate(lits[0])].push_back({cref, lits[1]});
    watches_[negate(lits[1])].push_back({cref, lits[0]});
  }

  void enqueue(Lit l, ClauseRef reason) {
    const auto v = var_of(l);
    assigns_[v] = static_cast<std::int8_t>((l & 1U) ? kFalse : kTrue);
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(l);
  }

  ClauseRef propagate() {
    ClauseRef conflict = kNoReason;
    while (qhead_ < trail_.size()) {
      const Lit p = trail_[qhead_++];
      const Lit false_lit = negate(p);
      auto& ws = watches_[p];
      ++stats_.propagations;
      std::size_t i = 0;
      std::size_t j = 0;
      while (i < ws.size()) {
        const Watcher w = ws[i];
        if (value(w.blocker) == kTrue) {
          ws[j++] = ws[i++];
          continue;
        }
        auto& c = clauses_[w.cref];
        if (c.deleted) {
          ++i;
          continue;
        }
        auto& lits = c.lits;
        if (lits[0] == false_lit) {
          std::swap(lits[0], lits[1]);
        }
        ++i;
        const Lit first = lits[0];
        if (first != w.blocker && value(first) == kTrue) {
          ws[j++] = {w.cref, first};
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < lits.size(); ++k) {
          if (value(lits[k]) != kFalse) {
            std::swap(lits[1], lits[k]);
            watches_[negate(lits[1])].push_back({w.cref, first});
            moved = true;
            break;
          }
        }
        if (moved) {
          continue;
        }
        ws[j++] = {w.cref, first};
        if (value(first) == kFalse) {
          conflict = w.cref;
          qhead_ = trail_.size();
          while (i < ws.size()) {
            ws[j++] = ws[i++];
          }
        } else {
          enqueue(first, w.cref);
        }
      }
      ws.resize(j);
      if (conflict != kNoReason) {
        break;
      }
    }
    return conflict;
  }

  void analyze(ClauseRef conflict, std::vector<Lit>& learnt, std::uint32_t& backtrack_level,
               std::uint32_t& lbd) {
    learnt.clear();
    learnt.push_back(0);  // asserting literal goes here
    int path_count = 0;
    Lit p = 0;
    bool have_p = false;
    std::size_t index = trail_.size();

    do {
      auto& c = clauses_[conflict];
      if (c.learnt) {
        bump_clause(c);
      }
      for (std::size_t k = have_p ? 1 : 0; k < c.lits.size(); ++k) {
        const Lit q = c.lits[k];
        const auto v = var_of(q);
        if (!seen_[v] && level_[v] > 0) {
          bump_var(v);
          seen_[v] = 1;
          if (level_[v] >= decision_level()) {
            ++path_count;
          } else {
            learnt.push_back(q);
          }
        }
      }
      do {
        --index;
      } while (!seen_[var_of(trail_[index])]);
      p = trail_[index];
      have_p = true;
      conflict = reason_[var_of(p)];
      seen_[var_of(p)] = 0;
      --path_count;
    } while (path_count > 0);
    learnt[0] = negate(p);

    // Drop literals implied by the rest of the clause.
    analyze_toclear_ = learnt;
    std::size_t keep = 1;
    for (std::size_t k = 1; k < learnt.size(); ++k) {
      const auto v = var_of(learnt[k]);
      const auto r = reason_[v];
      bool redundant = r != kNoReason;
      if (redundant) {
        const auto& rl = clauses_[r].lits;
        for (std::size_t t = 1; t < rl.size(); ++t) {
          const auto u = var_of(rl[t]);
          if (!seen_[u] && level_[u] > 0) {
            redundant = false;
            break;
          }
        }
      }
      if (!redundant) {
        learnt[keep++] = learnt[k];
      }
    }
    learnt.resize(keep);
    for (auto l : analyze_toclear_) {
      seen_[var_of(l)] = 0;
    }

    backtrack_level = 0;
    if (learnt.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t k = 2; k < learnt.size(); ++k) {
        if (level_[var_of(learnt[k])] > level_[var_of(learnt[max_i])]) {
          max_i = k;
        }
      }
      std::swap(learnt[1], learnt[max_i]);
      backtrack_level = level_[var_of(learnt[1])];
    }

    lbd_stamp_.resize(decision_level() + 1, 0);
    ++lbd_counter_;
    lbd = 0;
    for (auto l : learnt) {
      const auto lev = level_[var_of(l)];
      if (lbd_stamp_[lev] != lbd_counter_) {
        lbd_stamp_[lev] = lbd_counter_;
        ++lbd;
      }
    }
  }

  void cancel_until(std::uint32_t level) {
    if (decision_level() <= level) {
      return;
    }
    for (std::size_t c = trail_.size(); c > trail_lim_[level]; --c) {
      const auto v = var_of(trail_[c - 1]);
      phase_[v] = static_cast<std::int8_t>(trail_[c - 1] & 1U);
      assigns_[v] = kUndef;
      reason_[v] = kNoReason;
      if (heap_pos_[v] < 0) {
        heap_insert(v);
      }
    }
    trail_.resize(trail_lim_[level]);
    trail_lim_.resize(level);
    qhead_ = trail_.size();
  }

  std::optional<SolveStatus> search(std::uint64_t conflict_budget, const CdclLimits& limits) {
    std::uint64_t conflicts_here = 0;
    std::vector<Lit> learnt;
    for (;;) {
      const auto conflict = propagate();
      if (conflict != kNoReason) {
        ++stats_.conflicts;
        ++conflicts_here;
        if (decision_level() == 0) {
          unsat_ = true;
          return SolveStatus::unsat;
        }
        std::uint32_t backtrack_level = 0;
        std::uint32_t lbd = 0;
        analyze(conflict, learnt, backtrack_level, lbd);
        cancel_until(backtrack_level);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoReason);
        } else {
          const auto cref = new_clause(learnt, true);
          clauses_[cref].lbd = lbd;
          bump_clause(clauses_[cref]);
          attach(cref);
          ++num_learnts_;
          enqueue(learnt[0], cref);
        }
        var_inc_ /= kVarDecay;
        cla_inc_ /= kClauseDecay;
        if ((stats_.conflicts & 63U) == 0 && out_of_budget(limits)) {
          cancel_until(0);
          return SolveStatus::unknown;
        }
        continue;
      }

      if (conflicts_here >= conflict_budget) {
        cancel_until(0);
        return std::nullopt;
      }
      if (static_cast<double>(num_learnts_) >= max_learnts_ + static_cast<double>(trail_.size())) {
        reduce_db();
        max_learnts_ *= 1.1;
      }

      const auto next = pick_branch_var();
      if (!next) {
        return SolveStatus::sat;
      }
      ++stats_.decisions;
      if ((stats_.decisions & 1023U) == 0 && out_of_budget(limits)) {
        cancel_until(0);
        return SolveStatus::unknown;
      }
      trail_lim_.push_back(static_cast<std::uint32_t>(trail_.size()));
      enqueue(2 * *next + static_cast<Lit>(phase_[*next]), kNoReason);
    }
  }

  bool out_of_budget(const CdclLimits& limits) const {
    if (limits.max_conflicts != 0 && stats_.conflicts >= limits.max_conflicts) {
      return true;
    }
    return limits.deadline && std::chrono::steady_clock::now() >= *limits.deadline;
  }

  bool locked(ClauseRef cref) const {
    const auto& lits = clauses_[cref].lits;
    const auto v = var_of(lits[0]);
    return reason_[v] == cref && value(lits[0]) == kTrue;
  }

  void reduce_db() {
    ++stats_.reductions;
    std::vector<ClauseRef> candidates;
    for (ClauseRef c = 0; c < clauses_.size(); ++c) {
      const auto& rec = clauses_[c];
      if (rec.learnt && !rec.deleted && rec.lbd > 2 && rec.lits.size() > 2 && !locked(c)) {
        candidates.push_back(c);
      }
    }
    std::sort(candidates.begin(), candidates.end(), [this](ClauseRef a, ClauseRef b) {
      const auto& ca = clauses_[a];
      const auto& cb = clauses_[b];
      if (ca.lbd != cb.lbd) {
        return ca.lbd > cb.lbd;
      }
      return ca.activity < cb.activity;
    });
    const std::size_t remove = candidates.size() / 2;
    for (std::size_t i = 0; i < remove; ++i) {
      auto& rec = clauses_[candidates[i]];
      rec.deleted = true;
      rec.lits = {};
      --num_learnts_;
    }
  }

  static std::uint64_t luby(std::uint64_t x) {
    std::uint64_t size = 1;
    std::uint64_t seq = 0;
    while (size < x + 1) {
      ++seq;
      size = 2 * size + 1;
    }
    while (size - 1 != x) {
      size = (size - 1) >> 1;
      --seq;
      x = x % size;
    }
    return std::uint64_t{1} << seq;
  }

  // --- VSIDS ----------------------------------------------------------------

  static constexpr double kVarDecay = 0.95;
  static constexpr double kClauseDecay = 0.999;

  void bump_var(std::uint32_t v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
      for (auto& a : activity_) {
        a *= 1e-100;
      }
      var_inc_ *= 1e-100;
    }
    if (heap_pos_[v] >= 0) {
      heap_up(static_cast<std::size_t>(heap_pos_[v]));
    }
  }

  void bump_clause(ClauseRec& c) {
    c.activity += cla_inc_;
    if (c.activity > 1e20) {
      for (auto& rec : clauses_) {
        if (rec.learnt) {
          rec.activity *= 1e-20;
        }
      }
      cla_inc_ *= 1e-20;
    }
  }

  std::optional<std::uint32_t> pick_branch_var() {
    while (!heap_.empty()) {
      const auto v = heap_pop();
      if (assigns_[v] == kUndef) {
        return v;
      }
    }
    return std::nullopt;
  }

  void heap_insert(std::uint32_t v) {
    heap_pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    heap_up(heap_.size() - 1);
  }

  std::uint32_t heap_pop() {
    const auto top = heap_.front();
    heap_pos_[top] = -1;
    heap_.front() = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_pos_[heap_.front()] = 0;
      heap_down(0);
    }
    return top;
  }

  void heap_up(std::size_t i) {
    const auto v = heap_[i];
    while (i > 0) {
      const auto parent = (i - 1) / 2;
      if (activity_[heap_[parent]] >= activity_[v]) {
        break;
      }
      heap_[i] = heap_[parent];
      heap_pos_[heap_[i]] = static_cast<int>(i);
      i = parent;
    }
    heap_[i] = v;
    heap_pos_[v] = static_cast<int>(i);
  }

  void heap_down(std::size_t i) {
    const auto v = heap_[i];
    for (;;) {
      const auto left = 2 * i + 1;
      if (left >= heap_.size()) {
        break;
      }
      const auto right = left + 1;
      const auto child = (right < heap_.size() && activity_[heap_[right]] > activity_[heap_[left]])
                             ? right
                             : left;
      if (activity_[heap_[child]] <= activity_[v]) {
        break;
      }
      heap_[i] = heap_[child];
      heap_pos_[heap_[i]] = static_cast<int>(i);
      i = child;
    }
    heap_[i] = v;
    heap_pos_[v] = static_cast<int>(i);
  }

  std::size_t num_vars_;
  bool unsat_ = false;
  std::size_t num_original_ = 0;
  std::size_t num_learnts_ = 0;
  double max_learnts_ = 0.0;

  std::vector<ClauseRec> clauses_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<std::int8_t> assigns_;
  std::vector<std::uint32_t> level_;
  std::vector<ClauseRef> reason_;
  std::vector<std::int8_t> seen_;
  std::vector<std::int8_t> phase_;
  std::vector<Lit> trail_;
  std::vector<std::uint32_t> trail_lim_;
  std::size_t qhead_ = 0;

  std::vector<double> activity_;
  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  std::vector<std::uint32_t> heap_;
  std::vector<int> heap_pos_;

  std::vector<Lit> analyze_toclear_;
  std::vector<std::uint64_t> lbd_stamp_;
  std::uint64_t lbd_counter_ = 0;

  CdclStats stats_;
};

}  // namespace gsynth
