#pragma once

/// \file encoder.hpp
/// CNF encoding of graph-state transitions and of the unrolled reachability
/// query
///
///   S(x_0) & R(x_0, x_1) & ... & R(x_{d-2}, x_{d-1}) & T(x_{d-1})
///
/// where each R is the guarded conjunction of every local complementation,
/// vertex deletion, edge flip and the identity, selected by per-transition
/// bits y (operand, LSB first) and z (0 LC, 1 VD, 2 EF, 3 Id).
///
/// All expansions are direct clause sets; no auxiliary variables are
/// introduced.
///
/// Variable numbering is state-major: the n(n-1)/2 edge variables of
/// state 0, then state 1, ..., then one block of m + 2 selector
/// variables (y_0..y_{m-1}, z_0, z_1) per transition.

#include <gsynth/cnf.hpp>
#include <gsynth/graph.hpp>
#include <gsynth/instance.hpp>

#include <bit>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gsynth {

class StepLayout {
 public:
  StepLayout(std::size_t n, std::size_t flip_count, std::size_t states)
      : n_(n),
        flips_(flip_count),
        states_(states),
        pairs_(pair_count(n)),
        width_(static_cast<std::size_t>(std::bit_width(std::max(n, flip_count)))) {
    if (n == 0) {
      throw std::domain_error("cannot encode a graph without vertices");
    }
    if (states == 0) {
      throw std::domain_error("an unrolling needs at least one state");
    }
  }

  std::size_t order() const noexcept { return n_; }
  std::size_t flip_count() const noexcept { return flips_; }
  std::size_t states() const noexcept { return states_; }
  std::size_t transitions() const noexcept { return states_ - 1; }
  std::size_t pairs() const noexcept { return pairs_; }
  /// m = ceil(log2(max(n, |D|) + 1))
  std::size_t selector_width() const noexcept { return width_; }
  std::size_t selector_block() const noexcept { return width_ + 2; }

  Variable edge_base() const noexcept { return 1; }
  Variable selector_base() const noexcept {
    return static_cast<Variable>(states_ * pairs_ + 1);
  }

  /// d * n(n-1)/2 + (d-1) * (m+2)
  std::size_t num_vars() const noexcept {
    return states_ * pairs_ + transitions() * selector_block();
  }

  Variable edge_var(std::size_t state, std::size_t pair) const {
    if (state >= states_ || pair >= pairs_) {
      throw std::out_of_range("edge variable (" + std::to_string(state) + ", " +
                              std::to_string(pair) + ") outside layout");
    }
    return static_cast<Variable>(edge_base() + state * pairs_ + pair);
  }

  Variable edge_var(std::size_t state, Vertex a, Vertex b) const {
    const auto p = make_pair_checked(a, b);
    if (p.v >= n_) {
      throw std::out_of_range("vertex " + std::to_string(p.v) + " outside layout");
    }
    return edge_var(state, pair_index(n_, p.u, p.v));
  }

  Variable y_var(std::size_t transition, std::size_t bit) const {
    check_transition(transition);
    if (bit >= width_) {
      throw std::out_of_range("selector bit " + std::to_string(bit) + " outside layout");
    }
    return static_cast<Variable>(selector_base() + transition * selector_block() + bit);
  }

  Variable z_var(std::size_t transition, std::size_t bit) const {
    check_transition(transition);
    if (bit >= 2) {
      throw std::out_of_range("operation selector has two bits");
    }
    return static_cast<Variable>(selector_base() + transition * selector_block() + width_ + bit);
  }

  std::vector<Variable> y_vars(std::size_t transition) const {
    std::vector<Variable> out;
    for (std::size_t j = 0; j < width_; ++j) {
      out.push_back(y_var(transition, j));
    }
    return out;
  }

  std::vector<Variable> z_vars(std::size_t transition) const {
    return {z_var(transition, 0), z_var(transition, 1)};
  }

  friend bool operator==(const StepLayout&, const StepLayout&) = default;

 private:
  void check_transition(std::size_t t) const {
    if (t >= transitions()) {
      throw std::out_of_range("transition " + std::to_string(t) + " outside layout with " +
                              std::to_string(states_) + " states");
    }
  }

  std::size_t n_;
  std::size_t flips_;
  std::size_t states_;
  std::size_t pairs_;
  std::size_t width_;
};

// ---------------------------------------------------------------------------
// Binary comparisons on selector vectors (LSB first).

namespace detail {

inline void check_selector_value(std::span<const Variable> vars, std::uint64_t b) {
  if (vars.size() < 64 && b >= (std::uint64_t{1} << vars.size())) {
    throw std::domain_error("value " + std::to_string(b) + " not representable in " +
                            std::to_string(vars.size()) + " bits");
  }
}

}  // namespace detail

/// Single clause that is false exactly when vars encode b.
inline Clause encode_neq(std::span<const Variable> vars, std::uint64_t b) {
  detail::check_selector_value(vars, b);
  Clause c;
  c.reserve(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    c.push_back(Literal(vars[i], ((b >> i) & 1U) == 0));
  }
  return c;
}

/// Clauses satisfied exactly when vars encode a value <= b: for every zero
/// bit i of b, forbid y_i = 1 while every higher one bit of b is also set.
inline std::vector<Clause> encode_leq(std::span<const Variable> vars, std::uint64_t b) {
  detail::check_selector_value(vars, b);
  std::vector<Clause> out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if ((b >> i) & 1U) {
      continue;
    }
    Clause c{Literal::neg(vars[i])};
    for (std::size_t j = i + 1; j < vars.size(); ++j) {
      if ((b >> j) & 1U) {
        c.push_back(Literal::neg(vars[j]));
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Per-operation clause sets. The emit_* templates push clauses into a sink
// taking std::initializer_list<Literal>; the encode_* wrappers collect them.

namespace detail {

struct ClauseCollector {
  std::vector<Clause>& out;
  void operator()(std::initializer_list<Literal> lits) const { out.emplace_back(lits); }
};

/// Sink adapter that prefixes every clause with a fixed guard.
template <class Sink>
struct GuardedSink {
  const Clause& guard;
  Sink& sink;
  Clause& buffer;

  void operator()(std::initializer_list<Literal> lits) const {
    buffer.assign(guard.begin(), guard.end());
    buffer.insert(buffer.end(), lits.begin(), lits.end());
    sink(std::span<const Literal>(buffer));
  }
};

template <class Sink>
void emit_equiv(Variable next, Variable cur, Sink& sink) {
  sink({Literal::pos(next), Literal::neg(cur)});
  sink({Literal::neg(next), Literal::pos(cur)});
}

inline void check_op_vertex(const StepLayout& layout, Vertex k) {
  if (k >= layout.order()) {
    throw std::domain_error("vertex " + std::to_string(k) + " out of range for " +
                            std::to_string(layout.order()) + " vertices");
  }
}

template <class Sink>
void emit_vd(Vertex k, std::size_t t, const StepLayout& layout, Sink& sink) {
  check_op_vertex(layout, k);
  std::size_t index = 0;
  for (Vertex u = 0; u < layout.order(); ++u) {
    for (Vertex v = u + 1; v < layout.order(); ++v, ++index) {
      const auto next = layout.edge_var(t + 1, index);
      if (u == k || v == k) {
        sink({Literal::neg(next)});
      } else {
        emit_equiv(next, layout.edge_var(t, index), sink);
      }
    }
  }
}

template <class Sink>
void emit_lc(Vertex k, std::size_t t, const StepLayout& layout, Sink& sink) {
  check_op_vertex(layout, k);
  std::size_t index = 0;
  for (Vertex u = 0; u < layout.order(); ++u) {
    for (Vertex v = u + 1; v < layout.order(); ++v, ++index) {
      const auto next = layout.edge_var(t + 1, index);
      const auto cur = layout.edge_var(t, index);
      if (u == k || v == k) {
        emit_equiv(next, cur, sink);
        continue;
      }
      // x'_uv <-> (x_uv xor (x_uk and x_vk))
      const auto uk = layout.edge_var(t, u, k);
      const auto vk = layout.edge_var(t, v, k);
      sink({Literal::neg(uk), Literal::neg(vk), Literal::pos(next), Literal::pos(cur)});
      sink({Literal::neg(uk), Literal::neg(vk), Literal::neg(next), Literal::neg(cur)});
      sink({Literal::pos(uk), Literal::pos(next), Literal::neg(cur)});
      sink({Literal::pos(vk), Literal::pos(next), Literal::neg(cur)});
      sink({Literal::pos(uk), Literal::neg(next), Literal::pos(cur)});
      sink({Literal::pos(vk), Literal::neg(next), Literal::pos(cur)});
    }
  }
}

template <class Sink>
void emit_ef(std::size_t i, const PairList& flips, std::size_t t, const StepLayout& layout,
             Sink& sink) {
  if (flips.empty()) {
    throw std::domain_error("edge flip encoding requested with an empty flip set");
  }
  if (i >= flips.size()) {
    throw std::domain_error("edge flip index " + std::to_string(i) + " out of range");
  }
  const auto flipped = pair_index(layout.order(), flips[i].u, flips[i].v);
  for (std::size_t index = 0; index < layout.pairs(); ++index) {
    const auto next = layout.edge_var(t + 1, index);
    const auto cur = layout.edge_var(t, index);
    if (index == flipped) {
      sink({Literal::pos(next), Literal::pos(cur)});
      sink({Literal::neg(next), Literal::neg(cur)});
    } else {
      emit_equiv(next, cur, sink);
    }
  }
}

template <class Sink>
void emit_identity_body(std::size_t t, const StepLayout& layout, Sink& sink) {
  for (std::size_t index = 0; index < layout.pairs(); ++index) {
    emit_equiv(layout.edge_var(t + 1, index), layout.edge_var(t, index), sink);
  }
}

inline void check_transition_index(const StepLayout& layout, std::size_t t) {
  if (t >= layout.transitions()) {
    throw std::out_of_range("transition " + std::to_string(t) + " outside layout with " +
                            std::to_string(layout.states()) + " states");
  }
}

}  // namespace detail

/// One unit clause per vertex pair: positive iff the edge is present.
inline std::vector<Clause> encode_graph_constraint(const Graph& g, std::size_t state,
                                                   const StepLayout& layout) {
  if (g.order() != layout.order()) {
    throw std::domain_error("graph order does not match layout");
  }
  std::vector<Clause> out;
  out.reserve(layout.pairs());
  for (std::size_t index = 0; index < layout.pairs(); ++index) {
    out.push_back({Literal(layout.edge_var(state, index), g.bit(index))});
  }
  return out;
}

inline std::vector<Clause> encode_vd(Vertex k, std::size_t t, const StepLayout& layout) {
  detail::check_transition_index(layout, t);
  std::vector<Clause> out;
  detail::ClauseCollector sink{out};
  detail::emit_vd(k, t, layout, sink);
  return out;
}

inline std::vector<Clause> encode_lc(Vertex k, std::size_t t, const StepLayout& layout) {
  detail::check_transition_index(layout, t);
  std::vector<Clause> out;
  detail::ClauseCollector sink{out};
  detail::emit_lc(k, t, layout, sink);
  return out;
}

inline std::vector<Clause> encode_ef(std::size_t i, const SynthesisInstance& inst,
                                     std::size_t t, const StepLayout& layout) {
  detail::check_transition_index(layout, t);
  std::vector<Clause> out;
  detail::ClauseCollector sink{out};
  detail::emit_ef(i, inst.flips, t, layout, sink);
  return out;
}

/// Equivalence on every pair, guarded by z != 3.
inline std::vector<Clause> encode_identity(std::size_t t, const StepLayout& layout) {
  detail::check_transition_index(layout, t);
  const auto z = layout.z_vars(t);
  const Clause guard = encode_neq(z, 3);
  std::vector<Clause> out;
  Clause buffer;
  auto span_sink = [&out](std::span<const Literal> lits) { out.emplace_back(lits.begin(), lits.end()); };
  detail::GuardedSink<decltype(span_sink)> sink{guard, span_sink, buffer};
  detail::emit_identity_body(t, layout, sink);
  return out;
}

/// Selector-range constraint making every (y, z) decode to one operation:
///   z in {0,1} -> y < n,   z = 2 -> y < |D|,   z = 3 -> y = 0.
/// With |D| = 0 the value z = 2 is forbidden outright.
inline std::vector<Clause> encode_selector_range(std::size_t t, const StepLayout& layout) {
  detail::check_transition_index(layout, t);
  const auto y = layout.y_vars(t);
  const auto z0 = layout.z_var(t, 0);
  const auto z1 = layout.z_var(t, 1);
  std::vector<Clause> out;

  for (auto c : encode_leq(y, layout.order() - 1)) {
    c.push_back(Literal::pos(z1));
    out.push_back(std::move(c));
  }
  if (layout.flip_count() == 0) {
    out.push_back(encode_neq(std::vector<Variable>{z0, z1}, 2));
  } else {
    for (auto c : encode_leq(y, layout.flip_count() - 1)) {
      c.push_back(Literal::pos(z0));
      c.push_back(Literal::neg(z1));
      out.push_back(std::move(c));
    }
  }
  for (auto yj : y) {
    out.push_back({Literal::neg(yj), Literal::neg(z0), Literal::neg(z1)});
  }
  return out;
}

namespace detail {

/// Streams the full guarded transition relation for step t into sink,
/// which takes std::span<const Literal>.
template <class SpanSink>
void emit_transition(const SynthesisInstance& inst, std::size_t t, const StepLayout& layout,
                     SpanSink& sink) {
  check_transition_index(layout, t);
  const auto y = layout.y_vars(t);
  const auto z = layout.z_vars(t);
  Clause guard;
  Clause buffer;

  for (Vertex k = 0; k < layout.order(); ++k) {
    const auto not_k = encode_neq(y, k);

    guard = not_k;
    const auto not_lc = encode_neq(z, static_cast<std::uint64_t>(OpKind::local_complement));
    guard.insert(guard.end(), not_lc.begin(), not_lc.end());
    GuardedSink<SpanSink> lc_sink{guard, sink, buffer};
    emit_lc(k, t, layout, lc_sink);

    guard = not_k;
    const auto not_vd = encode_neq(z, static_cast<std::uint64_t>(OpKind::vertex_deletion));
    guard.insert(guard.end(), not_vd.begin(), not_vd.end());
    GuardedSink<SpanSink> vd_sink{guard, sink, buffer};
    emit_vd(k, t, layout, vd_sink);
  }

  for (std::size_t i = 0; i < inst.flips.size(); ++i) {
    guard = encode_neq(y, i);
    const auto not_ef = encode_neq(z, static_cast<std::uint64_t>(OpKind::edge_flip));
    guard.insert(guard.end(), not_ef.begin(), not_ef.end());
    GuardedSink<SpanSink> ef_sink{guard, sink, buffer};
    emit_ef(i, inst.flips, t, layout, ef_sink);
  }

  guard = encode_neq(z, static_cast<std::uint64_t>(OpKind::identity));
  GuardedSink<SpanSink> id_sink{guard, sink, buffer};
  emit_identity_body(t, layout, id_sink);

  for (const auto& c : encode_selector_range(t, layout)) {
    sink(std::span<const Literal>(c));
  }
}

}  // namespace detail

inline std::vector<Clause> encode_transition(const SynthesisInstance& inst, std::size_t t,
                                             const StepLayout& layout) {
  if (inst.flips.size() != layout.flip_count() || inst.order() != layout.order()) {
    throw std::domain_error("instance does not match layout");
  }
  std::vector<Clause> out;
  auto sink = [&out](std::span<const Literal> lits) { out.emplace_back(lits.begin(), lits.end()); };
  detail::emit_transition(inst, t, layout, sink);
  return out;
}

struct BmcEncoding {
  CnfFormula formula;
  StepLayout layout;
};

/// Satisfiable iff the target is reachable from the source in at most
/// states - 1 operations.
inline BmcEncoding encode_bmc(const SynthesisInstance& inst, std::size_t states) {
  inst.validate();
  StepLayout layout(inst.order(), inst.flips.size(), states);
  CnfFormula formula(layout.num_vars());

  formula.add_clauses(encode_graph_constraint(inst.source, 0, layout));
  auto sink = [&formula](std::span<const Literal> lits) { formula.add_clause(lits); };
  for (std::size_t t = 0; t < layout.transitions(); ++t) {
    detail::emit_transition(inst, t, layout, sink);
  }
  if (states == 1) {
    // Source and target constrain the same state; emit only the target
    // units that disagree with the source (these make the formula UNSAT).
    for (std::size_t index = 0; index < layout.pairs(); ++index) {
      if (inst.source.bit(index) != inst.target.bit(index)) {
        formula.add_clause({Literal(layout.edge_var(0, index), inst.target.bit(index))});
      }
    }
  } else {
    formula.add_clauses(encode_graph_constraint(inst.target, states - 1, layout));
  }
  return {std::move(formula), layout};
}

/// Per-transition size bound: m + n(n-1) variables (vars_with_selector
/// also counts the two operation bits) and
/// 3.5 n^3 + 2 m n^2 + 0.5 n^2 + 0.5 |D| n^2 clauses.
struct ClauseBound {
  std::size_t selector_width = 0;
  std::size_t vars = 0;
  std::size_t vars_with_selector = 0;
  double clauses = 0.0;
};

inline ClauseBound clause_bound(std::size_t n, std::size_t flip_count) {
  ClauseBound b;
  b.selector_width = static_cast<std::size_t>(std::bit_width(std::max(n, flip_count)));
  b.vars = b.selector_width + n * (n - (n > 0 ? 1 : 0));
  b.vars_with_selector = b.vars + 2;
  const auto nd = static_cast<double>(n);
  const auto md = static_cast<double>(b.selector_width);
  b.clauses = 3.5 * nd * nd * nd + 2.0 * md * nd * nd + 0.5 * nd * nd +
              0.5 * static_cast<double>(flip_count) * nd * nd;
  return b;
}

/// Sidecar text describing the variable layout of an encoded formula.
inline std::string write_layout(const StepLayout& layout) {
  std::string out;
  auto kv = [&out](std::string_view key, std::size_t value) {
    out += std::string(key) + " " + std::to_string(value) + "\n";
  };
  kv("n", layout.order());
  kv("states", layout.states());
  kv("flips", layout.flip_count());
  kv("selector_width", layout.selector_width());
  kv("pairs_per_state", layout.pairs());
  kv("edge_base", layout.edge_base());
  kv("selector_base", layout.selector_base());
  kv("selector_block", layout.selector_block());
  kv("num_vars", layout.num_vars());
  out +=
      "# edge(t, e) = edge_base + t*pairs_per_state + e, pairs in lexicographic (u<v) order\n"
      "# y(t, j) = selector_base + t*selector_block + j            (LSB first)\n"
      "# z(t, j) = selector_base + t*selector_block + selector_width + j\n"
      "# z: 0 LC, 1 VD, 2 EF, 3 Id\n";
  return out;
}

}  // namespace gsynth
