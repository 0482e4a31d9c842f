#pragma once

/// \file witness.hpp
/// Decoding solver models into operation sequences, replay against the
/// graph semantics, and the witness text format (one operation per line:
/// "LC k", "VD k", "EF u v"; "Id" is accepted on input).

#include <gsynth/cnf.hpp>
#include <gsynth/encoder.hpp>
#include <gsynth/graph.hpp>
#include <gsynth/instance.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace gsynth {

struct Witness {
  std::vector<Operation> ops;
  /// ops.size() + 1 graphs; states.front() is the source.
  std::vector<Graph> states;
};

class decode_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline Graph decode_state(const Assignment& model, const StepLayout& layout, std::size_t state) {
  Graph g(layout.order());
  for (std::size_t index = 0; index < layout.pairs(); ++index) {
    g.set_bit(index, model.value(layout.edge_var(state, index)));
  }
  return g;
}

inline Operation decode_operation(const Assignment& model, const StepLayout& layout,
                                  std::size_t t) {
  std::uint64_t y = 0;
  for (std::size_t j = 0; j < layout.selector_width(); ++j) {
    if (model.value(layout.y_var(t, j))) {
      y |= std::uint64_t{1} << j;
    }
  }
  const auto z = static_cast<unsigned>(model.value(layout.z_var(t, 0))) |
                 (static_cast<unsigned>(model.value(layout.z_var(t, 1))) << 1);
  const auto kind = static_cast<OpKind>(z);
  const bool in_range = [&] {
    switch (kind) {
      case OpKind::local_complement:
      case OpKind::vertex_deletion:
        return y < layout.order();
      case OpKind::edge_flip:
        return y < layout.flip_count();
      case OpKind::identity:
        return y == 0;
    }
    return false;
  }();
  if (!in_range) {
    throw decode_error("transition " + std::to_string(t) + " selects z=" + std::to_string(z) +
                       ", y=" + std::to_string(y) + ", outside the selector range");
  }
  return {kind, static_cast<std::uint32_t>(y)};
}

/// Reads every state and every transition selector. Identity steps are kept.
inline Witness decode(const Assignment& model, const StepLayout& layout) {
  Witness w;
  for (std::size_t s = 0; s < layout.states(); ++s) {
    w.states.push_back(decode_state(model, layout, s));
  }
  for (std::size_t t = 0; t < layout.transitions(); ++t) {
    w.ops.push_back(decode_operation(model, layout, t));
  }
  return w;
}

inline Witness strip_identities(const Witness& w) {
  Witness out;
  if (w.states.empty()) {
    return out;
  }
  out.states.push_back(w.states.front());
  for (std::size_t t = 0; t < w.ops.size(); ++t) {
    if (w.ops[t].kind == OpKind::identity) {
      continue;
    }
    out.ops.push_back(w.ops[t]);
    out.states.push_back(w.states[t + 1]);
  }
  return out;
}

/// Witness whose states are recomputed from the source.
inline Witness replay(const Graph& source, const std::vector<Operation>& ops,
                      const PairList& flips) {
  Witness w;
  w.ops = ops;
  w.states.push_back(source);
  for (auto op : ops) {
    w.states.push_back(apply_operation(w.states.back(), op, flips));
  }
  return w;
}

struct VerifyResult {
  bool ok = false;
  /// Index of the first diverging operation. A wrong final state is blamed
  /// on the last operation.
  std::size_t step = 0;
  std::string reason;
};

inline VerifyResult replay_verify(const SynthesisInstance& inst, const Witness& w) {
  VerifyResult r;
  if (w.states.size() != w.ops.size() + 1) {
    r.reason = "witness has " + std::to_string(w.states.size()) + " states for " +
               std::to_string(w.ops.size()) + " operations";
    return r;
  }
  if (w.states.front() != inst.source) {
    r.reason = "first state is not the source graph";
    return r;
  }
  for (std::size_t t = 0; t < w.ops.size(); ++t) {
    Graph next;
    try {
      next = apply_operation(w.states[t], w.ops[t], inst.flips);
    } catch (const std::domain_error& e) {
      r.step = t;
      r.reason = std::string("invalid operation: ") + e.what();
      return r;
    }
    if (next != w.states[t + 1]) {
      r.step = t;
      r.reason = "step " + std::to_string(t) + " (" + to_string(w.ops[t], inst.flips) +
                 ") does not produce the recorded state";
      return r;
    }
  }
  if (w.states.back() != inst.target) {
    // Blame the last operation; with no operations the source itself is wrong.
    r.step = w.ops.empty() ? 0 : w.ops.size() - 1;
    r.reason = "final state differs from the target";
    return r;
  }
  r.ok = true;
  r.step = w.ops.size();
  return r;
}

// ---------------------------------------------------------------------------
// Text format

inline std::string write_witness(const std::vector<Operation>& ops, const PairList& flips) {
  std::string out;
  for (auto op : ops) {
    out += to_string(op, flips) + "\n";
  }
  return out;
}

inline std::vector<Operation> read_witness(std::istream& in, const SynthesisInstance& inst) {
  detail::LineReader reader(in);
  std::vector<Operation> ops;
  std::string line;
  while (reader.next(line)) {
    const auto tokens = detail::split_ws(line);
    const auto no = reader.line_no();
    if (tokens.size() == 1 && tokens[0] == "Id") {
      ops.push_back(Operation::id());
    } else if (tokens.size() == 2 && (tokens[0] == "LC" || tokens[0] == "VD")) {
      const auto k = detail::parse_count(tokens[1], no);
      if (k >= inst.order()) {
        throw parse_error(no, "vertex " + std::to_string(k) + " out of range");
      }
      const auto v = static_cast<Vertex>(k);
      ops.push_back(tokens[0] == "LC" ? Operation::lc(v) : Operation::vd(v));
    } else if (tokens.size() == 3 && tokens[0] == "EF") {
      const auto a = detail::parse_count(tokens[1], no);
      const auto b = detail::parse_count(tokens[2], no);
      if (a >= inst.order() || b >= inst.order() || a == b) {
        throw parse_error(no, "invalid edge flip pair");
      }
      const auto p = make_pair_checked(static_cast<Vertex>(a), static_cast<Vertex>(b));
      const auto it = std::find(inst.flips.begin(), inst.flips.end(), p);
      if (it == inst.flips.end()) {
        throw parse_error(no, "pair (" + std::to_string(p.u) + "," + std::to_string(p.v) +
                                  ") is not in the allowed flip set");
      }
      ops.push_back(Operation::ef(static_cast<std::uint32_t>(it - inst.flips.begin())));
    } else {
      throw parse_error(no, "expected 'LC k', 'VD k', 'EF u v' or 'Id', got '" + line + "'");
    }
  }
  return ops;
}

inline std::vector<Operation> read_witness(std::string_view text, const SynthesisInstance& inst) {
  std::istringstream in{std::string(text)};
  return read_witness(in, inst);
}

}  // namespace gsynth
