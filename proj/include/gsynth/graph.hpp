#pragma once

/// \file graph.hpp
/// Simple undirected graphs over a fixed vertex set together with the
/// graph-state operations: local complementation, vertex deletion and edge
/// flips. These are the ground-truth semantics every other component is
/// checked against.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gsynth {

using Vertex = std::uint32_t;

/// An unordered vertex pair stored with u < v.
struct VertexPair {
  Vertex u = 0;
  Vertex v = 0;

  friend constexpr bool operator==(VertexPair, VertexPair) = default;
  friend constexpr auto operator<=>(VertexPair, VertexPair) = default;
};

/// Normalizes (a, b) to u < v. Throws on a == b.
inline VertexPair make_pair_checked(Vertex a, Vertex b) {
  if (a == b) {
    throw std::domain_error("vertex pair must join two distinct vertices (got " +
                            std::to_string(a) + ", " + std::to_string(b) + ")");
  }
  return a < b ? VertexPair{a, b} : VertexPair{b, a};
}

/// |{(u,v) | u < v < n}|
constexpr std::size_t pair_count(std::size_t n) noexcept {
  return n < 2 ? 0 : n * (n - 1) / 2;
}

/// Lexicographic index of the normalized pair (u, v), u < v < n.
constexpr std::size_t pair_index(std::size_t n, Vertex u, Vertex v) noexcept {
  return static_cast<std::size_t>(u) * (2 * n - u - 1) / 2 + (v - u - 1);
}

/// Inverse of pair_index.
constexpr VertexPair pair_at(std::size_t n, std::size_t index) noexcept {
  Vertex u = 0;
  std::size_t row = n - 1;
  while (index >= row) {
    index -= row;
    ++u;
    --row;
  }
  return {u, static_cast<Vertex>(u + 1 + index)};
}

class Graph {
 public:
  Graph() = default;

  explicit Graph(std::size_t n)
      : n_(n), words_((pair_count(n) + 63) / 64, 0) {}

  Graph(std::size_t n, std::initializer_list<std::pair<Vertex, Vertex>> edges)
      : Graph(n) {
    for (auto [a, b] : edges) {
      set_edge(a, b, true);
    }
  }

  Graph(std::size_t n, const std::vector<VertexPair>& edges) : Graph(n) {
    for (auto e : edges) {
      set_edge(e.u, e.v, true);
    }
  }

  static Graph complete(std::size_t n) {
    Graph g(n);
    for (std::size_t i = 0; i < pair_count(n); ++i) {
      g.set_bit(i, true);
    }
    return g;
  }

  std::size_t order() const noexcept { return n_; }
  std::size_t pair_slots() const noexcept { return pair_count(n_); }

  bool has_edge(Vertex a, Vertex b) const {
    const auto p = make_pair_checked(a, b);
    check_vertex(p.v);
    return bit(pair_index(n_, p.u, p.v));
  }

  /// Edge membership by canonical pair index.
  bool bit(std::size_t index) const noexcept {
    return (words_[index / 64] >> (index % 64)) & 1U;
  }

  void set_bit(std::size_t index, bool value) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (index % 64);
    if (value) {
      words_[index / 64] |= mask;
    } else {
      words_[index / 64] &= ~mask;
    }
  }

  void set_edge(Vertex a, Vertex b, bool present) {
    const auto p = make_pair_checked(a, b);
    check_vertex(p.v);
    set_bit(pair_index(n_, p.u, p.v), present);
  }

  void toggle_edge(Vertex a, Vertex b) {
    const auto p = make_pair_checked(a, b);
    check_vertex(p.v);
    const auto index = pair_index(n_, p.u, p.v);
    words_[index / 64] ^= std::uint64_t{1} << (index % 64);
  }

  std::size_t edge_count() const noexcept {
    std::size_t count = 0;
    for (auto w : words_) {
      count += static_cast<std::size_t>(std::popcount(w));
    }
    return count;
  }

  /// Edges in canonical (lexicographic) order.
  std::vector<VertexPair> edges() const {
    std::vector<VertexPair> out;
    std::size_t index = 0;
    for (Vertex u = 0; u < n_; ++u) {
      for (Vertex v = u + 1; v < n_; ++v, ++index) {
        if (bit(index)) {
          out.push_back({u, v});
        }
      }
    }
    return out;
  }

  std::size_t degree(Vertex k) const {
    check_vertex(k);
    std::size_t d = 0;
    for (Vertex v = 0; v < n_; ++v) {
      if (v != k && has_edge(k, v)) {
        ++d;
      }
    }
    return d;
  }

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  void check_vertex(Vertex k) const {
    if (k >= n_) {
      throw std::domain_error("vertex " + std::to_string(k) +
                              " out of range for graph of order " +
                              std::to_string(n_));
    }
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

struct GraphHash {
  std::size_t operator()(const Graph& g) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ g.order();
    for (auto w : g.words()) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0xbf58476d1ce4e5b9ULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 31));
  }
};

// ---------------------------------------------------------------------------
// Operations

/// Selector values double as the operation tag: z = 0 LC, 1 VD, 2 EF, 3 Id.
enum class OpKind : std::uint8_t {
  local_complement = 0,
  vertex_deletion = 1,
  edge_flip = 2,
  identity = 3,
};

struct Operation {
  OpKind kind = OpKind::identity;
  /// Vertex for LC/VD, index into the flip list for EF, 0 for Id.
  std::uint32_t index = 0;

  static constexpr Operation lc(Vertex k) { return {OpKind::local_complement, k}; }
  static constexpr Operation vd(Vertex k) { return {OpKind::vertex_deletion, k}; }
  static constexpr Operation ef(std::uint32_t i) { return {OpKind::edge_flip, i}; }
  static constexpr Operation id() { return {OpKind::identity, 0}; }

  friend constexpr bool operator==(Operation, Operation) = default;
};

using PairList = std::vector<VertexPair>;

inline std::vector<Vertex> neighborhood(const Graph& g, Vertex k) {
  g.check_vertex(k);
  std::vector<Vertex> out;
  for (Vertex v = 0; v < g.order(); ++v) {
    if (v != k && g.has_edge(k, v)) {
      out.push_back(v);
    }
  }
  return out;
}

/// Toggles every edge between two neighbours of k.
inline Graph local_complement(const Graph& g, Vertex k) {
  const auto nbrs = neighborhood(g, k);
  Graph out = g;
  for (std::size_t i = 0; i < nbrs.size(); ++i) {
    for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
      out.toggle_edge(nbrs[i], nbrs[j]);
    }
  }
  return out;
}

/// Removes every edge incident to k; k stays in the vertex set, isolated.
inline Graph delete_vertex_edges(const Graph& g, Vertex k) {
  g.check_vertex(k);
  Graph out = g;
  for (Vertex v = 0; v < g.order(); ++v) {
    if (v != k) {
      out.set_edge(k, v, false);
    }
  }
  return out;
}

inline Graph flip_edge(const Graph& g, Vertex a, Vertex b) {
  Graph out = g;
  out.toggle_edge(a, b);
  return out;
}

inline Graph apply_operation(const Graph& g, Operation op, const PairList& flips) {
  switch (op.kind) {
    case OpKind::local_complement:
      return local_complement(g, op.index);
    case OpKind::vertex_deletion:
      return delete_vertex_edges(g, op.index);
    case OpKind::edge_flip:
      if (flips.empty()) {
        throw std::domain_error("edge flip requested but the flip set is empty");
      }
      if (op.index >= flips.size()) {
        throw std::domain_error("edge flip index " + std::to_string(op.index) +
                                " out of range for flip set of size " +
                                std::to_string(flips.size()));
      }
      return flip_edge(g, flips[op.index].u, flips[op.index].v);
    case OpKind::identity:
      return g;
  }
  throw std::logic_error("unknown operation kind");
}

inline std::vector<Vertex> isolated_vertices(const Graph& g) {
  std::vector<bool> touched(g.order(), false);
  for (auto e : g.edges()) {
    touched[e.u] = touched[e.v] = true;
  }
  std::vector<Vertex> out;
  for (Vertex v = 0; v < g.order(); ++v) {
    if (!touched[v]) {
      out.push_back(v);
    }
  }
  return out;
}

inline Graph star_graph(std::size_t n, Vertex center, const std::vector<Vertex>& leaves) {
  Graph g(n);
  g.check_vertex(center);
  for (auto leaf : leaves) {
    if (leaf == center) {
      throw std::domain_error("star center " + std::to_string(center) +
                              " cannot also be a leaf");
    }
    g.set_edge(center, leaf, true);
  }
  return g;
}

inline std::string to_string(Operation op, const PairList& flips = {}) {
  switch (op.kind) {
    case OpKind::local_complement:
      return "LC " + std::to_string(op.index);
    case OpKind::vertex_deletion:
      return "VD " + std::to_string(op.index);
    case OpKind::edge_flip:
      if (op.index < flips.size()) {
        return "EF " + std::to_string(flips[op.index].u) + " " +
               std::to_string(flips[op.index].v);
      }
      return "EF #" + std::to_string(op.index);
    case OpKind::identity:
      return "Id";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Text format:
//   n <count>
//   u v        (one edge per line, 0-based, u < v)

class parse_error : public std::runtime_error {
 public:
  parse_error(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A file could not be opened or read.
class input_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

/// Line reader that skips blank lines and '#' comments and tracks line numbers.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') {
        line.pop_back();
      }
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') {
        continue;
      }
      return true;
    }
    return false;
  }

  std::size_t line_no() const noexcept { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

inline std::uint64_t parse_count(std::string_view token, std::size_t line) {
  if (token.empty()) {
    throw parse_error(line, "expected a non-negative integer");
  }
  std::uint64_t value = 0;
  for (char c : token) {
    if (c < '0' || c > '9') {
      throw parse_error(line, "expected a non-negative integer, got '" +
                                  std::string(token) + "'");
    }
    value = value * 10 + static_cast<std::uint64_t>(c - '0');
    if (value > (std::uint64_t{1} << 40)) {
      throw parse_error(line, "integer too large");
    }
  }
  return value;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) {
      ++i;
    }
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') {
      ++i;
    }
    if (i > start) {
      out.push_back(s.substr(start, i - start));
    }
  }
  return out;
}

/// Parses "u v" with u < v < n.
inline VertexPair parse_pair_line(const std::string& line, std::size_t line_no,
                                  std::size_t n) {
  const auto tokens = split_ws(line);
  if (tokens.size() != 2) {
    throw parse_error(line_no, "expected 'u v', got '" + line + "'");
  }
  const auto u = parse_count(tokens[0], line_no);
  const auto v = parse_count(tokens[1], line_no);
  if (u >= v) {
    throw parse_error(line_no, "pair must satisfy u < v");
  }
  if (v >= n) {
    throw parse_error(line_no, "vertex " + std::to_string(v) + " out of range");
  }
  return {static_cast<Vertex>(u), static_cast<Vertex>(v)};
}

inline std::size_t parse_header(const std::string& line, std::size_t line_no,
                                std::string_view key) {
  const auto tokens = split_ws(line);
  if (tokens.size() != 2 || tokens[0] != key) {
    throw parse_error(line_no, "expected '" + std::string(key) + " <count>'");
  }
  return static_cast<std::size_t>(parse_count(tokens[1], line_no));
}

}  // namespace detail

inline std::string write_graph(const Graph& g) {
  std::string out = "n " + std::to_string(g.order()) + "\n";
  for (auto e : g.edges()) {
    out += std::to_string(e.u) + " " + std::to_string(e.v) + "\n";
  }
  return out;
}

inline Graph read_graph(std::istream& in) {
  detail::LineReader reader(in);
  std::string line;
  if (!reader.next(line)) {
    throw parse_error(reader.line_no(), "missing 'n <count>' header");
  }
  Graph g(detail::parse_header(line, reader.line_no(), "n"));
  while (reader.next(line)) {
    const auto p = detail::parse_pair_line(line, reader.line_no(), g.order());
    if (g.bit(pair_index(g.order(), p.u, p.v))) {
      throw parse_error(reader.line_no(), "duplicate edge");
    }
    g.set_edge(p.u, p.v, true);
  }
  return g;
}

inline Graph read_graph(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_graph(in);
}

}  // namespace gsynth

template <>
struct std::hash<gsynth::Graph> : gsynth::GraphHash {};
