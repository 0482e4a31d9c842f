#pragma once

// Shared helpers for the test binaries: a dense adjacency-matrix model of
// the graph operations, random graph sources and small formula utilities.

#include <gsynth/gsynth.hpp>

#include <cstdint>
#include <random>
#include <set>
#include <vector>

namespace testing_support {

using gsynth::Graph;
using gsynth::Vertex;

// Adjacency matrix with no shared code path with the bit-packed Graph.
struct Dense {
  std::size_t n = 0;
  std::vector<std::vector<bool>> adj;

  explicit Dense(std::size_t order) : n(order), adj(order, std::vector<bool>(order, false)) {}

  static Dense from(const Graph& g) {
    Dense d(g.order());
    for (auto e : g.edges()) {
      d.adj[e.u][e.v] = d.adj[e.v][e.u] = true;
    }
    return d;
  }

  Graph to_graph() const {
    Graph g(n);
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = u + 1; v < n; ++v) {
        if (adj[u][v]) {
          g.set_edge(u, v, true);
        }
      }
    }
    return g;
  }

  Dense lc(Vertex k) const {
    Dense out = *this;
    for (Vertex a = 0; a < n; ++a) {
      for (Vertex b = 0; b < n; ++b) {
        if (a != b && a != k && b != k && adj[k][a] && adj[k][b]) {
          out.adj[a][b] = !adj[a][b];
        }
      }
    }
    return out;
  }

  Dense vd(Vertex k) const {
    Dense out = *this;
    for (Vertex a = 0; a < n; ++a) {
      out.adj[a][k] = out.adj[k][a] = false;
    }
    return out;
  }

  Dense flip(Vertex a, Vertex b) const {
    Dense out = *this;
    out.adj[a][b] = out.adj[b][a] = !adj[a][b];
    return out;
  }
};

inline Graph graph_from_mask(std::size_t n, std::uint64_t mask) {
  Graph g(n);
  for (std::size_t i = 0; i < gsynth::pair_count(n); ++i) {
    g.set_bit(i, (mask >> i) & 1U);
  }
  return g;
}

inline Graph random_graph(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  Graph g(n);
  for (std::size_t i = 0; i < gsynth::pair_count(n); ++i) {
    g.set_bit(i, coin(rng));
  }
  return g;
}

inline std::set<std::pair<Vertex, Vertex>> edge_set(const Graph& g) {
  std::set<std::pair<Vertex, Vertex>> s;
  for (auto e : g.edges()) {
    s.insert({e.u, e.v});
  }
  return s;
}

}  // namespace testing_support
