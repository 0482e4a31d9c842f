#pragma once

/// \file instance_gen.hpp
/// Seeded benchmark generators: Erdos-Renyi sources, the 14-node network
/// with distance-decaying link probability, GHZ (star) targets, random
/// flip sets, and a few small built-in demo instances.
///
/// Randomness: std::mt19937_64 seeded directly with the 64-bit seed. Its
/// output sequence is fixed by the C++ standard. Bernoulli draws compare
/// (x >> 11) * 2^-53 against p, and bounded integers use rejection
/// sampling, so results are identical on every platform (the standard
/// distributions are not).

#include <gsynth/graph.hpp>
#include <gsynth/instance.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace gsynth {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 bits of precision.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit() < p; }

  /// Uniform in [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const auto r = engine_();
      if (r >= threshold) {
        return r % bound;
      }
    }
  }

 private:
  std::mt19937_64 engine_;
};

namespace detail {

inline void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("probability must lie in [0, 1]");
  }
}

inline std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace detail

/// Each of the n(n-1)/2 pairs, in lexicographic order, is an edge with
/// probability p.
inline Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  detail::check_probability(p);
  Rng rng(seed);
  Graph g(n);
  for (std::size_t i = 0; i < pair_count(n); ++i) {
    g.set_bit(i, rng.bernoulli(p));
  }
  return g;
}

struct NetworkTopology {
  std::vector<std::string> names;
  std::vector<VertexPair> links;
  std::vector<Vertex> end_nodes;

  std::size_t size() const noexcept { return names.size(); }
};

/// Hop counts between all node pairs; unreachable pairs hold SIZE_MAX.
inline std::vector<std::vector<std::size_t>> hop_distances(const NetworkTopology& topo) {
  const auto n = topo.size();
  constexpr auto kInf = std::numeric_limits<std::size_t>::max();
  std::vector<std::vector<Vertex>> adj(n);
  for (auto l : topo.links) {
    adj[l.u].push_back(l.v);
    adj[l.v].push_back(l.u);
  }
  std::vector<std::vector<std::size_t>> dist(n, std::vector<std::size_t>(n, kInf));
  for (Vertex s = 0; s < n; ++s) {
    std::deque<Vertex> queue{s};
    dist[s][s] = 0;
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      for (auto v : adj[u]) {
        if (dist[s][v] == kInf) {
          dist[s][v] = dist[s][u] + 1;
          queue.push_back(v);
        }
      }
    }
  }
  return dist;
}

/// Pair (u, v) is an edge with probability p^(hops + 1); pairs without a
/// connecting path never are. One draw is consumed per pair either way.
inline Graph network_graph(const NetworkTopology& topo, double p, std::uint64_t seed) {
  detail::check_probability(p);
  const auto dist = hop_distances(topo);
  Rng rng(seed);
  Graph g(topo.size());
  std::size_t index = 0;
  for (Vertex u = 0; u < topo.size(); ++u) {
    for (Vertex v = u + 1; v < topo.size(); ++v, ++index) {
      const auto draw = rng.unit();
      if (dist[u][v] == std::numeric_limits<std::size_t>::max()) {
        continue;
      }
      const double prob = std::pow(p, static_cast<double>(dist[u][v] + 1));
      g.set_bit(index, draw < prob);
    }
  }
  return g;
}

/// The 14-node network: four end nodes (squares) and ten repeaters,
/// 16 physical links. Node names follow the geographic labels of the
/// original layout.
inline NetworkTopology builtin_network_14() {
  NetworkTopology t;
  t.names = {"delft1",     "adam2",      "almere",     "zwolle2", "zwolle1",
             "meppel",     "dwingeloo",  "groningen1", "enschede2", "arnhem",
             "venlo",      "maastricht", "eindhoven1", "nieuwegein"};
  auto id = [&t](std::string_view name) {
    return static_cast<Vertex>(std::find(t.names.begin(), t.names.end(), name) - t.names.begin());
  };
  const std::pair<std::string_view, std::string_view> links[] = {
      {"delft1", "adam2"},       {"delft1", "almere"},      {"delft1", "nieuwegein"},
      {"adam2", "almere"},       {"almere", "zwolle2"},     {"zwolle2", "zwolle1"},
      {"zwolle1", "meppel"},     {"meppel", "dwingeloo"},   {"dwingeloo", "groningen1"},
      {"zwolle1", "enschede2"},  {"zwolle1", "arnhem"},     {"arnhem", "venlo"},
      {"venlo", "maastricht"},   {"maastricht", "eindhoven1"}, {"eindhoven1", "nieuwegein"},
      {"nieuwegein", "almere"},
  };
  for (auto [a, b] : links) {
    t.links.push_back(make_pair_checked(id(a), id(b)));
  }
  std::sort(t.links.begin(), t.links.end());
  t.end_nodes = {id("delft1"), id("groningen1"), id("enschede2"), id("maastricht")};
  std::sort(t.end_nodes.begin(), t.end_nodes.end());
  return t;
}

/// Star over the parties centred on the smallest one; other vertices isolated.
inline Graph ghz_target(std::size_t n, std::vector<Vertex> parties) {
  std::sort(parties.begin(), parties.end());
  parties.erase(std::unique(parties.begin(), parties.end()), parties.end());
  if (parties.size() < 2) {
    throw std::domain_error("a GHZ target needs at least two parties");
  }
  const auto center = parties.front();
  parties.erase(parties.begin());
  return star_graph(n, center, parties);
}

/// `size` distinct normalized pairs, sorted.
inline PairList random_flips(std::size_t n, std::size_t size, std::uint64_t seed) {
  const auto total = pair_count(n);
  if (size > total) {
    throw std::domain_error("cannot draw " + std::to_string(size) + " distinct pairs out of " +
                            std::to_string(total));
  }
  Rng rng(seed);
  std::vector<std::size_t> indices(total);
  for (std::size_t i = 0; i < total; ++i) {
    indices[i] = i;
  }
  for (std::size_t i = 0; i < size; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(total - i));
    std::swap(indices[i], indices[j]);
  }
  indices.resize(size);
  std::sort(indices.begin(), indices.end());
  PairList out;
  for (auto i : indices) {
    out.push_back(pair_at(n, i));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Benchmark families

/// Seed offset separating the flip-set stream from the graph stream.
inline constexpr std::uint64_t flip_seed_offset = 0x5eed'f11bULL;

/// ER(n, p) source, GHZ target over vertices {0..parties-1}.
inline SynthesisInstance er_ghz_instance(std::size_t n, double p, std::uint64_t seed,
                                         std::size_t flip_count = 0, std::size_t parties = 4) {
  SynthesisInstance inst;
  inst.source = erdos_renyi(n, p, seed);
  std::vector<Vertex> party_set;
  for (Vertex v = 0; v < std::min(parties, n); ++v) {
    party_set.push_back(v);
  }
  inst.target = ghz_target(n, party_set);
  inst.flips = random_flips(n, flip_count, seed ^ flip_seed_offset);
  inst.meta = {{"family", "er"},
               {"p", detail::format_double(p)},
               {"seed", std::to_string(seed)},
               {"parties", std::to_string(party_set.size())}};
  return inst;
}

/// 14-node network source, GHZ target over the four end nodes.
inline SynthesisInstance network_ghz_instance(double p, std::uint64_t seed,
                                              std::size_t flip_count = 0) {
  const auto topo = builtin_network_14();
  SynthesisInstance inst;
  inst.source = network_graph(topo, p, seed);
  inst.target = ghz_target(topo.size(), topo.end_nodes);
  inst.flips = random_flips(topo.size(), flip_count, seed ^ flip_seed_offset);
  inst.meta = {{"family", "network14"}, {"p", detail::format_double(p)},
               {"seed", std::to_string(seed)}};
  return inst;
}

// ---------------------------------------------------------------------------
// Demo instances

inline std::vector<std::string> demo_names() {
  return {"star-to-complete", "complete-to-triangle", "star-to-triangle", "secret-sharing"};
}

/// Small worked examples:
///   star-to-complete      star{01,02,03} -> K4 (one LC on the centre)
///   complete-to-triangle  K4 -> {01,03,13} (one VD on vertex 2)
///   star-to-triangle      the two steps chained
///   secret-sharing        6-node network state to a 4-party GHZ state.
///                         Labels: A=0 B=1 C=2 D=3; the unlabeled node
///                         linking A and B is 4, the one linking A and D is 5.
inline SynthesisInstance demo_instance(std::string_view name) {
  SynthesisInstance inst;
  const Graph star(4, {{0, 1}, {0, 2}, {0, 3}});
  const Graph tri(4, {{0, 1}, {0, 3}, {1, 3}});
  if (name == "star-to-complete") {
    inst.source = star;
    inst.target = Graph::complete(4);
  } else if (name == "complete-to-triangle") {
    inst.source = Graph::complete(4);
    inst.target = tri;
  } else if (name == "star-to-triangle") {
    inst.source = star;
    inst.target = tri;
  } else if (name == "secret-sharing") {
    inst.source = Graph(6, {{0, 4}, {1, 4}, {0, 2}, {0, 5}, {3, 5}});
    inst.target = ghz_target(6, {0, 1, 2, 3});
  } else {
    throw std::domain_error("unknown demo instance '" + std::string(name) + "'");
  }
  inst.meta = {{"family", "demo"}, {"name", std::string(name)}};
  return inst;
}

}  // namespace gsynth
