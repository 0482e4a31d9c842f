#pragma once

/// \file instance.hpp
/// A synthesis instance (source, target, flip set) and its text file format:
///
///   n <count>
///   source <edge count>
///   u v ...
///   target <edge count>
///   u v ...
///   flips <pair count>
///   u v ...
///   meta <key> <value>      (optional, any number)
///
/// Blank lines and lines starting with '#' are ignored on input.

#include <gsynth/graph.hpp>

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

namespace gsynth {

struct SynthesisInstance {
  Graph source;
  Graph target;
  PairList flips;
  std::map<std::string, std::string> meta;

  std::size_t order() const noexcept { return source.order(); }

  /// Throws std::domain_error when the instance is inconsistent.
  void validate() const {
    if (source.order() != target.order()) {
      throw std::domain_error("source has " + std::to_string(source.order()) +
                              " vertices but target has " + std::to_string(target.order()));
    }
    std::set<VertexPair> distinct;
    for (auto p : flips) {
      if (p.u >= p.v || p.v >= source.order()) {
        throw std::domain_error("flip pair (" + std::to_string(p.u) + "," +
                                std::to_string(p.v) + ") is not a normalized in-range pair");
      }
      if (!distinct.insert(p).second) {
        throw std::domain_error("flip pair (" + std::to_string(p.u) + "," +
                                std::to_string(p.v) + ") listed twice");
      }
    }
  }
};

inline std::string write_instance(const SynthesisInstance& inst) {
  std::string out = "n " + std::to_string(inst.order()) + "\n";
  auto section = [&out](std::string_view name, const std::vector<VertexPair>& pairs) {
    out += std::string(name) + " " + std::to_string(pairs.size()) + "\n";
    for (auto p : pairs) {
      out += std::to_string(p.u) + " " + std::to_string(p.v) + "\n";
    }
  };
  section("source", inst.source.edges());
  section("target", inst.target.edges());
  section("flips", inst.flips);
  for (const auto& [key, value] : inst.meta) {
    out += "meta " + key + " " + value + "\n";
  }
  return out;
}

inline SynthesisInstance read_instance(std::istream& in) {
  detail::LineReader reader(in);
  std::string line;
  auto expect_line = [&](std::string_view what) {
    if (!reader.next(line)) {
      throw parse_error(reader.line_no(), "unexpected end of input, expected " + std::string(what));
    }
  };

  expect_line("'n <count>'");
  const auto n = detail::parse_header(line, reader.line_no(), "n");

  auto read_pairs = [&](std::string_view key) {
    expect_line("'" + std::string(key) + " <count>'");
    const auto count = detail::parse_header(line, reader.line_no(), key);
    std::vector<VertexPair> pairs;
    std::set<VertexPair> distinct;
    for (std::size_t i = 0; i < count; ++i) {
      expect_line("a 'u v' pair");
      const auto p = detail::parse_pair_line(line, reader.line_no(), n);
      if (!distinct.insert(p).second) {
        throw parse_error(reader.line_no(), "duplicate pair in '" + std::string(key) + "'");
      }
      pairs.push_back(p);
    }
    return pairs;
  };

  SynthesisInstance inst;
  inst.source = Graph(n, read_pairs("source"));
  inst.target = Graph(n, read_pairs("target"));
  inst.flips = read_pairs("flips");
  while (reader.next(line)) {
    const auto tokens = detail::split_ws(line);
    if (tokens.size() < 3 || tokens[0] != "meta") {
      throw parse_error(reader.line_no(), "expected 'meta <key> <value>'");
    }
    // The value runs to the end of the line and may contain spaces.
    inst.meta[std::string(tokens[1])] =
        line.substr(static_cast<std::size_t>(tokens[2].data() - line.data()));
  }
  return inst;
}

inline SynthesisInstance read_instance(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_instance(in);
}

inline SynthesisInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw input_error("cannot open instance file '" + path + "'");
  }
  return read_instance(in);
}

}  // namespace gsynth
