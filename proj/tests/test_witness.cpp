#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace gsynth;
using testing_support::random_graph;

namespace {

const Graph kStar(4, {{0, 1}, {0, 2}, {0, 3}});
const Graph kTriangle013(4, {{0, 1}, {0, 3}, {1, 3}});

SynthesisInstance make(Graph s, Graph t, PairList flips = {}) {
  SynthesisInstance inst;
  inst.source = std::move(s);
  inst.target = std::move(t);
  inst.flips = std::move(flips);
  return inst;
}

// Model with every edge variable following `g` and the given selector on
// each transition.
Assignment constant_model(const StepLayout& L, const Graph& g, std::uint64_t y, unsigned z) {
  Assignment a(L.num_vars());
  for (std::size_t s = 0; s < L.states(); ++s) {
    for (std::size_t i = 0; i < L.pairs(); ++i) {
      a.set(L.edge_var(s, i), g.bit(i));
    }
  }
  for (std::size_t t = 0; t < L.transitions(); ++t) {
    for (std::size_t j = 0; j < L.selector_width(); ++j) {
      a.set(L.y_var(t, j), (y >> j) & 1U);
    }
    a.set(L.z_var(t, 0), z & 1U);
    a.set(L.z_var(t, 1), (z >> 1) & 1U);
  }
  return a;
}

}  // namespace

TEST(Decode, StarToCompleteModel) {
  const auto inst = make(kStar, Graph::complete(4));
  const auto enc = encode_bmc(inst, 2);
  const auto r = InProcessSolver{}.solve(enc.formula, {});
  ASSERT_EQ(r.status, SolveStatus::sat);
  const auto w = decode(r.model, enc.layout);
  ASSERT_EQ(w.states.size(), 2u);
  EXPECT_EQ(w.states[0], kStar);
  EXPECT_EQ(w.states[1], Graph::complete(4));
  ASSERT_EQ(w.ops.size(), 1u);
  EXPECT_EQ(w.ops[0], Operation::lc(0));
}

TEST(Decode, SingleState) {
  const StepLayout L(3, 0, 1);
  const auto w = decode(constant_model(L, Graph(3, {{0, 2}}), 0, 0), L);
  EXPECT_TRUE(w.ops.empty());
  ASSERT_EQ(w.states.size(), 1u);
  EXPECT_EQ(w.states[0], Graph(3, {{0, 2}}));
}

TEST(Decode, AllIdentity) {
  const StepLayout L(4, 0, 4);
  const auto w = decode(constant_model(L, kStar, 0, 3), L);
  ASSERT_EQ(w.ops.size(), 3u);
  for (auto op : w.ops) {
    EXPECT_EQ(op, Operation::id());
  }
  for (const auto& g : w.states) {
    EXPECT_EQ(g, kStar);
  }
  EXPECT_TRUE(strip_identities(w).ops.empty());
}

TEST(Decode, SelectorOutsideRangeThrows) {
  const StepLayout L(3, 0, 2);
  EXPECT_THROW(decode(constant_model(L, Graph(3), 3, 0), L),
               decode_error);  // LC 3 on 3 vertices
  EXPECT_THROW(decode(constant_model(L, Graph(3), 0, 2), L), decode_error);  // EF, |D| = 0
  EXPECT_THROW(decode(constant_model(L, Graph(3), 1, 3), L), decode_error);  // Id with y != 0
  const StepLayout LD(3, 2, 2);
  EXPECT_EQ(decode(constant_model(LD, Graph(3), 1, 2), LD).ops[0], Operation::ef(1));
  EXPECT_THROW(decode(constant_model(LD, Graph(3), 2, 2), LD), decode_error);
}

TEST(StripIdentities, Examples) {
  const auto g = kStar;
  const auto k4 = Graph::complete(4);
  Witness w{{Operation::lc(0), Operation::id(), Operation::id()}, {g, k4, k4, k4}};
  auto s = strip_identities(w);
  EXPECT_EQ(s.ops, (std::vector<Operation>{Operation::lc(0)}));
  EXPECT_EQ(s.states, (std::vector<Graph>{g, k4}));

  s = strip_identities(Witness{{Operation::id()}, {g, g}});
  EXPECT_TRUE(s.ops.empty());
  EXPECT_EQ(s.states, (std::vector<Graph>{g}));

  const auto a = delete_vertex_edges(k4, 2);
  const auto b = local_complement(a, 1);
  s = strip_identities(Witness{{Operation::vd(2), Operation::id(), Operation::lc(1)}, {k4, a, a, b}});
  EXPECT_EQ(s.ops, (std::vector<Operation>{Operation::vd(2), Operation::lc(1)}));
  EXPECT_EQ(s.states.back(), b);
}

TEST(StripIdentities, KeepsFinalStateOnRandomPaths) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 2 + rng() % 7;
    const PairList flips = random_flips(n, 1, rng());
    std::vector<Operation> ops;
    for (int k = 0; k < 8; ++k) {
      switch (rng() % 4) {
        case 0: ops.push_back(Operation::lc(static_cast<Vertex>(rng() % n))); break;
        case 1: ops.push_back(Operation::vd(static_cast<Vertex>(rng() % n))); break;
        case 2: ops.push_back(Operation::ef(0)); break;
        default: ops.push_back(Operation::id()); break;
      }
    }
    const auto w = replay(random_graph(n, 0.5, rng), ops, flips);
    const auto s = strip_identities(w);
    ASSERT_EQ(s.states.back(), w.states.back());
    ASSERT_EQ(s.states.size(), s.ops.size() + 1);
    for (auto op : s.ops) {
      ASSERT_NE(op.kind, OpKind::identity);
    }
    const auto inst = make(w.states.front(), w.states.back(), flips);
    ASSERT_TRUE(replay_verify(inst, s).ok);
  }
}

TEST(ReplayVerify, Examples) {
  const auto to_k4 = make(kStar, Graph::complete(4));
  EXPECT_TRUE(replay_verify(to_k4, replay(kStar, {Operation::lc(0)}, {})).ok);

  const auto bad = replay_verify(to_k4, replay(kStar, {Operation::lc(1)}, {}));
  EXPECT_FALSE(bad.ok);
  EXPECT_EQ(bad.step, 0u);

  const auto to_tri = make(Graph::complete(4), kTriangle013);
  EXPECT_TRUE(replay_verify(to_tri, replay(Graph::complete(4), {Operation::vd(2)}, {})).ok);
}

TEST(ReplayVerify, PinpointsFirstDivergence) {
  const auto inst = make(kStar, kTriangle013);
  Witness w = replay(kStar, {Operation::lc(0), Operation::vd(2)}, {});
  ASSERT_TRUE(replay_verify(inst, w).ok);
  w.states[1] = kStar;  // recorded state after step 0 is wrong
  auto r = replay_verify(inst, w);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.step, 0u);

  w = replay(kStar, {Operation::lc(0), Operation::vd(1)}, {});
  r = replay_verify(inst, w);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.step, 1u);

  w = replay(kStar, {}, {});
  r = replay_verify(inst, w);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.step, 0u);

  w = replay(kStar, {Operation::lc(0)}, {});
  w.states.pop_back();
  EXPECT_FALSE(replay_verify(inst, w).ok);

  w = replay(Graph::complete(4), {Operation::vd(2)}, {});
  EXPECT_FALSE(replay_verify(inst, w).ok);  // wrong source
}

TEST(ReplayVerify, InvalidFlipIndexFails) {
  const auto inst = make(Graph(3), Graph(3, {{0, 1}}), {{0, 1}});
  Witness w{{Operation::ef(3)}, {Graph(3), Graph(3, {{0, 1}})}};
  const auto r = replay_verify(inst, w);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.step, 0u);
}

TEST(EndToEnd, DecodedWitnessesReplay) {
  std::mt19937_64 rng(77);
  const InProcessSolver solver;
  int checked = 0;
  for (int i = 0; i < 150; ++i) {
    const std::size_t n = 2 + rng() % 5;
    auto inst = make(random_graph(n, 0.6, rng), Graph(n));
    if (rng() % 2) {
      inst.flips = random_flips(n, std::min<std::size_t>(2, pair_count(n)), rng());
    }
    inst.target = inst.source;
    for (int s = 0; s < 3; ++s) {
      inst.target = apply_operation(
          inst.target,
          rng() % 2 ? Operation::lc(static_cast<Vertex>(rng() % n))
                    : Operation::vd(static_cast<Vertex>(rng() % n)),
          inst.flips);
    }
    const auto enc = encode_bmc(inst, 5);
    const auto r = solver.solve(enc.formula, {});
    ASSERT_EQ(r.status, SolveStatus::sat);
    const auto raw = decode(r.model, enc.layout);
    ASSERT_TRUE(replay_verify(inst, raw).ok);
    ASSERT_TRUE(replay_verify(inst, strip_identities(raw)).ok);
    ++checked;
  }
  EXPECT_EQ(checked, 150);
}

TEST(WitnessText, RoundTrip) {
  const auto inst = make(Graph(5), Graph(5), {{0, 3}, {2, 4}});
  const std::vector<Operation> ops{Operation::lc(4), Operation::vd(0), Operation::ef(1),
                                   Operation::ef(0)};
  const auto text = write_witness(ops, inst.flips);
  EXPECT_EQ(text, "LC 4\nVD 0\nEF 2 4\nEF 0 3\n");
  EXPECT_EQ(read_witness(text, inst), ops);
  EXPECT_EQ(read_witness("# c\n\nId\nEF 4 2\n", inst),
            (std::vector<Operation>{Operation::id(), Operation::ef(1)}));
}

TEST(WitnessText, RejectsMalformed) {
  const auto inst = make(Graph(4), Graph(4), {{0, 1}});
  EXPECT_THROW(read_witness("LC 4\n", inst), parse_error);
  EXPECT_THROW(read_witness("VD\n", inst), parse_error);
  EXPECT_THROW(read_witness("EF 1 2\n", inst), parse_error);
  EXPECT_THROW(read_witness("EF 1 1\n", inst), parse_error);
  EXPECT_THROW(read_witness("XX 1\n", inst), parse_error);
  EXPECT_THROW(read_witness("LC -1\n", inst), parse_error);
}
