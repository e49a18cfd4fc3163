#include "dynmatch/turnstile_stream.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "dynmatch/errors.hpp"
#include "oracles.hpp"

using namespace dynmatch;

namespace {

UpdateStream make_stream(std::size_t l, std::size_t r, std::vector<EdgeUpdate> updates,
                         std::int64_t cap = 1) {
  UpdateStream s;
  s.left_size = l;
  s.right_size = r;
  s.multiplicity_cap = cap;
  s.updates = std::move(updates);
  return s;
}

}  // namespace

TEST(Materialize, Examples) {
  EXPECT_EQ(materialize(make_stream(2, 2, {{0, 0, +1}})), BipartiteGraph(2, 2, {{0, 0}}));
  EXPECT_TRUE(materialize(make_stream(2, 2, {{0, 0, +1}, {0, 0, -1}})).empty());
  EXPECT_EQ(materialize(make_stream(2, 2, {{0, 0, +1}, {1, 1, +1}, {0, 0, -1}, {0, 0, +1}})),
            BipartiteGraph(2, 2, {{0, 0}, {1, 1}}));
}

TEST(Materialize, DeleteBeforeInsertIsFine) {
  EXPECT_EQ(materialize(make_stream(1, 1, {{0, 0, -1}, {0, 0, +1}, {0, 0, +1}})),
            BipartiteGraph(1, 1, {{0, 0}}));
}

TEST(Materialize, Errors) {
  EXPECT_THROW(materialize(make_stream(2, 2, {{0, 0, -1}})), NegativeFinalMultiplicity);
  EXPECT_THROW(materialize(make_stream(2, 2, {{0, 0, +1}, {0, 0, +1}})), CapExceeded);
  EXPECT_NO_THROW(materialize(make_stream(2, 2, {{0, 0, +1}, {0, 0, +1}}, 2)));
  EXPECT_THROW(materialize(make_stream(2, 2, {{2, 0, +1}})), IndexOutOfRange);
}

TEST(Materialize, MultiEdgesReported) {
  auto s = make_stream(2, 2, {{0, 1, +1}, {0, 1, +1}, {1, 1, +1}}, 3);
  EXPECT_EQ(multi_edges(s), (std::vector<Edge>{{0, 1}}));
  EXPECT_EQ(materialize(s).edge_count(), 2u);
}

TEST(Materialize, OrderInsensitive) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<EdgeUpdate> ups;
    for (int i = 0; i < 40; ++i) {
      Vertex a = rng() % 4, b = rng() % 4;
      ups.push_back({a, b, +1});
      if (rng() % 2) ups.push_back({a, b, -1});
    }
    auto s = make_stream(4, 4, ups, 40);
    auto shuffled = ups;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(materialize(s), materialize(make_stream(4, 4, shuffled, 40)));
  }
}

TEST(StreamFromGraph, NoChurnIsPureInsertion) {
  BipartiteGraph g = oracle::random_graph_with_edges(6, 5, 13, 1);
  UpdateStream s = stream_from_graph(g, 0.0, 42);
  EXPECT_EQ(s.updates.size(), g.edge_count());
  for (const EdgeUpdate& u : s.updates) EXPECT_EQ(u.delta, +1);
  EXPECT_EQ(materialize(s), g);
}

TEST(StreamFromGraph, FullChurnDoublesWithDecoys) {
  BipartiteGraph g = oracle::random_graph_with_edges(6, 5, 13, 2);
  UpdateStream s = stream_from_graph(g, 1.0, 42);
  EXPECT_EQ(s.updates.size(), g.edge_count() + 2 * g.edge_count());
  EXPECT_EQ(materialize(s), g);
  // every decoy delete comes after a matching insert: prefix multiplicities stay >= 0
  std::map<std::pair<Vertex, Vertex>, int> running;
  for (const EdgeUpdate& u : s.updates) ASSERT_GE((running[std::make_pair(u.a, u.b)] += u.delta), 0);
}

TEST(StreamFromGraph, EmptyGraphGivesEmptyStream) {
  UpdateStream s = stream_from_graph(BipartiteGraph(3, 3), 0.7, 5);
  EXPECT_TRUE(s.updates.empty());
  EXPECT_TRUE(materialize(s).empty());
}

TEST(StreamFromGraph, DecoyCountIsCeilChurnTimesEdges) {
  BipartiteGraph g = oracle::random_graph_with_edges(10, 10, 7, 3);
  UpdateStream s = stream_from_graph(g, 0.5, 1);
  EXPECT_EQ(s.updates.size(), 7u + 2u * 4u);
}

TEST(StreamFromGraph, DeterministicInSeed) {
  BipartiteGraph g = oracle::random_graph_with_edges(8, 8, 20, 4);
  EXPECT_EQ(stream_from_graph(g, 0.5, 9), stream_from_graph(g, 0.5, 9));
  EXPECT_NE(stream_from_graph(g, 0.5, 9), stream_from_graph(g, 0.5, 10));
  EXPECT_THROW(stream_from_graph(g, 1.5, 9), InvalidParameter);
}

TEST(StreamFromGraph, MaterializeIsIdentityProperty) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t l = 1 + rng() % 9, r = 1 + rng() % 9;
    BipartiteGraph g = oracle::random_graph_with_edges(l, r, rng() % (l * r + 1), rng());
    const double churn = (rng() % 101) / 100.0;
    UpdateStream s = stream_from_graph(g, churn, rng());
    ASSERT_EQ(materialize(s), g);
    for (const auto& [edge, sum] : oracle::coordinate_sums(s)) {
      ASSERT_TRUE(sum == 0 || sum == 1);
    }
  }
}

TEST(StreamFormat, RoundTripIsBitExact) {
  UpdateStream s = make_stream(3, 4, {{0, 0, +1}, {2, 3, -1}, {1, 2, +1}}, 2);
  std::stringstream ss;
  write_stream(ss, s);
  const std::string text = ss.str();
  EXPECT_EQ(text, "p ts 3 4 2\nu 0 0 +1\nu 2 3 -1\nu 1 2 +1\n");
  UpdateStream back = read_stream(ss);
  EXPECT_EQ(back, s);
  std::ostringstream again;
  write_stream(again, back);
  EXPECT_EQ(again.str(), text);
}

TEST(StreamFormat, RejectsBadDelta) {
  std::istringstream in("p ts 2 2 1\nu 0 0 +2\n");
  try {
    read_stream(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(StreamFormat, HeaderOnlyIsEmptyStream) {
  std::istringstream in("p ts 5 6 1\n");
  UpdateStream s = read_stream(in);
  EXPECT_EQ(s.left_size, 5u);
  EXPECT_EQ(s.right_size, 6u);
  EXPECT_TRUE(s.updates.empty());
}

TEST(StreamFormat, OtherParseErrors) {
  for (const char* text : {"u 0 0 +1\n", "p ts 2 2 0\n", "p ts 2 2 1\nu 0 2 +1\n", "p ts 2 2 1\nx\n",
                           "p ts 2 2 1\nu 0 0 +1 9\n", ""}) {
    std::istringstream in(text);
    EXPECT_THROW(read_stream(in), ParseError) << text;
  }
}
