#include "dynmatch/graph.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "dynmatch/errors.hpp"
#include "oracles.hpp"

using namespace dynmatch;

TEST(BipartiteGraph, RejectsOutOfRangeAndDuplicateEdges) {
  EXPECT_THROW(BipartiteGraph(2, 2, {{2, 0}}), InvalidParameter);
  EXPECT_THROW(BipartiteGraph(2, 2, {{0, 2}}), InvalidParameter);
  EXPECT_THROW(BipartiteGraph(2, 2, {{0, 1}, {0, 1}}), InvalidParameter);
  auto g = BipartiteGraph::from_edge_multiset(2, 2, {{0, 1}, {0, 1}, {1, 0}});
  EXPECT_EQ(g.edge_count(), 2u);
}

TEST(BipartiteGraph, DegreesAndNeighbors) {
  BipartiteGraph g(3, 4, {{1, 3}, {0, 0}, {1, 0}, {1, 2}});
  EXPECT_EQ(g.degree(0), 1u);
  EXPECT_EQ(g.degree(1), 3u);
  EXPECT_EQ(g.degree(2), 0u);
  EXPECT_EQ(g.neighbors(1), (std::vector<Vertex>{0, 2, 3}));
  EXPECT_EQ(g.max_left_degree(), 3u);
  EXPECT_TRUE(g.has_edge({1, 2}));
  EXPECT_FALSE(g.has_edge({2, 2}));
}

TEST(MaximumMatching, EmptyGraph) {
  EXPECT_EQ(maximum_matching(BipartiteGraph(4, 4)).size(), 0u);
}

TEST(MaximumMatching, DisjointPerfectMatching) {
  BipartiteGraph g(3, 3, {{0, 0}, {1, 1}, {2, 2}});
  Matching m = maximum_matching(g);
  EXPECT_EQ(m.size(), 3u);
  EXPECT_TRUE(is_valid_matching(g, m));
}

TEST(MaximumMatching, NeedsAugmentingPath) {
  // greedy in lexicographic order takes (0,0) and blocks a1's only edge
  BipartiteGraph g(3, 3, {{0, 0}, {0, 1}, {1, 0}, {2, 1}, {2, 2}});
  EXPECT_EQ(maximum_matching(g).size(), 3u);
}

TEST(MaximumMatching, MatchesBruteForceOnRandomSixBySix) {
  for (std::uint32_t seed = 0; seed < 50; ++seed) {
    BipartiteGraph g = oracle::random_graph_with_edges(6, 6, 12, seed);
    std::vector<Edge> edges(g.edges().begin(), g.edges().end());
    Matching m = maximum_matching(g);
    ASSERT_TRUE(is_valid_matching(g, m));
    ASSERT_EQ(m.size(), oracle::brute_force_max_matching(edges)) << "seed " << seed;
  }
}

TEST(MaximumMatching, HallSaturatesSmallSide) {
  // every A-vertex has degree >= |A| and |A| <= |B|
  for (std::uint32_t seed = 0; seed < 20; ++seed) {
    std::mt19937 rng(seed);
    const std::size_t left = 5, right = 9;
    std::vector<Edge> edges;
    for (Vertex a = 0; a < left; ++a) {
      std::vector<Vertex> bs(right);
      std::iota(bs.begin(), bs.end(), 0u);
      std::shuffle(bs.begin(), bs.end(), rng);
      for (std::size_t i = 0; i < left; ++i) edges.push_back({a, bs[i]});
    }
    EXPECT_EQ(maximum_matching(BipartiteGraph(left, right, edges)).size(), left);
  }
}

TEST(IsValidMatching, Examples) {
  BipartiteGraph single(2, 2, {{0, 0}});
  EXPECT_TRUE(is_valid_matching(single, Matching{{{0, 0}}}));
  EXPECT_FALSE(is_valid_matching(single, Matching{{{0, 1}}}));
  BipartiteGraph star(1, 2, {{0, 0}, {0, 1}});
  EXPECT_FALSE(is_valid_matching(star, Matching{{{0, 0}, {0, 1}}}));
  BipartiteGraph co_star(2, 1, {{0, 0}, {1, 0}});
  EXPECT_FALSE(is_valid_matching(co_star, Matching{{{0, 0}, {1, 0}}}));
}

TEST(GreedyMatching, Examples) {
  EXPECT_EQ(greedy_matching(BipartiteGraph(3, 3)).size(), 0u);
  BipartiteGraph perfect(3, 3, {{0, 2}, {1, 0}, {2, 1}});
  EXPECT_EQ(greedy_matching(perfect).size(), 3u);
  // a0-b0, a1-b0, a1-b1: lexicographic greedy takes (0,0) then (1,1)
  BipartiteGraph path(2, 2, {{0, 0}, {1, 0}, {1, 1}});
  Matching m = greedy_matching(path);
  EXPECT_GE(m.size(), 1u);
  EXPECT_EQ(maximum_matching(path).size(), 2u);
  // a caller-supplied order can do worse
  std::vector<Edge> order{{1, 0}, {0, 0}, {1, 1}};
  EXPECT_EQ(greedy_matching(path, std::span<const Edge>(order)).size(), 1u);
}

TEST(GreedyMatching, IsMaximalAndHalfApproximate) {
  for (std::uint32_t seed = 0; seed < 200; ++seed) {
    BipartiteGraph g = oracle::random_graph_with_edges(8, 7, 5 + seed % 30, seed);
    Matching m = greedy_matching(g);
    ASSERT_TRUE(is_valid_matching(g, m));
    std::vector<bool> ul(8), ur(7);
    for (const Edge& e : m.pairs) ul[e.a] = ur[e.b] = true;
    for (const Edge& e : g.edges()) ASSERT_TRUE(ul[e.a] || ur[e.b]) << "not maximal";
    ASSERT_GE(2 * m.size(), maximum_matching(g).size());
  }
}

TEST(GraphFormat, RoundTrip) {
  BipartiteGraph g = oracle::random_graph_with_edges(5, 7, 11, 3);
  std::stringstream ss;
  write_graph(ss, g);
  EXPECT_EQ(read_graph(ss), g);
}

TEST(GraphFormat, ParseErrorsCarryLineNumbers) {
  std::istringstream bad("p bip 2 2\ne 0 0\ne 0 5\n");
  try {
    read_graph(bad);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  std::istringstream no_header("e 0 0\n");
  EXPECT_THROW(read_graph(no_header), ParseError);
}

TEST(GraphFormat, MatchingLines) {
  std::ostringstream out;
  write_matching(out, Matching{{{0, 1}, {2, 0}}});
  EXPECT_EQ(out.str(), "m 0 1\nm 2 0\n");
}
