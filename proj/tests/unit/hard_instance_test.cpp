#include "dynmatch/hard_instance.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "dynmatch/errors.hpp"
#include "oracles.hpp"

using namespace dynmatch;

namespace {

HardParams params(std::size_t P, std::size_t Q, std::size_t k) {
  HardParams p;
  p.parties = P;
  p.q = Q;
  p.group_size = k;
  return p;
}

std::vector<Edge> edge_vector(const BipartiteGraph& g) { return {g.edges().begin(), g.edges().end()}; }

// All graphs the local view can produce, enumerated from the group pairing
// and shift rule directly.
std::set<std::vector<Edge>> enumerate_local_support(const HardParams& hp) {
  const std::size_t k = hp.group_size, groups = hp.groups(), w = hp.q + 1;
  std::set<std::vector<Edge>> out;
  std::vector<std::size_t> all(groups);
  std::iota(all.begin(), all.end(), 0);
  // subsets of A groups
  for (std::uint32_t mask = 0; mask < (1u << groups); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != w) continue;
    std::vector<std::size_t> ga;
    for (std::size_t g = 0; g < groups; ++g)
      if (mask >> g & 1) ga.push_back(g);
    // ordered selections of B groups
    std::vector<std::size_t> perm = all;
    std::set<std::vector<std::size_t>> seen_b;
    do {
      std::vector<std::size_t> gb(perm.begin(), perm.begin() + static_cast<long>(w));
      if (!seen_b.insert(gb).second) continue;
      // every block independently picks k/2 of the k shifted edges
      const std::size_t blocks = w * w;
      std::vector<std::vector<std::uint32_t>> choices;
      for (std::uint32_t m = 0; m < (1u << k); ++m)
        if (static_cast<std::size_t>(std::popcount(m)) == k / 2) choices.push_back({m});
      std::vector<std::size_t> pick(blocks, 0);
      while (true) {
        std::vector<Edge> edges;
        for (std::size_t r = 0; r < w; ++r) {
          for (std::size_t s = 0; s < w; ++s) {
            const std::uint32_t m = choices[pick[r * w + s]][0];
            const std::size_t shift = (s + k - r) % k;
            for (std::size_t t = 0; t < k; ++t) {
              if (!(m >> t & 1)) continue;
              edges.push_back({static_cast<Vertex>(ga[r] * k + t),
                               static_cast<Vertex>(gb[s] * k + (t + shift) % k)});
            }
          }
        }
        std::sort(edges.begin(), edges.end());
        out.insert(edges);
        std::size_t pos = 0;
        while (pos < blocks && ++pick[pos] == choices.size()) pick[pos++] = 0;
        if (pos == blocks) break;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

}  // namespace

TEST(HardParams, Validation) {
  EXPECT_NO_THROW(params(2, 1, 4).validate());
  EXPECT_THROW(params(1, 1, 2).validate(), InvalidParameter);
  EXPECT_THROW(params(2, 0, 2).validate(), InvalidParameter);
  EXPECT_THROW(params(2, 1, 3).validate(), InvalidParameter);
  EXPECT_THROW(params(4, 1, 2).validate(), InvalidParameter);  // k < P
  EXPECT_TRUE(params(4, 1, 4).warnings().empty());
  EXPECT_FALSE(params(4, 3, 4).warnings().empty());
  EXPECT_EQ(params(2, 1, 4).opt_lower_bound(), 6u);
  EXPECT_EQ(params(2, 1, 4).side_size(), 12u);
}

TEST(BuildGlobal, SmallExample) {
  auto inst = build_global(params(2, 1, 4), 1);
  ASSERT_EQ(inst.party_graphs.size(), 2u);
  for (const auto& g : inst.party_graphs) EXPECT_EQ(g.edge_count(), 8u);
  auto u = inst.union_graph();
  EXPECT_GE(maximum_matching(u).pairs.size(), 6u);
  EXPECT_EQ(oracle::brute_force_max_matching(edge_vector(u)), maximum_matching(u).pairs.size());
}

TEST(BuildGlobal, DeterministicInSeed) {
  auto x = build_global(params(4, 2, 8), 5), y = build_global(params(4, 2, 8), 5);
  EXPECT_EQ(x.party_graphs, y.party_graphs);
  EXPECT_EQ(x.perm_a, y.perm_a);
}

TEST(BuildGlobal, StructuralInvariants) {
  for (auto hp : {params(2, 1, 4), params(3, 1, 4), params(4, 2, 8), params(8, 2, 16), params(5, 2, 6)}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto inst = build_global(hp, seed);
      const std::size_t k = hp.group_size;
      std::set<Edge> seen;
      for (std::size_t p = 0; p < hp.parties; ++p) {
        const auto& g = inst.party_graphs[p];
        for (const Edge& e : g.edges()) ASSERT_TRUE(seen.insert(e).second) << "edge shared by parties";
        auto st = analyze_party_graph(g, hp);
        EXPECT_TRUE(st.is_party_shaped(hp));
        EXPECT_EQ(st.blocks.size(), hp.matchings_per_party());

        const auto& m = inst.hidden[p].pairs;
        EXPECT_EQ(m.size(), k / 2);
        EXPECT_TRUE(is_valid_matching(g, inst.hidden[p]));
        // M_p touches groups no other party uses
        for (const Edge& e : m) {
          for (std::size_t q = 0; q < hp.parties; ++q) {
            if (q == p) continue;
            for (const Edge& f : inst.party_graphs[q].edges()) {
              ASSERT_NE(f.a / k, e.a / k);
              ASSERT_NE(f.b / k, e.b / k);
            }
          }
        }
      }
      auto u = inst.union_graph();
      EXPECT_GE(maximum_matching(u).pairs.size(), hp.opt_lower_bound());
    }
  }
}

TEST(BuildGlobal, SharedBlocksUseDistinctShifts) {
  // on each shared group pair, parties occupy pairwise different shifts,
  // i.e. pieces of edge-disjoint perfect matchings of a P-regular graph
  auto hp = params(4, 2, 8);
  auto inst = build_global(hp, 9);
  const std::size_t k = hp.group_size;
  std::map<std::pair<std::size_t, std::size_t>, std::map<std::size_t, std::set<std::size_t>>> shifts;
  for (std::size_t p = 0; p < hp.parties; ++p) {
    for (const Edge& e : inst.party_graphs[p].edges()) {
      shifts[{e.a / k, e.b / k}][p].insert((e.b % k + k - e.a % k) % k);
    }
  }
  std::size_t shared_blocks = 0;
  for (const auto& [block, by_party] : shifts) {
    std::set<std::size_t> used;
    for (const auto& [p, s] : by_party) {
      ASSERT_EQ(s.size(), 1u);
      EXPECT_TRUE(used.insert(*s.begin()).second);
    }
    if (by_party.size() == hp.parties) ++shared_blocks;
  }
  EXPECT_EQ(shared_blocks, hp.q * hp.q);
}

TEST(BuildLocal, Structure) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto hp = params(4, 2, 8);
    auto lp = build_local(hp, seed);
    EXPECT_EQ(lp.graph.edge_count(), 9u * 4u);
    EXPECT_EQ(lp.matchings.size(), 9u);
    EXPECT_LT(lp.hidden_index, 9u);
    EXPECT_TRUE(analyze_party_graph(lp.graph, hp).is_party_shaped(hp));
    for (const auto& m : lp.matchings) EXPECT_EQ(m.pairs.size(), 4u);
  }
}

TEST(Counting, ExactSmallCount) {
  EXPECT_EQ(count_party_graphs(params(2, 1, 2)), 288);
  EXPECT_EQ(enumerate_local_support(params(2, 1, 2)).size(), 288u);
}

TEST(Counting, LocalViewIsUniformOnItsSupport) {
  auto hp = params(2, 1, 2);
  auto support = enumerate_local_support(hp);
  std::map<std::vector<Edge>, std::size_t> freq;
  const std::size_t trials = 10000;
  for (std::uint64_t seed = 0; seed < trials; ++seed) {
    auto e = edge_vector(build_local(hp, seed).graph);
    ASSERT_TRUE(support.count(e)) << "draw outside the enumerated support";
    ++freq[e];
  }
  EXPECT_EQ(freq.size(), 288u);
  const double p = 1.0 / 288.0;
  const double sigma = std::sqrt(trials * p * (1 - p));
  for (const auto& [g, c] : freq) EXPECT_NEAR(static_cast<double>(c), trials * p, 5 * sigma);
}

TEST(Counting, LowerBoundExamples) {
  EXPECT_EQ(lower_bound_count(params(2, 1, 2)), BigRational(4608, 81));
  EXPECT_EQ(lower_bound_count(params(2, 1, 4)), BigRational(18 * 65536, 625));  // 18 * (16/5)^4
  for (auto hp : {params(2, 1, 2), params(3, 1, 4), params(4, 2, 6), params(6, 2, 10), params(9, 3, 12)}) {
    EXPECT_GT(BigRational(count_party_graphs(hp)), lower_bound_count(hp));
  }
  EXPECT_THROW(count_party_graphs(params(1, 1, 2)), InvalidParameter);
}

TEST(Counting, Binomial) {
  EXPECT_EQ(binomial(10, 3), 120);
  EXPECT_EQ(binomial(5, 0), 1);
  EXPECT_EQ(binomial(3, 5), 0);
  EXPECT_EQ(binomial(60, 30), BigInt("118264581564861424"));
}

TEST(Counting, BinomialShiftBound) {
  EXPECT_TRUE(check_binomial_shift_bound(10, 2, 3));
  EXPECT_TRUE(check_binomial_shift_bound(10, 2, 8));
  EXPECT_THROW(check_binomial_shift_bound(10, 2, 9), InvalidParameter);
  EXPECT_THROW(check_binomial_shift_bound(10, 0, 3), InvalidParameter);
  for (std::uint64_t a = 2; a <= 25; ++a)
    for (std::uint64_t b = 1; b < a; ++b)
      for (std::uint64_t c = 1; c <= a - b; ++c) ASSERT_TRUE(check_binomial_shift_bound(a, b, c));
}

TEST(InstanceStreams, MaterializeToPartyAndUnionGraphs) {
  auto inst = build_global(params(3, 1, 4), 2);
  for (double churn : {0.0, 0.5, 1.0}) {
    auto st = instance_to_streams(inst, churn, 7);
    ASSERT_EQ(st.parties.size(), 3u);
    for (std::size_t p = 0; p < 3; ++p) EXPECT_EQ(materialize(st.parties[p]), inst.party_graphs[p]);
    EXPECT_EQ(materialize(st.union_stream), inst.union_graph());
  }
}

TEST(InstanceFile, RoundTrip) {
  auto inst = build_global(params(4, 2, 8), 3);
  std::stringstream ss;
  write_instance(ss, inst);
  auto back = read_instance(ss);
  EXPECT_EQ(back.params, inst.params);
  EXPECT_EQ(back.seed, inst.seed);
  EXPECT_EQ(back.party_graphs, inst.party_graphs);
  for (std::size_t p = 0; p < 4; ++p) EXPECT_EQ(back.hidden[p].pairs, inst.hidden[p].pairs);

  std::stringstream again;
  write_instance(again, back);
  std::stringstream first;
  write_instance(first, inst);
  EXPECT_EQ(again.str(), first.str());

  std::istringstream bad("p hard 2 1 4 0\ng 0\ne 0 x\n");
  EXPECT_THROW(read_instance(bad), ParseError);
}
