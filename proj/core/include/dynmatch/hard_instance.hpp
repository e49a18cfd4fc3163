#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dynmatch/graph.hpp"
#include "dynmatch/turnstile_stream.hpp"

namespace dynmatch {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Parameters of the multi-party hard distribution.
///
/// Both sides consist of (Q+P) groups of k consecutive vertices; group g of
/// either side is [g*k, (g+1)*k).
struct HardParams {
  std::size_t parties = 2;     // P
  std::size_t q = 1;           // Q
  std::size_t group_size = 2;  // k, even

  std::size_t groups() const noexcept { return q + parties; }
  std::size_t side_size() const noexcept { return groups() * group_size; }
  std::size_t vertex_count() const noexcept { return 2 * side_size(); }
  /// (Q+P) * k / 2, a lower bound on the maximum matching of the union graph.
  std::size_t opt_lower_bound() const noexcept { return groups() * group_size / 2; }
  std::size_t matchings_per_party() const noexcept { return (q + 1) * (q + 1); }

  /// Requires Q >= 1, Q < P, k even and P <= k <= n/P. Throws InvalidParameter.
  void validate() const;
  /// Non-fatal remarks, e.g. Q > sqrt(P).
  std::vector<std::string> warnings() const;

  friend bool operator==(const HardParams&, const HardParams&) = default;
};

struct HardInstance {
  HardParams params;
  std::uint64_t seed = 0;
  std::vector<BipartiteGraph> party_graphs;  // G_p, pairwise edge-disjoint
  std::vector<Matching> hidden;              // M_p inside G_p
  // Group permutations of the construction. Empty when read from a file.
  std::vector<std::size_t> perm_a;
  std::vector<std::size_t> perm_b;

  BipartiteGraph union_graph() const;
};

/// Global construction: assemble each party's (Q+1)^2 group matchings, keep
/// a uniform k/2-subset of every matching, then relabel groups through
/// random permutations of both sides. Deterministic in the seed.
HardInstance build_global(const HardParams& params, std::uint64_t seed);

/// One party's graph drawn directly from its marginal distribution.
struct LocalPartyGraph {
  BipartiteGraph graph;
  std::vector<std::size_t> groups_a;  // I_A, ascending
  std::vector<std::size_t> groups_b;  // B-groups paired with groups_a, in pairing order
  std::vector<Matching> matchings;    // row-major over groups_a x groups_b
  std::size_t hidden_index = 0;       // which matching plays M_p
};

/// Local construction: a uniform (Q+1)-subset I_A, a uniform injective
/// pairing of I_A into the B-groups, and for each (A_i, B_j) a uniform
/// k/2-subset of the perfect matching t -> (t + s - r) mod k, where r and s
/// are the ranks of i and j in the pairing. The offsets make the pairing
/// recoverable from the graph, so every draw is a distinct graph.
LocalPartyGraph build_local(const HardParams& params, std::uint64_t seed);

/// Group-level view of a party graph.
struct PartyStructure {
  struct Block {
    std::size_t group_a = 0;
    std::size_t group_b = 0;
    std::vector<Edge> edges;
  };
  std::vector<std::size_t> groups_a;  // groups with at least one edge, ascending
  std::vector<std::size_t> groups_b;
  std::vector<Block> blocks;  // nonempty group pairs, sorted

  /// (Q+1) x (Q+1) biclique of blocks, each block a matching of size k/2.
  bool is_party_shaped(const HardParams& params) const;
};

PartyStructure analyze_party_graph(const BipartiteGraph& g, const HardParams& params);

/// Exact number of distinct party graphs:
/// C(Q+P, Q+1) * (Q+P)!/(P-1)! * C(k, k/2)^((Q+1)^2).
BigInt count_party_graphs(const HardParams& params);

/// C(Q+P, Q+1) * (Q+P)!/(P-1)! * (2^k / (k+1))^((Q+1)^2), exactly.
BigRational lower_bound_count(const HardParams& params);

/// Checks C(a-b, c) <= C(a, c) * (a-c)^b / (a-b)^b in exact arithmetic.
/// Requires positive a, b, c with c <= a - b; throws InvalidParameter.
bool check_binomial_shift_bound(std::uint64_t a, std::uint64_t b, std::uint64_t c);

BigInt binomial(std::uint64_t n, std::uint64_t r);

struct InstanceStreams {
  std::vector<UpdateStream> parties;
  UpdateStream union_stream;  // party streams concatenated in party order
};

InstanceStreams instance_to_streams(const HardInstance& inst, double churn, std::uint64_t seed);

// Text format:
//   p hard <P> <Q> <k> <seed>
//   g <p>          followed by "e <a> <b>" lines of G_p
//   hidden <p>     followed by "e <a> <b>" lines of M_p
void write_instance(std::ostream& out, const HardInstance& inst);
HardInstance read_instance(std::istream& in);
void write_instance_file(const std::string& path, const HardInstance& inst);
HardInstance read_instance_file(const std::string& path);

}  // namespace dynmatch
