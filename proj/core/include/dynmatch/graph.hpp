#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dynmatch {

using Vertex = std::uint32_t;

/// Edge (a, b) with a on the left side A and b on the right side B.
struct Edge {
  Vertex a = 0;
  Vertex b = 0;

  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple bipartite graph over A = [0, left_size) and B = [0, right_size).
///
/// Edges are kept sorted lexicographically. Construction rejects
/// out-of-range endpoints and duplicate pairs.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;
  BipartiteGraph(std::size_t left_size, std::size_t right_size, std::vector<Edge> edges = {});

  /// Like the constructor, but silently drops duplicate pairs.
  static BipartiteGraph from_edge_multiset(std::size_t left_size, std::size_t right_size,
                                           std::vector<Edge> edges);

  std::size_t left_size() const noexcept { return left_size_; }
  std::size_t right_size() const noexcept { return right_size_; }
  std::size_t vertex_count() const noexcept { return left_size_ + right_size_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return edges_.empty(); }

  std::span<const Edge> edges() const noexcept { return edges_; }
  bool has_edge(Edge e) const noexcept;

  /// Right endpoints of the edges incident to a, ascending.
  std::vector<Vertex> neighbors(Vertex a) const;
  std::size_t degree(Vertex a) const;
  std::size_t max_left_degree() const;

  friend bool operator==(const BipartiteGraph&, const BipartiteGraph&) = default;

 private:
  std::size_t left_size_ = 0;
  std::size_t right_size_ = 0;
  std::vector<Edge> edges_;
};

struct Matching {
  std::vector<Edge> pairs;  // sorted

  std::size_t size() const noexcept { return pairs.size(); }
  friend bool operator==(const Matching&, const Matching&) = default;
};

/// Exact maximum-cardinality matching (Hopcroft-Karp).
Matching maximum_matching(const BipartiteGraph& g);

/// True iff the pairs are pairwise vertex-disjoint edges of g.
bool is_valid_matching(const BipartiteGraph& g, const Matching& m);

/// Maximal matching built by scanning edges in the given order, or in
/// lexicographic order when none is supplied. Edges of `order` not in g are
/// ignored.
Matching greedy_matching(const BipartiteGraph& g,
                         std::optional<std::span<const Edge>> order = std::nullopt);

// Text format:
//   p bip <left_size> <right_size>
//   e <a> <b>
// Lines starting with 'c' and blank lines are ignored.
BipartiteGraph read_graph(std::istream& in);
BipartiteGraph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const BipartiteGraph& g);
void write_graph_file(const std::string& path, const BipartiteGraph& g);

/// One "m <a> <b>" line per pair.
void write_matching(std::ostream& out, const Matching& m);

/// Erdos-Renyi style bipartite graph: each pair present independently.
BipartiteGraph random_bipartite_graph(std::size_t left_size, std::size_t right_size,
                                      double edge_probability, std::uint64_t seed);

}  // namespace dynmatch
