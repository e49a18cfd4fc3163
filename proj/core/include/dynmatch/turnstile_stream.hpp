#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dynmatch/graph.hpp"

namespace dynmatch {

/// Signed multiplicity update of edge (a, b); delta is +1 or -1.
struct EdgeUpdate {
  Vertex a = 0;
  Vertex b = 0;
  int delta = +1;

  Edge edge() const noexcept { return {a, b}; }
  friend bool operator==(const EdgeUpdate&, const EdgeUpdate&) = default;
};

/// Turnstile stream over the edge slots of a left_size x right_size bipartite
/// graph. At the end of the stream every multiplicity must lie in [-cap, cap].
struct UpdateStream {
  std::size_t left_size = 0;
  std::size_t right_size = 0;
  std::int64_t multiplicity_cap = 1;
  std::vector<EdgeUpdate> updates;

  friend bool operator==(const UpdateStream&, const UpdateStream&) = default;
};

/// End-of-stream graph: the edges whose final multiplicity is positive.
///
/// Throws NegativeFinalMultiplicity if any final multiplicity is negative and
/// CapExceeded if any exceeds the stream's cap in absolute value. Intermediate
/// negative multiplicities are allowed.
BipartiteGraph materialize(const UpdateStream& s);

/// Edges with final multiplicity > 1 (useful to flag non-dynamic streams).
std::vector<Edge> multi_edges(const UpdateStream& s);

/// Dynamic stream whose end-of-stream graph is g. Adds ceil(churn * |E(g)|)
/// decoy insert/delete pairs on random slots; each decoy's delete lands at a
/// uniformly random position after its insert. Decoys may target slots of g
/// or fresh slots but never push a multiplicity above 1 at any time.
UpdateStream stream_from_graph(const BipartiteGraph& g, double churn, std::uint64_t seed);

// Text format:
//   p ts <left_size> <right_size> <cap>
//   u <a> <b> <+1|-1>
void write_stream(std::ostream& out, const UpdateStream& s);
UpdateStream read_stream(std::istream& in);
void write_stream_file(const std::string& path, const UpdateStream& s);
UpdateStream read_stream_file(const std::string& path);

}  // namespace dynmatch
