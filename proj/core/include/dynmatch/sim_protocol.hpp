#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dynmatch/graph.hpp"
#include "dynmatch/hard_instance.hpp"

namespace dynmatch {

/// One party's simultaneous message to the referee.
///
/// Wire format (little-endian): u32 party id, u32 edge count, then per edge
/// u32 a and u32 b. A message without edges is not sent at all and occupies
/// zero bytes.
struct Message {
  std::uint32_t party = 0;
  std::vector<Edge> edges;

  std::size_t byte_size() const noexcept;
  friend bool operator==(const Message&, const Message&) = default;
};

inline constexpr std::size_t kMessageHeaderBytes = 8;
inline constexpr std::size_t kMessageEdgeBytes = 8;

std::size_t message_wire_size(std::size_t edge_count) noexcept;
std::vector<std::uint8_t> encode_message(const Message& m);
/// Throws InvalidParameter on malformed input. An empty buffer decodes to an
/// edgeless message from `silent_party`.
Message decode_message(std::span<const std::uint8_t> bytes, std::uint32_t silent_party = 0);

enum class Strategy { kAlg1, kTrivial };

std::string to_string(Strategy s);
/// Accepts "alg1" and "trivial". Throws InvalidParameter.
Strategy parse_strategy(const std::string& name);

/// Every party derives the same vertex sample A' from the shared seed and
/// sends, for each a in A', its min(deg(a), k) incident edges with the
/// smallest right endpoints.
Message party_message_alg1(std::uint32_t party, const BipartiteGraph& own_graph,
                           std::uint64_t shared_seed, std::size_t k);

/// Baseline: the party sends a maximum matching of its own graph.
Message party_message_trivial(std::uint32_t party, const BipartiteGraph& own_graph);

/// Longest prefix of the edge list whose encoding fits in budget_bytes.
Message truncate_message(const Message& m, std::size_t budget_bytes);

/// Maximum matching over the union of received edges. Throws InvalidEdge if
/// a message carries an edge outside its sender's declared graph, and
/// InvalidParameter on duplicate or unknown senders.
Matching referee_combine(std::span<const Message> messages,
                         std::span<const BipartiteGraph> declared_graphs);

struct ProtocolConfig {
  std::size_t k = 1;
  std::optional<std::size_t> budget_bytes;  // nullopt: unlimited
  Strategy strategy = Strategy::kAlg1;
  std::uint64_t seed = 0;
  bool parallel = false;  // compute party messages concurrently
};

struct ProtocolRun {
  ProtocolConfig config;
  std::vector<Message> messages;
  Matching output;  // N
  std::size_t max_message_bytes = 0;
  std::size_t received_edges = 0;

  // Filled when run on a hard instance.
  std::optional<std::size_t> opt_lower_bound;  // (Q+P)k/2
  std::vector<std::size_t> hidden_overlap;     // |N & M_p| per party
  std::size_t sum_hidden_overlap = 0;
  std::size_t shared_group_edges = 0;          // 2Qk
  /// |N| <= 2Qk + sum_p |N & M_p|.
  bool overlap_bound_holds = true;
};

/// Parties must share dimensions and be pairwise edge-disjoint.
ProtocolRun run_protocol(std::span<const BipartiteGraph> party_graphs, const ProtocolConfig& cfg);
ProtocolRun run_protocol(const HardInstance& inst, const ProtocolConfig& cfg);

}  // namespace dynmatch
