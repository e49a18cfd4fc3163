#include "dynmatch/sim_protocol.hpp"

#include <algorithm>
#include <future>

#include "dynmatch/errors.hpp"
#include "dynmatch/streaming_matcher.hpp"

namespace dynmatch {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t pos) {
  std::uint32_t v = 0;
  for (std::size_t i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[pos + i]) << (8 * i);
  return v;
}

Message compute_message(std::uint32_t party, const BipartiteGraph& g, const ProtocolConfig& cfg) {
  Message m = cfg.strategy == Strategy::kAlg1 ? party_message_alg1(party, g, cfg.seed, cfg.k)
                                              : party_message_trivial(party, g);
  if (cfg.budget_bytes) m = truncate_message(m, *cfg.budget_bytes);
  return m;
}

}  // namespace

std::size_t message_wire_size(std::size_t edge_count) noexcept {
  return edge_count == 0 ? 0 : kMessageHeaderBytes + kMessageEdgeBytes * edge_count;
}

std::size_t Message::byte_size() const noexcept { return message_wire_size(edges.size()); }

std::vector<std::uint8_t> encode_message(const Message& m) {
  std::vector<std::uint8_t> out;
  if (m.edges.empty()) return out;
  out.reserve(m.byte_size());
  put_u32(out, m.party);
  put_u32(out, static_cast<std::uint32_t>(m.edges.size()));
  for (const Edge& e : m.edges) {
    put_u32(out, e.a);
    put_u32(out, e.b);
  }
  return out;
}

Message decode_message(std::span<const std::uint8_t> bytes, std::uint32_t silent_party) {
  if (bytes.empty()) return Message{silent_party, {}};
  if (bytes.size() < kMessageHeaderBytes) throw InvalidParameter("truncated message header");
  Message m;
  m.party = get_u32(bytes, 0);
  const std::uint32_t count = get_u32(bytes, 4);
  if (count == 0 || bytes.size() != message_wire_size(count)) {
    throw InvalidParameter("message length disagrees with its edge count");
  }
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t pos = kMessageHeaderBytes + i * kMessageEdgeBytes;
    m.edges.push_back({get_u32(bytes, pos), get_u32(bytes, pos + 4)});
  }
  return m;
}

std::string to_string(Strategy s) { return s == Strategy::kAlg1 ? "alg1" : "trivial"; }

Strategy parse_strategy(const std::string& name) {
  if (name == "alg1") return Strategy::kAlg1;
  if (name == "trivial") return Strategy::kTrivial;
  throw InvalidParameter("unknown strategy '" + name + "' (expected alg1 or trivial)");
}

Message party_message_alg1(std::uint32_t party, const BipartiteGraph& own_graph,
                           std::uint64_t shared_seed, std::size_t k) {
  Message m{party, {}};
  for (Vertex a : choose_sampled_vertices(own_graph.left_size(), k, shared_seed)) {
    std::vector<Vertex> nbrs = own_graph.neighbors(a);
    const std::size_t keep = std::min(nbrs.size(), k);
    for (std::size_t i = 0; i < keep; ++i) m.edges.push_back({a, nbrs[i]});
  }
  return m;
}

Message party_message_trivial(std::uint32_t party, const BipartiteGraph& own_graph) {
  return Message{party, maximum_matching(own_graph).pairs};
}

Message truncate_message(const Message& m, std::size_t budget_bytes) {
  if (m.byte_size() <= budget_bytes) return m;
  std::size_t fit = 0;
  if (budget_bytes >= kMessageHeaderBytes + kMessageEdgeBytes) {
    fit = (budget_bytes - kMessageHeaderBytes) / kMessageEdgeBytes;
  }
  Message out{m.party, {}};
  out.edges.assign(m.edges.begin(), m.edges.begin() + static_cast<std::ptrdiff_t>(fit));
  return out;
}

Matching referee_combine(std::span<const Message> messages,
                         std::span<const BipartiteGraph> declared_graphs) {
  if (declared_graphs.empty()) return {};
  const std::size_t left = declared_graphs.front().left_size();
  const std::size_t right = declared_graphs.front().right_size();
  std::vector<bool> seen(declared_graphs.size(), false);
  std::vector<Edge> received;
  for (const Message& m : messages) {
    if (m.party >= declared_graphs.size()) {
      throw InvalidParameter("message from unknown party " + std::to_string(m.party));
    }
    if (seen[m.party]) throw InvalidParameter("two messages from party " + std::to_string(m.party));
    seen[m.party] = true;
    for (const Edge& e : m.edges) {
      if (!declared_graphs[m.party].has_edge(e)) {
        throw InvalidEdge("party " + std::to_string(m.party) + " sent edge (" + std::to_string(e.a) +
                          "," + std::to_string(e.b) + ") it does not hold");
      }
      received.push_back(e);
    }
  }
  return maximum_matching(BipartiteGraph::from_edge_multiset(left, right, std::move(received)));
}

ProtocolRun run_protocol(std::span<const BipartiteGraph> party_graphs, const ProtocolConfig& cfg) {
  if (cfg.k < 1) throw InvalidParameter("k must be >= 1");
  std::vector<Edge> all;
  for (const BipartiteGraph& g : party_graphs) {
    if (g.left_size() != party_graphs.front().left_size() ||
        g.right_size() != party_graphs.front().right_size()) {
      throw InvalidParameter("party graphs must share dimensions");
    }
    all.insert(all.end(), g.edges().begin(), g.edges().end());
  }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw InvalidParameter("party graphs must be edge-disjoint");
  }

  ProtocolRun run;
  run.config = cfg;
  run.messages.resize(party_graphs.size());
  // each party sees only its own graph and the shared configuration
  if (cfg.parallel) {
    std::vector<std::future<Message>> pending;
    for (std::size_t p = 0; p < party_graphs.size(); ++p) {
      pending.push_back(std::async(std::launch::async, compute_message, static_cast<std::uint32_t>(p),
                                   std::cref(party_graphs[p]), std::cref(cfg)));
    }
    for (std::size_t p = 0; p < pending.size(); ++p) run.messages[p] = pending[p].get();
  } else {
    for (std::size_t p = 0; p < party_graphs.size(); ++p) {
      run.messages[p] = compute_message(static_cast<std::uint32_t>(p), party_graphs[p], cfg);
    }
  }

  for (const Message& m : run.messages) {
    run.max_message_bytes = std::max(run.max_message_bytes, m.byte_size());
    run.received_edges += m.edges.size();
  }
  run.output = referee_combine(run.messages, party_graphs);
  return run;
}

ProtocolRun run_protocol(const HardInstance& inst, const ProtocolConfig& cfg) {
  ProtocolRun run = run_protocol(std::span<const BipartiteGraph>(inst.party_graphs), cfg);
  const HardParams& params = inst.params;
  run.opt_lower_bound = params.opt_lower_bound();
  run.shared_group_edges = 2 * params.q * params.group_size;
  for (const Matching& hidden : inst.hidden) {
    std::size_t overlap = 0;
    for (const Edge& e : run.output.pairs) {
      if (std::binary_search(hidden.pairs.begin(), hidden.pairs.end(), e)) ++overlap;
    }
    run.hidden_overlap.push_back(overlap);
    run.sum_hidden_overlap += overlap;
  }
  run.overlap_bound_holds = run.output.size() <= run.shared_group_edges + run.sum_hidden_overlap;
  return run;
}

}  // namespace dynmatch
