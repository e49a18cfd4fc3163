#include "dynmatch/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>

#include "dynmatch/errors.hpp"
#include "dynmatch/seeding.hpp"

namespace dynmatch {

namespace {

void check_endpoints(std::size_t left_size, std::size_t right_size, const Edge& e) {
  if (e.a >= left_size || e.b >= right_size) {
    throw InvalidParameter("edge (" + std::to_string(e.a) + "," + std::to_string(e.b) +
                           ") outside " + std::to_string(left_size) + "x" +
                           std::to_string(right_size));
  }
}

// Compressed adjacency of the left side.
struct LeftAdjacency {
  std::vector<std::size_t> offsets;
  std::vector<Vertex> targets;

  explicit LeftAdjacency(const BipartiteGraph& g) : offsets(g.left_size() + 1, 0) {
    for (const Edge& e : g.edges()) ++offsets[e.a + 1];
    for (std::size_t i = 1; i < offsets.size(); ++i) offsets[i] += offsets[i - 1];
    targets.resize(g.edge_count());
    // edges are sorted by (a, b), so a straight copy is already grouped by a
    std::size_t i = 0;
    for (const Edge& e : g.edges()) targets[i++] = e.b;
  }
};

class HopcroftKarp {
 public:
  explicit HopcroftKarp(const BipartiteGraph& g)
      : adj_(g),
        left_size_(g.left_size()),
        match_left_(g.left_size(), kFree),
        match_right_(g.right_size(), kFree),
        dist_(g.left_size()),
        cursor_(g.left_size()) {}

  Matching run() {
    while (bfs()) {
      for (std::size_t a = 0; a < left_size_; ++a) cursor_[a] = adj_.offsets[a];
      for (std::size_t a = 0; a < left_size_; ++a) {
        if (match_left_[a] == kFree) augment(static_cast<Vertex>(a));
      }
    }
    Matching m;
    for (std::size_t a = 0; a < left_size_; ++a) {
      if (match_left_[a] != kFree) m.pairs.push_back({static_cast<Vertex>(a), match_left_[a]});
    }
    return m;
  }

 private:
  static constexpr Vertex kFree = std::numeric_limits<Vertex>::max();
  static constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

  bool bfs() {
    std::queue<Vertex> q;
    for (std::size_t a = 0; a < left_size_; ++a) {
      if (match_left_[a] == kFree) {
        dist_[a] = 0;
        q.push(static_cast<Vertex>(a));
      } else {
        dist_[a] = kInf;
      }
    }
    bool found_free = false;
    while (!q.empty()) {
      Vertex a = q.front();
      q.pop();
      for (std::size_t i = adj_.offsets[a]; i < adj_.offsets[a + 1]; ++i) {
        Vertex next = match_right_[adj_.targets[i]];
        if (next == kFree) {
          found_free = true;
        } else if (dist_[next] == kInf) {
          dist_[next] = dist_[a] + 1;
          q.push(next);
        }
      }
    }
    return found_free;
  }

  // Iterative DFS along the BFS layering; returns true if root was augmented.
  bool augment(Vertex root) {
    std::vector<Vertex> stack{root};
    while (!stack.empty()) {
      Vertex a = stack.back();
      if (cursor_[a] == adj_.offsets[a + 1]) {
        dist_[a] = kInf;  // dead end for the rest of this phase
        stack.pop_back();
        if (!stack.empty()) ++cursor_[stack.back()];
        continue;
      }
      Vertex next = match_right_[adj_.targets[cursor_[a]]];
      if (next == kFree) {
        for (Vertex u : stack) {
          Vertex v = adj_.targets[cursor_[u]];
          match_left_[u] = v;
          match_right_[v] = u;
        }
        return true;
      }
      if (dist_[next] == dist_[a] + 1) {
        stack.push_back(next);
      } else {
        ++cursor_[a];
      }
    }
    return false;
  }

  LeftAdjacency adj_;
  std::size_t left_size_;
  std::vector<Vertex> match_left_;
  std::vector<Vertex> match_right_;
  std::vector<std::size_t> dist_;
  std::vector<std::size_t> cursor_;
};

}  // namespace

BipartiteGraph::BipartiteGraph(std::size_t left_size, std::size_t right_size,
                               std::vector<Edge> edges)
    : left_size_(left_size), right_size_(right_size), edges_(std::move(edges)) {
  for (const Edge& e : edges_) check_endpoints(left_size_, right_size_, e);
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw InvalidParameter("duplicate edge in simple bipartite graph");
  }
}

BipartiteGraph BipartiteGraph::from_edge_multiset(std::size_t left_size, std::size_t right_size,
                                                  std::vector<Edge> edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return BipartiteGraph(left_size, right_size, std::move(edges));
}

bool BipartiteGraph::has_edge(Edge e) const noexcept {
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

std::vector<Vertex> BipartiteGraph::neighbors(Vertex a) const {
  auto lo = std::lower_bound(edges_.begin(), edges_.end(), Edge{a, 0});
  std::vector<Vertex> out;
  for (auto it = lo; it != edges_.end() && it->a == a; ++it) out.push_back(it->b);
  return out;
}

std::size_t BipartiteGraph::degree(Vertex a) const {
  auto lo = std::lower_bound(edges_.begin(), edges_.end(), Edge{a, 0});
  auto hi = std::lower_bound(lo, edges_.end(), Edge{a + 1, 0});
  return static_cast<std::size_t>(hi - lo);
}

std::size_t BipartiteGraph::max_left_degree() const {
  std::size_t best = 0, run = 0;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    run = (i > 0 && edges_[i].a == edges_[i - 1].a) ? run + 1 : 1;
    best = std::max(best, run);
  }
  return best;
}

Matching maximum_matching(const BipartiteGraph& g) {
  if (g.empty()) return {};
  return HopcroftKarp(g).run();
}

bool is_valid_matching(const BipartiteGraph& g, const Matching& m) {
  std::vector<bool> used_left(g.left_size(), false);
  std::vector<bool> used_right(g.right_size(), false);
  for (const Edge& e : m.pairs) {
    if (!g.has_edge(e)) return false;
    if (used_left[e.a] || used_right[e.b]) return false;
    used_left[e.a] = used_right[e.b] = true;
  }
  return true;
}

Matching greedy_matching(const BipartiteGraph& g, std::optional<std::span<const Edge>> order) {
  std::span<const Edge> edges = order ? *order : g.edges();
  std::vector<bool> used_left(g.left_size(), false);
  std::vector<bool> used_right(g.right_size(), false);
  Matching m;
  for (const Edge& e : edges) {
    if (order && !g.has_edge(e)) continue;
    if (used_left[e.a] || used_right[e.b]) continue;
    used_left[e.a] = used_right[e.b] = true;
    m.pairs.push_back(e);
  }
  std::sort(m.pairs.begin(), m.pairs.end());
  return m;
}

BipartiteGraph read_graph(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::pair<std::size_t, std::size_t>> dims;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "p") {
      std::string kind;
      std::size_t l = 0, r = 0;
      if (dims) throw ParseError(lineno, "duplicate header");
      if (!(ls >> kind >> l >> r) || kind != "bip") throw ParseError(lineno, "bad graph header");
      dims.emplace(l, r);
    } else if (tag == "e") {
      if (!dims) throw ParseError(lineno, "edge before header");
      long long a = -1, b = -1;
      if (!(ls >> a >> b) || a < 0 || b < 0 || static_cast<std::size_t>(a) >= dims->first ||
          static_cast<std::size_t>(b) >= dims->second) {
        throw ParseError(lineno, "bad edge line");
      }
      edges.push_back({static_cast<Vertex>(a), static_cast<Vertex>(b)});
    } else {
      throw ParseError(lineno, "unknown line tag '" + tag + "'");
    }
    std::string rest;
    if (ls >> rest) throw ParseError(lineno, "trailing tokens");
  }
  if (!dims) throw ParseError(lineno, "missing 'p bip' header");
  try {
    return BipartiteGraph(dims->first, dims->second, std::move(edges));
  } catch (const InvalidParameter& e) {
    throw ParseError(lineno, e.what());
  }
}

BipartiteGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open graph file '" + path + "'");
  return read_graph(in);
}

void write_graph(std::ostream& out, const BipartiteGraph& g) {
  out << "p bip " << g.left_size() << ' ' << g.right_size() << '\n';
  for (const Edge& e : g.edges()) out << "e " << e.a << ' ' << e.b << '\n';
}

void write_graph_file(const std::string& path, const BipartiteGraph& g) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write graph file '" + path + "'");
  write_graph(out, g);
}

void write_matching(std::ostream& out, const Matching& m) {
  for (const Edge& e : m.pairs) out << "m " << e.a << ' ' << e.b << '\n';
}

BipartiteGraph random_bipartite_graph(std::size_t left_size, std::size_t right_size,
                                      double edge_probability, std::uint64_t seed) {
  if (!(edge_probability >= 0.0 && edge_probability <= 1.0)) {
    throw InvalidParameter("edge probability must lie in [0,1]");
  }
  Rng rng = make_rng(derive_seed(seed, {seed_domain::kGraph}));
  std::bernoulli_distribution coin(edge_probability);
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < left_size; ++a) {
    for (std::size_t b = 0; b < right_size; ++b) {
      if (coin(rng)) edges.push_back({static_cast<Vertex>(a), static_cast<Vertex>(b)});
    }
  }
  return BipartiteGraph(left_size, right_size, std::move(edges));
}

}  // namespace dynmatch
