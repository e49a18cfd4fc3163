#include "dynmatch/hard_instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "dynmatch/errors.hpp"
#include "dynmatch/seeding.hpp"

namespace dynmatch {

namespace {

// Uniform permutation of [0, n).
std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(perm[i - 1], perm[pick(rng)]);
  }
  return perm;
}

// First m entries of a partial shuffle of [0, n): a uniform ordered m-arrangement.
std::vector<std::size_t> random_arrangement(std::size_t n, std::size_t m, Rng& rng) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(m);
  return pool;
}

// Matching between A-group ga and B-group gb that keeps a uniform half of
// the perfect matching t -> (t + shift) mod k.
std::vector<Edge> half_shift_matching(std::size_t ga, std::size_t gb, std::size_t shift,
                                      std::size_t k, Rng& rng) {
  std::vector<Edge> out;
  out.reserve(k / 2);
  for (std::size_t t : random_arrangement(k, k / 2, rng)) {
    out.push_back({static_cast<Vertex>(ga * k + t), static_cast<Vertex>(gb * k + (t + shift) % k)});
  }
  std::sort(out.begin(), out.end());
  return out;
}

BigInt factorial_ratio(std::uint64_t from_exclusive, std::uint64_t to_inclusive) {
  BigInt r = 1;
  for (std::uint64_t i = from_exclusive + 1; i <= to_inclusive; ++i) r *= i;
  return r;
}

// C(Q+P, Q+1) * (Q+P)!/(P-1)!
BigInt group_choice_count(const HardParams& p) {
  return binomial(p.groups(), p.q + 1) * factorial_ratio(p.parties - 1, p.groups());
}

}  // namespace

void HardParams::validate() const {
  if (q < 1) throw InvalidParameter("Q must be >= 1");
  if (q >= parties) throw InvalidParameter("Q must be smaller than P");
  if (group_size < 2 || group_size % 2 != 0) throw InvalidParameter("k must be a positive even integer");
  if (group_size < parties) throw InvalidParameter("k must be >= P");
  if (group_size * parties > vertex_count()) throw InvalidParameter("k must be <= n/P");
  if (side_size() >= UINT32_MAX) throw InvalidParameter("instance too large");
}

std::vector<std::string> HardParams::warnings() const {
  std::vector<std::string> out;
  if (static_cast<double>(q) > std::sqrt(static_cast<double>(parties))) {
    out.push_back("Q > sqrt(P): the instance is far from the Q = o(P) regime");
  }
  return out;
}

BipartiteGraph HardInstance::union_graph() const {
  std::vector<Edge> edges;
  for (const BipartiteGraph& g : party_graphs) edges.insert(edges.end(), g.edges().begin(), g.edges().end());
  return BipartiteGraph(params.side_size(), params.side_size(), std::move(edges));
}

HardInstance build_global(const HardParams& params, std::uint64_t seed) {
  params.validate();
  const std::size_t k = params.group_size;
  const std::size_t Q = params.q;
  Rng rng = make_rng(derive_seed(seed, {seed_domain::kHardGlobal}));

  HardInstance inst;
  inst.params = params;
  inst.seed = seed;
  inst.perm_a = random_permutation(params.groups(), rng);
  inst.perm_b = random_permutation(params.groups(), rng);

  auto relabel = [&](std::vector<Edge> edges) {
    for (Edge& e : edges) {
      e.a = static_cast<Vertex>(inst.perm_a[e.a / k] * k + e.a % k);
      e.b = static_cast<Vertex>(inst.perm_b[e.b / k] * k + e.b % k);
    }
    std::sort(edges.begin(), edges.end());
    return edges;
  };

  for (std::size_t p = 0; p < params.parties; ++p) {
    const std::size_t own = Q + p;
    std::vector<Edge> edges;
    auto add = [&](const std::vector<Edge>& m) { edges.insert(edges.end(), m.begin(), m.end()); };
    // the P shifted matchings between shared groups are edge-disjoint since k >= P
    for (std::size_t i = 0; i < Q; ++i) {
      for (std::size_t j = 0; j < Q; ++j) add(half_shift_matching(i, j, p, k, rng));
    }
    for (std::size_t j = 0; j < Q; ++j) {
      add(half_shift_matching(own, j, 0, k, rng));
      add(half_shift_matching(j, own, 0, k, rng));
    }
    std::vector<Edge> hidden = half_shift_matching(own, own, 0, k, rng);
    add(hidden);

    inst.party_graphs.emplace_back(params.side_size(), params.side_size(), relabel(std::move(edges)));
    inst.hidden.push_back(Matching{relabel(std::move(hidden))});
  }
  return inst;
}

LocalPartyGraph build_local(const HardParams& params, std::uint64_t seed) {
  params.validate();
  const std::size_t k = params.group_size;
  const std::size_t width = params.q + 1;
  Rng rng = make_rng(derive_seed(seed, {seed_domain::kHardLocal}));

  LocalPartyGraph out;
  out.groups_a = random_arrangement(params.groups(), width, rng);
  std::sort(out.groups_a.begin(), out.groups_a.end());
  out.groups_b = random_arrangement(params.groups(), width, rng);

  std::vector<Edge> edges;
  for (std::size_t r = 0; r < width; ++r) {
    for (std::size_t s = 0; s < width; ++s) {
      const std::size_t shift = (s + k - r) % k;
      auto m = half_shift_matching(out.groups_a[r], out.groups_b[s], shift, k, rng);
      edges.insert(edges.end(), m.begin(), m.end());
      out.matchings.push_back(Matching{std::move(m)});
    }
  }
  std::uniform_int_distribution<std::size_t> pick(0, out.matchings.size() - 1);
  out.hidden_index = pick(rng);
  out.graph = BipartiteGraph(params.side_size(), params.side_size(), std::move(edges));
  return out;
}

PartyStructure analyze_party_graph(const BipartiteGraph& g, const HardParams& params) {
  const std::size_t k = params.group_size;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<Edge>> blocks;
  std::set<std::size_t> ga, gb;
  for (const Edge& e : g.edges()) {
    blocks[{e.a / k, e.b / k}].push_back(e);
    ga.insert(e.a / k);
    gb.insert(e.b / k);
  }
  PartyStructure s;
  s.groups_a.assign(ga.begin(), ga.end());
  s.groups_b.assign(gb.begin(), gb.end());
  for (auto& [key, edges] : blocks) s.blocks.push_back({key.first, key.second, std::move(edges)});
  return s;
}

bool PartyStructure::is_party_shaped(const HardParams& params) const {
  const std::size_t width = params.q + 1;
  if (groups_a.size() != width || groups_b.size() != width) return false;
  if (blocks.size() != width * width) return false;
  for (const Block& b : blocks) {
    if (b.edges.size() != params.group_size / 2) return false;
    std::set<Vertex> left, right;
    for (const Edge& e : b.edges) {
      if (!left.insert(e.a).second || !right.insert(e.b).second) return false;
    }
  }
  return true;
}

BigInt binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  BigInt out = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    out *= n - r + i;
    out /= i;  // exact: out is C(n-r+i, i) here
  }
  return out;
}

BigInt count_party_graphs(const HardParams& params) {
  params.validate();
  const std::size_t k = params.group_size;
  return group_choice_count(params) *
         boost::multiprecision::pow(binomial(k, k / 2), static_cast<unsigned>(params.matchings_per_party()));
}

BigRational lower_bound_count(const HardParams& params) {
  params.validate();
  const std::size_t k = params.group_size;
  BigRational per_matching(BigInt(1) << k, BigInt(k + 1));
  BigRational out(group_choice_count(params));
  for (std::size_t i = 0; i < params.matchings_per_party(); ++i) out *= per_matching;
  return out;
}

bool check_binomial_shift_bound(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  if (a == 0 || b == 0 || c == 0) throw InvalidParameter("a, b and c must be positive");
  if (b >= a || c > a - b) throw InvalidParameter("requires c <= a - b");
  const auto e = static_cast<unsigned>(b);
  // C(a-b, c) * (a-b)^b <= C(a, c) * (a-c)^b
  BigInt lhs = binomial(a - b, c) * boost::multiprecision::pow(BigInt(a - b), e);
  BigInt rhs = binomial(a, c) * boost::multiprecision::pow(BigInt(a - c), e);
  return lhs <= rhs;
}

InstanceStreams instance_to_streams(const HardInstance& inst, double churn, std::uint64_t seed) {
  InstanceStreams out;
  out.union_stream.left_size = inst.params.side_size();
  out.union_stream.right_size = inst.params.side_size();
  out.union_stream.multiplicity_cap = 1;
  for (std::size_t p = 0; p < inst.party_graphs.size(); ++p) {
    UpdateStream s = stream_from_graph(inst.party_graphs[p], churn, derive_seed(seed, {p}));
    out.union_stream.updates.insert(out.union_stream.updates.end(), s.updates.begin(), s.updates.end());
    out.parties.push_back(std::move(s));
  }
  return out;
}

void write_instance(std::ostream& out, const HardInstance& inst) {
  const HardParams& p = inst.params;
  out << "p hard " << p.parties << ' ' << p.q << ' ' << p.group_size << ' ' << inst.seed << '\n';
  for (std::size_t i = 0; i < inst.party_graphs.size(); ++i) {
    out << "g " << i << '\n';
    for (const Edge& e : inst.party_graphs[i].edges()) out << "e " << e.a << ' ' << e.b << '\n';
    out << "hidden " << i << '\n';
    for (const Edge& e : inst.hidden[i].pairs) out << "e " << e.a << ' ' << e.b << '\n';
  }
}

HardInstance read_instance(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<HardInstance> inst;
  std::vector<std::vector<Edge>> graphs, hidden;
  std::vector<Edge>* target = nullptr;

  auto party_index = [&](std::istringstream& ls) {
    long long p = -1;
    if (!(ls >> p) || p < 0 || static_cast<std::size_t>(p) >= inst->params.parties) {
      throw ParseError(lineno, "bad party index");
    }
    return static_cast<std::size_t>(p);
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "p") {
      if (inst) throw ParseError(lineno, "duplicate header");
      std::string kind;
      HardParams params;
      std::uint64_t seed = 0;
      if (!(ls >> kind >> params.parties >> params.q >> params.group_size >> seed) || kind != "hard") {
        throw ParseError(lineno, "bad instance header, expected 'p hard <P> <Q> <k> <seed>'");
      }
      try {
        params.validate();
      } catch (const InvalidParameter& e) {
        throw ParseError(lineno, e.what());
      }
      inst.emplace();
      inst->params = params;
      inst->seed = seed;
      graphs.assign(params.parties, {});
      hidden.assign(params.parties, {});
    } else if (!inst) {
      throw ParseError(lineno, "content before header");
    } else if (tag == "g") {
      target = &graphs[party_index(ls)];
    } else if (tag == "hidden") {
      target = &hidden[party_index(ls)];
    } else if (tag == "e") {
      if (!target) throw ParseError(lineno, "edge outside a 'g' or 'hidden' block");
      long long a = -1, b = -1;
      const auto side = static_cast<long long>(inst->params.side_size());
      if (!(ls >> a >> b) || a < 0 || b < 0 || a >= side || b >= side) {
        throw ParseError(lineno, "bad edge line");
      }
      target->push_back({static_cast<Vertex>(a), static_cast<Vertex>(b)});
    } else {
      throw ParseError(lineno, "unknown line tag '" + tag + "'");
    }
    std::string rest;
    if (ls >> rest) throw ParseError(lineno, "trailing tokens");
  }
  if (!inst) throw ParseError(lineno, "missing 'p hard' header");

  const std::size_t side = inst->params.side_size();
  for (std::size_t p = 0; p < inst->params.parties; ++p) {
    try {
      inst->party_graphs.emplace_back(side, side, std::move(graphs[p]));
    } catch (const InvalidParameter& e) {
      throw ParseError(lineno, "party " + std::to_string(p) + ": " + e.what());
    }
    std::sort(hidden[p].begin(), hidden[p].end());
    for (const Edge& e : hidden[p]) {
      if (!inst->party_graphs[p].has_edge(e)) {
        throw ParseError(lineno, "hidden matching of party " + std::to_string(p) + " leaves its graph");
      }
    }
    inst->hidden.push_back(Matching{std::move(hidden[p])});
  }
  return std::move(*inst);
}

void write_instance_file(const std::string& path, const HardInstance& inst) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write instance file '" + path + "'");
  write_instance(out, inst);
}

HardInstance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open instance file '" + path + "'");
  return read_instance(in);
}

}  // namespace dynmatch
