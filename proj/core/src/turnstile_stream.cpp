#include "dynmatch/turnstile_stream.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "dynmatch/errors.hpp"
#include "dynmatch/seeding.hpp"

namespace dynmatch {

namespace {

std::unordered_map<std::uint64_t, std::int64_t> final_multiplicities(const UpdateStream& s) {
  std::unordered_map<std::uint64_t, std::int64_t> mult;
  mult.reserve(s.updates.size());
  for (const EdgeUpdate& u : s.updates) {
    if (u.a >= s.left_size || u.b >= s.right_size) {
      throw IndexOutOfRange("update (" + std::to_string(u.a) + "," + std::to_string(u.b) +
                            ") outside stream dimensions");
    }
    mult[static_cast<std::uint64_t>(u.a) * s.right_size + u.b] += u.delta;
  }
  return mult;
}

Edge slot_edge(std::uint64_t slot, std::size_t right_size) {
  return {static_cast<Vertex>(slot / right_size), static_cast<Vertex>(slot % right_size)};
}

}  // namespace

BipartiteGraph materialize(const UpdateStream& s) {
  std::vector<Edge> edges;
  for (const auto& [slot, m] : final_multiplicities(s)) {
    Edge e = slot_edge(slot, s.right_size);
    if (m < 0) {
      throw NegativeFinalMultiplicity("edge (" + std::to_string(e.a) + "," +
                                      std::to_string(e.b) + ") ends with multiplicity " +
                                      std::to_string(m));
    }
    if (m > s.multiplicity_cap) {
      throw CapExceeded("edge (" + std::to_string(e.a) + "," + std::to_string(e.b) +
                        ") ends with multiplicity " + std::to_string(m) + " > cap " +
                        std::to_string(s.multiplicity_cap));
    }
    if (m > 0) edges.push_back(e);
  }
  return BipartiteGraph(s.left_size, s.right_size, std::move(edges));
}

std::vector<Edge> multi_edges(const UpdateStream& s) {
  std::vector<Edge> out;
  for (const auto& [slot, m] : final_multiplicities(s)) {
    if (m > 1) out.push_back(slot_edge(slot, s.right_size));
  }
  std::sort(out.begin(), out.end());
  return out;
}

UpdateStream stream_from_graph(const BipartiteGraph& g, double churn, std::uint64_t seed) {
  if (!(churn >= 0.0 && churn <= 1.0)) throw InvalidParameter("churn must lie in [0,1]");

  Rng rng = make_rng(derive_seed(seed, {seed_domain::kStream}));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Every update gets a random sort key; a decoy's delete key is drawn
  // uniformly above its insert key.
  struct Keyed {
    double key;
    EdgeUpdate update;
  };
  std::vector<Keyed> keyed;
  for (const Edge& e : g.edges()) keyed.push_back({unit(rng), {e.a, e.b, +1}});

  const auto decoys = static_cast<std::size_t>(std::ceil(churn * static_cast<double>(g.edge_count())));
  const std::uint64_t slots = static_cast<std::uint64_t>(g.left_size()) * g.right_size();
  if (slots > 0) {
    std::uniform_int_distribution<std::uint64_t> pick(0, slots - 1);
    for (std::size_t i = 0; i < decoys; ++i) {
      // prefer slots outside g so that decoys are observable in outputs
      Edge e = slot_edge(pick(rng), g.right_size());
      for (int tries = 0; tries < 32 && g.has_edge(e); ++tries) e = slot_edge(pick(rng), g.right_size());
      double insert_key = unit(rng);
      double delete_key = std::uniform_real_distribution<double>(insert_key, 1.0)(rng);
      keyed.push_back({insert_key, {e.a, e.b, +1}});
      keyed.push_back({delete_key, {e.a, e.b, -1}});
    }
  }
  // stable: equal keys keep insert-before-delete
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const Keyed& x, const Keyed& y) { return x.key < y.key; });

  UpdateStream s;
  s.left_size = g.left_size();
  s.right_size = g.right_size();
  s.multiplicity_cap = 1;
  s.updates.reserve(keyed.size());
  for (const Keyed& k : keyed) s.updates.push_back(k.update);
  return s;
}

void write_stream(std::ostream& out, const UpdateStream& s) {
  out << "p ts " << s.left_size << ' ' << s.right_size << ' ' << s.multiplicity_cap << '\n';
  for (const EdgeUpdate& u : s.updates) {
    out << "u " << u.a << ' ' << u.b << ' ' << (u.delta > 0 ? "+1" : "-1") << '\n';
  }
}

UpdateStream read_stream(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<UpdateStream> s;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "p") {
      if (s) throw ParseError(lineno, "duplicate header");
      std::string kind;
      long long l = -1, r = -1, cap = 0;
      if (!(ls >> kind >> l >> r >> cap) || kind != "ts" || l < 0 || r < 0 || cap < 1) {
        throw ParseError(lineno, "bad stream header, expected 'p ts <left> <right> <cap>'");
      }
      s.emplace();
      s->left_size = static_cast<std::size_t>(l);
      s->right_size = static_cast<std::size_t>(r);
      s->multiplicity_cap = cap;
    } else if (tag == "u") {
      if (!s) throw ParseError(lineno, "update before header");
      long long a = -1, b = -1;
      std::string delta;
      if (!(ls >> a >> b >> delta)) throw ParseError(lineno, "bad update line");
      if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= s->left_size ||
          static_cast<std::size_t>(b) >= s->right_size) {
        throw ParseError(lineno, "update endpoint out of range");
      }
      if (delta != "+1" && delta != "-1") throw ParseError(lineno, "delta must be +1 or -1");
      s->updates.push_back({static_cast<Vertex>(a), static_cast<Vertex>(b), delta == "+1" ? 1 : -1});
    } else {
      throw ParseError(lineno, "unknown line tag '" + tag + "'");
    }
    std::string rest;
    if (ls >> rest) throw ParseError(lineno, "trailing tokens");
  }
  if (!s) throw ParseError(lineno, "missing 'p ts' header");
  return std::move(*s);
}

void write_stream_file(const std::string& path, const UpdateStream& s) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write stream file '" + path + "'");
  write_stream(out, s);
}

UpdateStream read_stream_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stream file '" + path + "'");
  return read_stream(in);
}

}  // namespace dynmatch
