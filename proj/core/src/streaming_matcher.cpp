#include "dynmatch/streaming_matcher.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dynmatch/errors.hpp"
#include "dynmatch/seeding.hpp"

namespace dynmatch {

std::vector<Vertex> choose_sampled_vertices(std::size_t left_size, std::size_t k,
                                            std::uint64_t seed) {
  const std::size_t m = std::min(k, left_size);
  std::vector<Vertex> pool(left_size);
  std::iota(pool.begin(), pool.end(), Vertex{0});
  Rng rng = make_rng(derive_seed(seed, {seed_domain::kLeftSubset}));
  for (std::size_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, left_size - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(m);
  std::sort(pool.begin(), pool.end());
  return pool;
}

double MatcherConfig::effective_delta() const noexcept {
  if (delta) return *delta;
  const double n = static_cast<double>(std::max<std::size_t>(vertex_count(), 2));
  return 1.0 / (n * n);
}

std::size_t MatcherConfig::samplers_per_vertex() const noexcept {
  const double n = static_cast<double>(std::max<std::size_t>(vertex_count(), 1));
  const double raw = std::ceil(c * static_cast<double>(k) * std::log2(n));
  return std::max<std::size_t>(1, static_cast<std::size_t>(raw));
}

void MatcherConfig::validate() const {
  if (k < 1) throw InvalidParameter("k must be >= 1");
  if (!(c >= 1.0) || !std::isfinite(c)) throw InvalidParameter("c must be >= 1");
  const double d = effective_delta();
  if (!(d > 0.0 && d < 0.5)) throw InvalidParameter("delta must lie in (0, 1/2)");
  if (left_size >= UINT32_MAX || right_size >= UINT32_MAX) {
    throw InvalidParameter("graph side too large");
  }
}

SamplerBank::SamplerBank(std::uint64_t dimension, std::size_t count, double delta,
                         std::uint64_t seed) {
  sketches_.reserve(count);
  for (std::size_t j = 0; j < count; ++j) sketches_.emplace_back(dimension, delta, derive_seed(seed, {j}));
}

void SamplerBank::update(Vertex b, int delta) {
  for (L0Sketch& sk : sketches_) sk.update(b, delta);
}

std::vector<Vertex> SamplerBank::recover(std::size_t limit) const {
  std::vector<Vertex> out;
  for (const L0Sketch& sk : sketches_) {
    if (out.size() >= limit) break;
    SampleResult r = sk.sample();
    if (!r.has_index()) continue;
    auto b = static_cast<Vertex>(r.index);
    if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
  }
  return out;
}

std::size_t SamplerBank::cell_count() const noexcept {
  std::size_t n = 0;
  for (const L0Sketch& sk : sketches_) n += sk.cell_count();
  return n;
}

std::size_t SamplerBank::serialized_bytes() const noexcept {
  std::size_t n = 0;
  for (const L0Sketch& sk : sketches_) n += sk.serialized_size();
  return n;
}

StreamingMatcher::StreamingMatcher(MatcherConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  sampled_ = choose_sampled_vertices(cfg_.left_size, cfg_.k, cfg_.seed);
  slot_.assign(cfg_.left_size, kUnsampled);
  const std::uint64_t dimension = std::max<std::size_t>(cfg_.right_size, 1);
  const std::size_t per_vertex = cfg_.samplers_per_vertex();
  const double delta = cfg_.effective_delta();
  banks_.reserve(sampled_.size());
  for (std::size_t i = 0; i < sampled_.size(); ++i) {
    slot_[sampled_[i]] = static_cast<std::uint32_t>(i);
    banks_.emplace_back(dimension, per_vertex, delta,
                        derive_seed(cfg_.seed, {seed_domain::kSampler, sampled_[i]}));
  }
}

bool StreamingMatcher::is_sampled(Vertex a) const noexcept {
  return a < slot_.size() && slot_[a] != kUnsampled;
}

const SamplerBank& StreamingMatcher::bank(Vertex a) const {
  if (!is_sampled(a)) throw InvalidParameter("vertex " + std::to_string(a) + " is not sampled");
  return banks_[slot_[a]];
}

void StreamingMatcher::process(const EdgeUpdate& u) {
  if (finalized_) throw OnePassViolation("update after finalize: the stream is single-pass");
  if (u.a >= cfg_.left_size || u.b >= cfg_.right_size) {
    throw IndexOutOfRange("update (" + std::to_string(u.a) + "," + std::to_string(u.b) +
                          ") outside matcher dimensions");
  }
  const std::uint32_t s = slot_[u.a];
  if (s == kUnsampled) return;
  banks_[s].update(u.b, u.delta);
}

void StreamingMatcher::consume(const UpdateStream& s) {
  if (s.left_size != cfg_.left_size || s.right_size != cfg_.right_size) {
    throw InvalidParameter("stream dimensions do not match the matcher configuration");
  }
  for (const EdgeUpdate& u : s.updates) process(u);
}

MatcherResult StreamingMatcher::finalize() {
  finalized_ = true;
  MatcherResult out;
  for (std::size_t i = 0; i < sampled_.size(); ++i) {
    for (Vertex b : banks_[i].recover(cfg_.k)) out.recovered.push_back({sampled_[i], b});
  }
  std::sort(out.recovered.begin(), out.recovered.end());
  BipartiteGraph stored(cfg_.left_size, cfg_.right_size, out.recovered);
  out.matching = maximum_matching(stored);
  return out;
}

SpaceReport StreamingMatcher::space_report() const {
  SpaceReport r;
  r.sampled_vertices = sampled_.size();
  r.samplers_per_vertex = cfg_.samplers_per_vertex();
  for (const SamplerBank& bank : banks_) {
    r.sketches += bank.sketches().size();
    r.cells += bank.cell_count();
    r.bytes += bank.serialized_bytes();
  }
  const double log_n =
      std::max(1.0, std::log2(static_cast<double>(std::max<std::size_t>(cfg_.vertex_count(), 1))));
  const double k = static_cast<double>(cfg_.k);
  r.sketch_bound = (cfg_.c + 1.0) * k * k * log_n;
  r.within_bound = static_cast<double>(r.sketches) <= r.sketch_bound;
  return r;
}

MatcherResult run_streaming_matcher(const MatcherConfig& cfg, const UpdateStream& s) {
  StreamingMatcher m(cfg);
  m.consume(s);
  return m.finalize();
}

}  // namespace dynmatch
