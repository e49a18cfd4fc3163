#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dynmatch/graph.hpp"
#include "dynmatch/l0_sampler.hpp"
#include "dynmatch/turnstile_stream.hpp"

namespace dynmatch {

/// Uniformly random subset of [0, left_size) of size min(k, left_size),
/// drawn with a seeded partial Fisher-Yates shuffle. Returned ascending.
/// Streaming and SIM implementations share it so that equal seeds agree.
std::vector<Vertex> choose_sampled_vertices(std::size_t left_size, std::size_t k,
                                            std::uint64_t seed);

struct MatcherConfig {
  std::size_t left_size = 0;
  std::size_t right_size = 0;
  std::size_t k = 1;   // vertex sample size and per-vertex edge budget
  double c = 1.0;      // sampler multiplier
  std::optional<double> delta;  // per-sketch failure probability; default 1/n^2
  std::uint64_t seed = 0;

  std::size_t vertex_count() const noexcept { return left_size + right_size; }
  double effective_delta() const noexcept;
  /// ceil(c * k * log2 n), at least 1.
  std::size_t samplers_per_vertex() const noexcept;
  /// Throws InvalidParameter.
  void validate() const;
};

/// The l0-samplers attached to one sampled vertex, all over the
/// right_size-dimensional vector of its incident edge multiplicities.
class SamplerBank {
 public:
  SamplerBank(std::uint64_t dimension, std::size_t count, double delta, std::uint64_t seed);

  void update(Vertex b, int delta);

  /// Queries every sampler in index order and keeps the first `limit`
  /// distinct coordinates. Failed and empty samplers are skipped.
  std::vector<Vertex> recover(std::size_t limit) const;

  std::span<const L0Sketch> sketches() const noexcept { return sketches_; }
  std::size_t cell_count() const noexcept;
  std::size_t serialized_bytes() const noexcept;

  friend bool operator==(const SamplerBank&, const SamplerBank&) = default;

 private:
  std::vector<L0Sketch> sketches_;
};

struct MatcherResult {
  Matching matching;
  std::vector<Edge> recovered;  // union of the E'[a], sorted
};

struct SpaceReport {
  std::size_t sampled_vertices = 0;
  std::size_t samplers_per_vertex = 0;
  std::size_t sketches = 0;
  std::size_t cells = 0;
  std::size_t bytes = 0;
  double sketch_bound = 0.0;  // (c + 1) * k^2 * max(1, log2 n)
  bool within_bound = true;
};

/// One-pass turnstile implementation of the sample-k-vertices matching
/// algorithm: keep ceil(c*k*log2 n) l0-samplers per sampled left vertex,
/// recover up to k distinct neighbors each, and match the recovered edges
/// exactly.
class StreamingMatcher {
 public:
  explicit StreamingMatcher(MatcherConfig cfg);

  const MatcherConfig& config() const noexcept { return cfg_; }
  std::span<const Vertex> sampled_vertices() const noexcept { return sampled_; }
  bool is_sampled(Vertex a) const noexcept;
  /// Throws InvalidParameter if a is not sampled.
  const SamplerBank& bank(Vertex a) const;

  /// Feeds one update. Updates of unsampled vertices are dropped. Throws
  /// IndexOutOfRange, or OnePassViolation once finalize() has been called.
  void process(const EdgeUpdate& u);
  /// process() over the whole stream, in order. Dimensions must match.
  void consume(const UpdateStream& s);

  /// Seals the state and computes the output; later process() calls throw.
  MatcherResult finalize();
  bool finalized() const noexcept { return finalized_; }

  SpaceReport space_report() const;

  friend bool operator==(const StreamingMatcher& x, const StreamingMatcher& y) {
    return x.sampled_ == y.sampled_ && x.banks_ == y.banks_;
  }

 private:
  static constexpr std::uint32_t kUnsampled = UINT32_MAX;

  MatcherConfig cfg_;
  std::vector<Vertex> sampled_;
  std::vector<std::uint32_t> slot_;  // left vertex -> index into banks_
  std::vector<SamplerBank> banks_;
  bool finalized_ = false;
};

/// Convenience: run the matcher over a complete stream.
MatcherResult run_streaming_matcher(const MatcherConfig& cfg, const UpdateStream& s);

}  // namespace dynmatch
