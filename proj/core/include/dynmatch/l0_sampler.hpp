#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dynmatch {

/// 1-sparse recovery cell. Every field is a linear function of the sketched
/// vector x restricted to the cell's subsample.
struct SketchCell {
  std::int64_t count = 0;        // sum of x_i
  std::int64_t index_sum = 0;    // sum of i * x_i
  std::uint64_t fingerprint = 0;  // sum of x_i * z^i mod 2^61-1

  friend bool operator==(const SketchCell&, const SketchCell&) = default;
};

struct SampleResult {
  enum class Status { kIndex, kEmpty, kFail };

  Status status = Status::kFail;
  std::uint64_t index = 0;  // meaningful only for kIndex

  static SampleResult found(std::uint64_t i) { return {Status::kIndex, i}; }
  static SampleResult empty() { return {Status::kEmpty, 0}; }
  static SampleResult fail() { return {Status::kFail, 0}; }

  bool has_index() const noexcept { return status == Status::kIndex; }
  friend bool operator==(const SampleResult&, const SampleResult&) = default;
};

/// Linear l0-sampling sketch of an integer vector of a fixed dimension.
///
/// The sketch runs R = ceil(log2(1/delta)) independent instances. Each
/// instance hashes coordinates with a pairwise-independent map
/// h(i) = (alpha*i + beta) mod (2^61-1) and files coordinate i into nested
/// levels 0..min(ctz(h(i)), L-1), L = ceil(log2 N) + 1, so level l keeps a
/// 2^-l subsample. Each (instance, level) holds one SketchCell.
///
/// Two sketches are mergeable iff they agree on dimension, delta and seed.
class L0Sketch {
 public:
  /// Throws InvalidParameter unless dimension >= 1 and 0 < delta < 1/2.
  L0Sketch(std::uint64_t dimension, double delta, std::uint64_t seed);

  static std::size_t levels_for(std::uint64_t dimension);
  static std::size_t repetitions_for(double delta);

  /// x[index] += value. Throws IndexOutOfRange.
  void update(std::uint64_t index, std::int64_t value);

  /// A nonzero coordinate of x, kEmpty if x looks zero, kFail otherwise.
  ///
  /// Levels are scanned from the full sample downwards and, within a level,
  /// instances in index order; the first cell that passes the 1-sparse test
  /// wins.
  SampleResult sample() const;

  /// Cellwise sum. Throws SeedMismatch when the layouts differ.
  L0Sketch& operator+=(const L0Sketch& other);

  bool is_zero() const noexcept;

  std::uint64_t dimension() const noexcept { return dimension_; }
  double delta() const noexcept { return delta_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t levels() const noexcept { return levels_; }
  std::size_t repetitions() const noexcept { return hashes_.size(); }
  std::size_t cell_count() const noexcept { return cells_.size(); }
  std::span<const SketchCell> cells() const noexcept { return cells_; }
  const SketchCell& cell(std::size_t instance, std::size_t level) const {
    return cells_[instance * levels_ + level];
  }

  /// Versioned little-endian binary image: header followed by all cells.
  std::vector<std::uint8_t> serialize() const;
  std::size_t serialized_size() const noexcept;
  /// Throws InvalidParameter on a malformed or truncated image.
  static L0Sketch deserialize(std::span<const std::uint8_t> bytes);

  friend bool operator==(const L0Sketch&, const L0Sketch&) = default;

 private:
  struct InstanceHash {
    std::uint64_t alpha = 0;
    std::uint64_t beta = 0;
    std::uint64_t z = 0;

    friend bool operator==(const InstanceHash&, const InstanceHash&) = default;
  };

  std::size_t level_of(const InstanceHash& h, std::uint64_t index) const noexcept;
  bool one_sparse(const InstanceHash& h, const SketchCell& c, std::uint64_t* index) const noexcept;

  std::uint64_t dimension_;
  double delta_;
  std::uint64_t seed_;
  std::size_t levels_;
  std::vector<InstanceHash> hashes_;
  std::vector<SketchCell> cells_;  // instance-major
};

L0Sketch merge(const L0Sketch& lhs, const L0Sketch& rhs);

/// Arithmetic modulo the Mersenne prime 2^61-1 shared by hashes and fingerprints.
namespace mersenne61 {
inline constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;
std::uint64_t mul(std::uint64_t x, std::uint64_t y) noexcept;
std::uint64_t pow(std::uint64_t base, std::uint64_t exp) noexcept;
std::uint64_t from_signed(std::int64_t v) noexcept;
}  // namespace mersenne61

}  // namespace dynmatch
