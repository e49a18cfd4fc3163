#include "dynmatch/l0_sampler.hpp"

#include <bit>
#include <cmath>
#include <cstring>

#include "dynmatch/errors.hpp"
#include "dynmatch/seeding.hpp"

namespace dynmatch {

namespace mersenne61 {

namespace {
__extension__ using u128 = unsigned __int128;

constexpr std::uint64_t reduce(std::uint64_t x) noexcept {
  x = (x & kPrime) + (x >> 61);
  return x >= kPrime ? x - kPrime : x;
}
}  // namespace

std::uint64_t mul(std::uint64_t x, std::uint64_t y) noexcept {
  u128 p = static_cast<u128>(x) * y;
  std::uint64_t lo = static_cast<std::uint64_t>(p) & kPrime;
  std::uint64_t hi = static_cast<std::uint64_t>(p >> 61);
  return reduce(lo + hi);
}

std::uint64_t pow(std::uint64_t base, std::uint64_t exp) noexcept {
  std::uint64_t result = 1;
  base = reduce(base);
  while (exp > 0) {
    if (exp & 1) result = mul(result, base);
    base = mul(base, base);
    exp >>= 1;
  }
  return result;
}

std::uint64_t from_signed(std::int64_t v) noexcept {
  if (v >= 0) return reduce(static_cast<std::uint64_t>(v) % kPrime);
  std::uint64_t mag = (static_cast<std::uint64_t>(-(v + 1)) + 1) % kPrime;
  return mag == 0 ? 0 : kPrime - mag;
}

}  // namespace mersenne61

namespace {

constexpr std::uint32_t kMagic = 0x4b53304c;  // "L0SK"
constexpr std::uint32_t kFormatVersion = 1;
constexpr std::size_t kHeaderBytes = 4 + 4 + 8 + 8 + 8 + 4 + 4;
constexpr std::size_t kCellBytes = 8 + 8 + 8;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint64_t u64() { return take(8); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(take(4)); }

 private:
  std::uint64_t take(std::size_t n) {
    if (pos_ + n > bytes_.size()) throw InvalidParameter("truncated sketch image");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += n;
    return v;
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::size_t L0Sketch::levels_for(std::uint64_t dimension) {
  if (dimension <= 1) return 1;
  return static_cast<std::size_t>(std::bit_width(dimension - 1)) + 1;  // ceil(log2 N) + 1
}

std::size_t L0Sketch::repetitions_for(double delta) {
  return static_cast<std::size_t>(std::ceil(std::log2(1.0 / delta)));
}

L0Sketch::L0Sketch(std::uint64_t dimension, double delta, std::uint64_t seed)
    : dimension_(dimension), delta_(delta), seed_(seed) {
  if (dimension == 0) throw InvalidParameter("sketch dimension must be >= 1");
  if (!(delta > 0.0 && delta < 0.5)) throw InvalidParameter("sketch delta must lie in (0, 1/2)");
  if (dimension >= mersenne61::kPrime) throw InvalidParameter("sketch dimension too large");

  levels_ = levels_for(dimension);
  const std::size_t reps = repetitions_for(delta);
  hashes_.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    InstanceHash h;
    h.alpha = 1 + derive_seed(seed, {r, 0}) % (mersenne61::kPrime - 1);
    h.beta = derive_seed(seed, {r, 1}) % mersenne61::kPrime;
    h.z = 2 + derive_seed(seed, {r, 2}) % (mersenne61::kPrime - 2);
    hashes_.push_back(h);
  }
  cells_.assign(reps * levels_, SketchCell{});
}

std::size_t L0Sketch::level_of(const InstanceHash& h, std::uint64_t index) const noexcept {
  std::uint64_t v = mersenne61::mul(h.alpha, index) + h.beta;
  if (v >= mersenne61::kPrime) v -= mersenne61::kPrime;
  if (v == 0) return levels_ - 1;
  return std::min<std::size_t>(static_cast<std::size_t>(std::countr_zero(v)), levels_ - 1);
}

void L0Sketch::update(std::uint64_t index, std::int64_t value) {
  if (index >= dimension_) {
    throw IndexOutOfRange("sketch index " + std::to_string(index) + " >= dimension " +
                          std::to_string(dimension_));
  }
  const std::uint64_t value_mod = mersenne61::from_signed(value);
  const auto weighted_index = static_cast<std::int64_t>(index) * value;
  for (std::size_t r = 0; r < hashes_.size(); ++r) {
    const InstanceHash& h = hashes_[r];
    const std::uint64_t term = mersenne61::mul(value_mod, mersenne61::pow(h.z, index));
    const std::size_t top = level_of(h, index);
    SketchCell* row = &cells_[r * levels_];
    for (std::size_t l = 0; l <= top; ++l) {
      row[l].count += value;
      row[l].index_sum += weighted_index;
      std::uint64_t f = row[l].fingerprint + term;
      row[l].fingerprint = f >= mersenne61::kPrime ? f - mersenne61::kPrime : f;
    }
  }
}

bool L0Sketch::one_sparse(const InstanceHash& h, const SketchCell& c,
                          std::uint64_t* index) const noexcept {
  if (c.count == 0) return false;
  if (c.index_sum % c.count != 0) return false;
  const std::int64_t i = c.index_sum / c.count;
  if (i < 0 || static_cast<std::uint64_t>(i) >= dimension_) return false;
  const std::uint64_t expected =
      mersenne61::mul(mersenne61::from_signed(c.count),
                      mersenne61::pow(h.z, static_cast<std::uint64_t>(i)));
  if (expected != c.fingerprint) return false;
  *index = static_cast<std::uint64_t>(i);
  return true;
}

SampleResult L0Sketch::sample() const {
  if (is_zero()) return SampleResult::empty();
  for (std::size_t l = 0; l < levels_; ++l) {
    for (std::size_t r = 0; r < hashes_.size(); ++r) {
      std::uint64_t index = 0;
      if (one_sparse(hashes_[r], cells_[r * levels_ + l], &index)) return SampleResult::found(index);
    }
  }
  return SampleResult::fail();
}

L0Sketch& L0Sketch::operator+=(const L0Sketch& other) {
  if (dimension_ != other.dimension_ || delta_ != other.delta_ || seed_ != other.seed_) {
    throw SeedMismatch("cannot merge sketches with different dimension, delta or seed");
  }
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    SketchCell& c = cells_[i];
    const SketchCell& o = other.cells_[i];
    c.count += o.count;
    c.index_sum += o.index_sum;
    std::uint64_t f = c.fingerprint + o.fingerprint;
    c.fingerprint = f >= mersenne61::kPrime ? f - mersenne61::kPrime : f;
  }
  return *this;
}

L0Sketch merge(const L0Sketch& lhs, const L0Sketch& rhs) {
  L0Sketch out = lhs;
  out += rhs;
  return out;
}

bool L0Sketch::is_zero() const noexcept {
  for (const SketchCell& c : cells_) {
    if (c != SketchCell{}) return false;
  }
  return true;
}

std::size_t L0Sketch::serialized_size() const noexcept {
  return kHeaderBytes + kCellBytes * cells_.size();
}

std::vector<std::uint8_t> L0Sketch::serialize() const {
  std::vector<std::uint8_t> out;
  out.reserve(serialized_size());
  put_u32(out, kMagic);
  put_u32(out, kFormatVersion);
  put_u64(out, dimension_);
  put_u64(out, std::bit_cast<std::uint64_t>(delta_));
  put_u64(out, seed_);
  put_u32(out, static_cast<std::uint32_t>(hashes_.size()));
  put_u32(out, static_cast<std::uint32_t>(levels_));
  for (const SketchCell& c : cells_) {
    put_u64(out, static_cast<std::uint64_t>(c.count));
    put_u64(out, static_cast<std::uint64_t>(c.index_sum));
    put_u64(out, c.fingerprint);
  }
  return out;
}

L0Sketch L0Sketch::deserialize(std::span<const std::uint8_t> bytes) {
  Reader in(bytes);
  if (in.u32() != kMagic) throw InvalidParameter("not an l0 sketch image");
  if (std::uint32_t v = in.u32(); v != kFormatVersion) {
    throw InvalidParameter("unsupported sketch format version " + std::to_string(v));
  }
  const std::uint64_t dimension = in.u64();
  const double delta = std::bit_cast<double>(in.u64());
  const std::uint64_t seed = in.u64();
  L0Sketch sk(dimension, delta, seed);
  const std::uint32_t reps = in.u32();
  const std::uint32_t levels = in.u32();
  if (reps != sk.repetitions() || levels != sk.levels()) {
    throw InvalidParameter("sketch image layout disagrees with its parameters");
  }
  for (SketchCell& c : sk.cells_) {
    c.count = static_cast<std::int64_t>(in.u64());
    c.index_sum = static_cast<std::int64_t>(in.u64());
    c.fingerprint = in.u64();
    if (c.fingerprint >= mersenne61::kPrime) throw InvalidParameter("fingerprint out of field");
  }
  if (sk.serialized_size() != bytes.size()) throw InvalidParameter("trailing bytes in sketch image");
  return sk;
}

}  // namespace dynmatch
