#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sgdq {

// Fixed-length bitset stored in D-Gap form: the value of bit 0 followed by
// the lengths of alternating runs. The encoding is canonical (no zero-length
// runs, adjacent runs differ), so structural equality is bit equality.
// Positions are 0-based.
class BitVector {
 public:
  BitVector() = default;

  static BitVector zeros(std::uint32_t length);
  static BitVector ones(std::uint32_t length);
  // "000110011" -> bit 0 is the leftmost character.
  static BitVector from_string(std::string_view bits);
  static BitVector from_bools(std::span<const bool> bits);
  // `positions` must be strictly increasing and < length.
  static BitVector from_positions(std::uint32_t length,
                                  std::span<const std::uint32_t> positions);
  // Takes an arbitrary run list and canonicalizes it. Throws
  // std::invalid_argument if the runs do not sum to `length`.
  static BitVector from_runs(std::uint32_t length, bool first_bit,
                             std::vector<std::uint32_t> runs);

  std::uint32_t size() const { return length_; }
  bool first_bit() const { return first_bit_; }
  const std::vector<std::uint32_t>& runs() const { return runs_; }

  bool test(std::uint32_t pos) const;
  std::uint32_t count() const;
  bool none() const { return !first_bit_ && runs_.size() <= 1; }
  // Number of set bits in [lo, hi] (inclusive). Throws std::out_of_range.
  std::uint32_t rank_range(std::uint32_t lo, std::uint32_t hi) const;
  std::vector<std::uint32_t> ones() const;
  std::string to_string() const;

  template <typename F>
  void for_each_one(F&& f) const {
    std::uint32_t pos = 0;
    bool value = first_bit_;
    for (std::uint32_t run : runs_) {
      if (value) {
        for (std::uint32_t i = 0; i < run; ++i) f(pos + i);
      }
      pos += run;
      value = !value;
    }
  }

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::uint32_t length_ = 0;
  bool first_bit_ = false;
  std::vector<std::uint32_t> runs_;
};

// All binary operations work run-by-run on the compressed form and throw
// std::invalid_argument on a length mismatch.
BitVector bv_and(const BitVector& a, const BitVector& b);
BitVector bv_or(const BitVector& a, const BitVector& b);
BitVector bv_and_not(const BitVector& a, const BitVector& b);

inline std::vector<std::uint32_t> bv_iter_ones(const BitVector& v) {
  return v.ones();
}
inline std::uint32_t bv_rank_range(const BitVector& v, std::uint32_t lo,
                                   std::uint32_t hi) {
  return v.rank_range(lo, hi);
}

// Appends set positions in increasing order and produces a BitVector.
class BitVectorBuilder {
 public:
  explicit BitVectorBuilder(std::uint32_t length) : length_(length) {}
  void set(std::uint32_t pos);
  BitVector finish() &&;

 private:
  std::uint32_t length_;
  std::vector<std::uint32_t> runs_;
  bool first_bit_ = false;
  std::uint32_t next_ = 0;  // first position not yet covered by runs_

  void append(bool value, std::uint32_t len);
};

// Uncompressed bitset for O(1) membership checks on hot paths.
class DenseBits {
 public:
  DenseBits() = default;
  explicit DenseBits(std::uint32_t length, bool value = false);
  explicit DenseBits(const BitVector& v);

  std::uint32_t size() const { return length_; }
  bool test(std::uint32_t pos) const {
    return pos < length_ && ((words_[pos >> 6] >> (pos & 63)) & 1u);
  }
  void set(std::uint32_t pos) { words_[pos >> 6] |= std::uint64_t{1} << (pos & 63); }
  void reset(std::uint32_t pos) {
    words_[pos >> 6] &= ~(std::uint64_t{1} << (pos & 63));
  }
  std::uint32_t count() const;
  // Set bits in [lo, hi] (inclusive, clamped to size).
  std::uint32_t count_range(std::uint32_t lo, std::uint32_t hi) const;
  bool intersects(const DenseBits& other) const;
  DenseBits& operator&=(const DenseBits& other);
  BitVector compress() const;

 private:
  std::uint32_t length_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace sgdq
