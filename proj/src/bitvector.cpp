#include "sgdq/bitvector.hpp"

#include <algorithm>
#include <stdexcept>

namespace sgdq {
namespace {

// Accumulates (value, length) runs into canonical form.
struct RunWriter {
  bool first_bit = false;
  std::vector<std::uint32_t> runs;
  bool last = false;

  void append(bool value, std::uint32_t len) {
    if (len == 0) return;
    if (runs.empty()) {
      first_bit = value;
      runs.push_back(len);
    } else if (last == value) {
      runs.back() += len;
    } else {
      runs.push_back(len);
    }
    last = value;
  }
};

template <typename Op>
BitVector combine(const BitVector& a, const BitVector& b, Op op) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("BitVector length mismatch");
  }
  RunWriter w;
  const auto& ra = a.runs();
  const auto& rb = b.runs();
  std::size_t ia = 0, ib = 0;
  std::uint32_t left_a = ra.empty() ? 0 : ra[0];
  std::uint32_t left_b = rb.empty() ? 0 : rb[0];
  bool va = a.first_bit(), vb = b.first_bit();
  while (ia < ra.size() && ib < rb.size()) {
    std::uint32_t step = std::min(left_a, left_b);
    w.append(op(va, vb), step);
    left_a -= step;
    left_b -= step;
    if (left_a == 0 && ++ia < ra.size()) {
      left_a = ra[ia];
      va = !va;
    }
    if (left_b == 0 && ++ib < rb.size()) {
      left_b = rb[ib];
      vb = !vb;
    }
  }
  return BitVector::from_runs(a.size(), w.first_bit, std::move(w.runs));
}

}  // namespace

BitVector BitVector::zeros(std::uint32_t length) {
  BitVector v;
  v.length_ = length;
  if (length > 0) v.runs_.push_back(length);
  return v;
}

BitVector BitVector::ones(std::uint32_t length) {
  BitVector v = zeros(length);
  v.first_bit_ = length > 0;
  return v;
}

BitVector BitVector::from_string(std::string_view bits) {
  RunWriter w;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("bit string");
    w.append(c == '1', 1);
  }
  return from_runs(static_cast<std::uint32_t>(bits.size()), w.first_bit,
                   std::move(w.runs));
}

BitVector BitVector::from_bools(std::span<const bool> bits) {
  RunWriter w;
  for (bool b : bits) w.append(b, 1);
  return from_runs(static_cast<std::uint32_t>(bits.size()), w.first_bit,
                   std::move(w.runs));
}

BitVector BitVector::from_positions(std::uint32_t length,
                                    std::span<const std::uint32_t> positions) {
  BitVectorBuilder b(length);
  for (std::uint32_t p : positions) b.set(p);
  return std::move(b).finish();
}

BitVector BitVector::from_runs(std::uint32_t length, bool first_bit,
                               std::vector<std::uint32_t> runs) {
  std::uint64_t total = 0;
  for (std::uint32_t r : runs) total += r;
  if (total != length) throw std::invalid_argument("runs do not sum to length");
  BitVector v;
  v.length_ = length;
  bool canonical = !runs.empty() || length == 0;
  for (std::uint32_t r : runs) canonical = canonical && r > 0;
  if (canonical) {
    v.first_bit_ = length > 0 && first_bit;
    v.runs_ = std::move(runs);
    return v;
  }
  RunWriter w;
  bool value = first_bit;
  for (std::uint32_t r : runs) {
    w.append(value, r);
    value = !value;
  }
  v.first_bit_ = w.first_bit;
  v.runs_ = std::move(w.runs);
  return v;
}

bool BitVector::test(std::uint32_t pos) const {
  if (pos >= length_) return false;
  std::uint32_t start = 0;
  bool value = first_bit_;
  for (std::uint32_t r : runs_) {
    if (pos < start + r) return value;
    start += r;
    value = !value;
  }
  return false;
}

std::uint32_t BitVector::count() const {
  std::uint32_t total = 0;
  for (std::size_t i = first_bit_ ? 0 : 1; i < runs_.size(); i += 2) {
    total += runs_[i];
  }
  return total;
}

std::uint32_t BitVector::rank_range(std::uint32_t lo, std::uint32_t hi) const {
  if (lo > hi || hi >= length_) throw std::out_of_range("rank_range");
  std::uint32_t total = 0;
  std::uint32_t start = 0;
  bool value = first_bit_;
  for (std::uint32_t r : runs_) {
    std::uint32_t end = start + r;  // exclusive
    if (start > hi) break;
    if (value) {
      std::uint32_t a = std::max(start, lo);
      std::uint32_t b = std::min(end - 1, hi);
      if (a <= b) total += b - a + 1;
    }
    start = end;
    value = !value;
  }
  return total;
}

std::vector<std::uint32_t> BitVector::ones() const {
  std::vector<std::uint32_t> out;
  out.reserve(count());
  for_each_one([&](std::uint32_t p) { out.push_back(p); });
  return out;
}

std::string BitVector::to_string() const {
  std::string s;
  s.reserve(length_);
  bool value = first_bit_;
  for (std::uint32_t r : runs_) {
    s.append(r, value ? '1' : '0');
    value = !value;
  }
  return s;
}

BitVector bv_and(const BitVector& a, const BitVector& b) {
  return combine(a, b, [](bool x, bool y) { return x && y; });
}
BitVector bv_or(const BitVector& a, const BitVector& b) {
  return combine(a, b, [](bool x, bool y) { return x || y; });
}
BitVector bv_and_not(const BitVector& a, const BitVector& b) {
  return combine(a, b, [](bool x, bool y) { return x && !y; });
}

void BitVectorBuilder::append(bool value, std::uint32_t len) {
  if (len == 0) return;
  if (runs_.empty()) {
    first_bit_ = value;
    runs_.push_back(len);
    return;
  }
  bool last = first_bit_ ^ ((runs_.size() - 1) % 2 == 1);
  if (last == value) {
    runs_.back() += len;
  } else {
    runs_.push_back(len);
  }
}

void BitVectorBuilder::set(std::uint32_t pos) {
  if (pos >= length_) throw std::out_of_range("BitVectorBuilder::set");
  if (pos < next_) {
    if (pos + 1 == next_) return;  // repeated last position
    throw std::invalid_argument("BitVectorBuilder positions must increase");
  }
  append(false, pos - next_);
  append(true, 1);
  next_ = pos + 1;
}

BitVector BitVectorBuilder::finish() && {
  append(false, length_ - next_);
  return BitVector::from_runs(length_, first_bit_, std::move(runs_));
}

DenseBits::DenseBits(std::uint32_t length, bool value)
    : length_(length), words_((length + 63) / 64, value ? ~std::uint64_t{0} : 0) {
  if (value && (length & 63)) {
    words_.back() &= (std::uint64_t{1} << (length & 63)) - 1;
  }
}

DenseBits::DenseBits(const BitVector& v) : DenseBits(v.size(), false) {
  std::uint32_t start = 0;
  bool value = v.first_bit();
  for (std::uint32_t r : v.runs()) {
    if (value) {
      for (std::uint32_t i = start; i < start + r; ++i) set(i);
    }
    start += r;
    value = !value;
  }
}

std::uint32_t DenseBits::count() const {
  std::uint32_t total = 0;
  for (std::uint64_t w : words_) total += std::popcount(w);
  return total;
}

std::uint32_t DenseBits::count_range(std::uint32_t lo, std::uint32_t hi) const {
  if (length_ == 0) return 0;
  hi = std::min(hi, length_ - 1);
  std::uint32_t total = 0;
  for (std::uint32_t i = lo; i <= hi;) {
    if ((i & 63) == 0 && i + 63 <= hi) {
      total += std::popcount(words_[i >> 6]);
      i += 64;
    } else {
      total += test(i);
      ++i;
    }
  }
  return total;
}

bool DenseBits::intersects(const DenseBits& other) const {
  std::size_t n = std::min(words_.size(), other.words_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (words_[i] & other.words_[i]) return true;
  }
  return false;
}

DenseBits& DenseBits::operator&=(const DenseBits& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    words_[i] &= i < other.words_.size() ? other.words_[i] : 0;
  }
  return *this;
}

BitVector DenseBits::compress() const {
  BitVectorBuilder b(length_);
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t bits = words_[w];
    while (bits) {
      int tz = std::countr_zero(bits);
      b.set(static_cast<std::uint32_t>(w * 64 + tz));
      bits &= bits - 1;
    }
  }
  return std::move(b).finish();
}

}  // namespace sgdq
