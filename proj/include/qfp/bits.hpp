#pragma once

#include <qfp/errors.hpp>

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace qfp {

/// Fixed-length bit string packed into 64-bit words; bits past size() are
/// always zero.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  BitVector(std::initializer_list<int> bits) : BitVector(bits.size()) {
    std::size_t i = 0;
    for (int b : bits) set(i++, b != 0);
  }

  /// Uniformly random bits drawn one word at a time from a 64-bit engine.
  template <typename Rng>
  static BitVector random(std::size_t size, Rng& rng) {
    BitVector v(size);
    for (auto& w : v.words_) w = static_cast<std::uint64_t>(rng());
    v.clear_tail();
    return v;
  }

  std::size_t size() const { return size_; }
  const std::vector<std::uint64_t>& words() const { return words_; }

  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

  void set(std::size_t i, bool value) {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }

  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  std::size_t popcount() const {
    std::size_t total = 0;
    for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
  }

  bool any() const {
    for (auto w : words_)
      if (w != 0) return true;
    return false;
  }

  /// 64 bits starting at bit `start`; positions past size() read as zero.
  std::uint64_t window(std::size_t start) const {
    const std::size_t word = start >> 6;
    const unsigned shift = start & 63;
    if (word >= words_.size()) return 0;
    std::uint64_t out = words_[word] >> shift;
    if (shift != 0 && word + 1 < words_.size()) out |= words_[word + 1] << (64 - shift);
    return out;
  }

  BitVector reversed() const {
    BitVector out(size_);
    for (std::size_t i = 0; i < size_; ++i)
      if (get(i)) out.set(size_ - 1 - i, true);
    return out;
  }

  BitVector& operator^=(const BitVector& other) {
    detail::require(size_ == other.size_, "BitVector: length mismatch in xor");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
    return *this;
  }

  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
  friend bool operator==(const BitVector&, const BitVector&) = default;

  std::string to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i)
      if (get(i)) s[i] = '1';
    return s;
  }

 private:
  void clear_tail() {
    if (size_ % 64 != 0) words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

inline std::size_t hamming_distance(const BitVector& a, const BitVector& b) {
  return (a ^ b).popcount();
}

}  // namespace qfp
