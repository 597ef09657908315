#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace mrx {

/// Fixed-width dynamic bitset used for planner states and edit masks.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

  std::size_t size() const noexcept { return size_; }

  bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) noexcept { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool none() const noexcept {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  /// True when every bit of *this is also set in `other`.
  bool is_subset_of(const Bitset& other) const noexcept {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & ~other.words_[k]) return false;
    return true;
  }

  Bitset& operator|=(const Bitset& o) noexcept {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  Bitset& operator&=(const Bitset& o) noexcept {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }
  Bitset& operator^=(const Bitset& o) noexcept {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= o.words_[k];
    return *this;
  }
  friend Bitset operator^(Bitset a, const Bitset& b) { return a ^= b; }
  friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
  friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }

  /// Indices of set bits in increasing order.
  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t w = words_[k];
      while (w) {
        out.push_back(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
    return out;
  }

  bool operator==(const Bitset&) const = default;
  /// Lexicographic by index: the set whose lowest differing index is
  /// present orders first.
  bool lex_less(const Bitset& o) const noexcept {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t d = words_[k] ^ o.words_[k];
      if (d) return (words_[k] >> std::countr_zero(d)) & 1u;
    }
    return false;
  }

  std::size_t hash() const noexcept {
    std::size_t h = size_ * 0x9e3779b97f4a7c15ull;
    for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct BitsetHash {
  std::size_t operator()(const Bitset& b) const noexcept { return b.hash(); }
};

}  // namespace mrx
