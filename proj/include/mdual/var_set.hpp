#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace mdual {

/// Upper bound on the universe size accepted anywhere in the library.
inline constexpr int kMaxVars = 4096;

/// Dense set of variable indices backed by 64-bit blocks.
///
/// Bit `v` stands for variable `x_v`; indices are 1-based, so bit 0 is never
/// set. The block count is fixed by the universe size given at construction.
/// Sets built for different universe sizes may still be compared and combined:
/// missing blocks read as zero.
class VarSet {
 public:
  using Block = std::uint64_t;
  static constexpr int kBlockBits = 64;

  VarSet() = default;

  explicit VarSet(int n) : blocks_(block_count(n), 0) {}

  VarSet(int n, std::initializer_list<int> vars) : VarSet(n) {
    for (int v : vars) insert(v);
  }

  static VarSet full(int n) {
    VarSet s(n);
    for (int v = 1; v <= n; ++v) s.insert(v);
    return s;
  }

  static std::size_t block_count(int n) {
    if (n < 0 || n > kMaxVars) throw std::length_error("universe size out of range");
    return static_cast<std::size_t>(n) / kBlockBits + 1;
  }

  bool contains(int v) const {
    auto b = static_cast<std::size_t>(v) / kBlockBits;
    return b < blocks_.size() && ((blocks_[b] >> (v % kBlockBits)) & 1U);
  }

  void insert(int v) {
    auto b = static_cast<std::size_t>(v) / kBlockBits;
    if (b >= blocks_.size()) blocks_.resize(b + 1, 0);
    blocks_[b] |= Block{1} << (v % kBlockBits);
  }

  void erase(int v) {
    auto b = static_cast<std::size_t>(v) / kBlockBits;
    if (b < blocks_.size()) blocks_[b] &= ~(Block{1} << (v % kBlockBits));
  }

  bool empty() const {
    return std::all_of(blocks_.begin(), blocks_.end(), [](Block b) { return b == 0; });
  }

  int size() const {
    int c = 0;
    for (Block b : blocks_) c += std::popcount(b);
    return c;
  }

  bool intersects(const VarSet& o) const {
    std::size_t k = std::min(blocks_.size(), o.blocks_.size());
    for (std::size_t i = 0; i < k; ++i)
      if (blocks_[i] & o.blocks_[i]) return true;
    return false;
  }

  bool is_subset_of(const VarSet& o) const {
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      Block other = i < o.blocks_.size() ? o.blocks_[i] : 0;
      if (blocks_[i] & ~other) return false;
    }
    return true;
  }

  VarSet& operator|=(const VarSet& o) {
    if (o.blocks_.size() > blocks_.size()) blocks_.resize(o.blocks_.size(), 0);
    for (std::size_t i = 0; i < o.blocks_.size(); ++i) blocks_[i] |= o.blocks_[i];
    return *this;
  }

  VarSet& operator&=(const VarSet& o) {
    for (std::size_t i = 0; i < blocks_.size(); ++i)
      blocks_[i] &= i < o.blocks_.size() ? o.blocks_[i] : 0;
    return *this;
  }

  VarSet& operator-=(const VarSet& o) {
    std::size_t k = std::min(blocks_.size(), o.blocks_.size());
    for (std::size_t i = 0; i < k; ++i) blocks_[i] &= ~o.blocks_[i];
    return *this;
  }

  friend VarSet operator|(VarSet a, const VarSet& b) { return a |= b; }
  friend VarSet operator&(VarSet a, const VarSet& b) { return a &= b; }
  friend VarSet operator-(VarSet a, const VarSet& b) { return a -= b; }

  /// Keeps only variables with index <= i.
  VarSet prefix(int i) const {
    VarSet r = *this;
    for (std::size_t b = 0; b < r.blocks_.size(); ++b) {
      long lo = static_cast<long>(b) * kBlockBits;
      if (lo > i) {
        r.blocks_[b] = 0;
      } else if (lo + kBlockBits - 1 > i) {
        int keep = i - static_cast<int>(lo) + 1;
        r.blocks_[b] &= (Block{1} << keep) - 1;
      }
    }
    return r;
  }

  /// Largest variable index in the set, 0 when empty.
  int max() const {
    for (std::size_t b = blocks_.size(); b-- > 0;)
      if (blocks_[b])
        return static_cast<int>(b) * kBlockBits + (kBlockBits - 1 - std::countl_zero(blocks_[b]));
    return 0;
  }

  /// Smallest variable index in the set, 0 when empty.
  int min() const {
    for (std::size_t b = 0; b < blocks_.size(); ++b)
      if (blocks_[b]) return static_cast<int>(b) * kBlockBits + std::countr_zero(blocks_[b]);
    return 0;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      Block w = blocks_[b];
      while (w) {
        int bit = std::countr_zero(w);
        f(static_cast<int>(b) * kBlockBits + bit);
        w &= w - 1;
      }
    }
  }

  std::vector<int> to_vector() const {
    std::vector<int> out;
    for_each([&](int v) { out.push_back(v); });
    return out;
  }

  friend bool operator==(const VarSet& a, const VarSet& b) {
    std::size_t k = std::max(a.blocks_.size(), b.blocks_.size());
    for (std::size_t i = 0; i < k; ++i) {
      Block x = i < a.blocks_.size() ? a.blocks_[i] : 0;
      Block y = i < b.blocks_.size() ? b.blocks_[i] : 0;
      if (x != y) return false;
    }
    return true;
  }

  /// Orders by the term key sum_{v in s} 2^{n-v}: the set holding the smallest
  /// index where the two differ is the larger one.
  friend bool key_less(const VarSet& a, const VarSet& b) {
    std::size_t k = std::max(a.blocks_.size(), b.blocks_.size());
    for (std::size_t i = 0; i < k; ++i) {
      Block x = i < a.blocks_.size() ? a.blocks_[i] : 0;
      Block y = i < b.blocks_.size() ? b.blocks_[i] : 0;
      if (Block d = x ^ y) return (y & (d & (~d + 1))) != 0;
    }
    return false;
  }

  /// Structural order for use in ordered containers; unrelated to term keys.
  friend bool operator<(const VarSet& a, const VarSet& b) {
    std::size_t k = std::max(a.blocks_.size(), b.blocks_.size());
    for (std::size_t i = 0; i < k; ++i) {
      Block x = i < a.blocks_.size() ? a.blocks_[i] : 0;
      Block y = i < b.blocks_.size() ? b.blocks_[i] : 0;
      if (x != y) return x < y;
    }
    return false;
  }

  std::size_t hash() const {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    std::size_t last = blocks_.size();
    while (last > 0 && blocks_[last - 1] == 0) --last;
    for (std::size_t i = 0; i < last; ++i)
      h ^= std::hash<Block>{}(blocks_[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

 private:
  std::vector<Block> blocks_;
};

struct KeyLess {
  bool operator()(const VarSet& a, const VarSet& b) const { return key_less(a, b); }
};

struct VarSetHash {
  std::size_t operator()(const VarSet& s) const { return s.hash(); }
};

}  // namespace mdual
