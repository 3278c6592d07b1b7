#pragma once

#include <cstdint>
#include <vector>

namespace diamcover {

// Dynamic bitset, sized at construction. Used for vertex sets and for
// feasible-count sets indexed by clique-cover size.
struct DynBits {
  std::vector<uint64_t> w;
  int nbits = 0;

  DynBits() = default;
  explicit DynBits(int n) : w(static_cast<size_t>((n + 63) / 64), 0), nbits(n) {}

  void set(int i) { w[static_cast<size_t>(i) / 64] |= uint64_t(1) << (i % 64); }
  void reset(int i) { w[static_cast<size_t>(i) / 64] &= ~(uint64_t(1) << (i % 64)); }
  bool test(int i) const { return w[static_cast<size_t>(i) / 64] >> (i % 64) & 1; }

  bool any() const {
    for (uint64_t x : w)
      if (x) return true;
    return false;
  }

  int count() const {
    int c = 0;
    for (uint64_t x : w) c += __builtin_popcountll(x);
    return c;
  }

  int lowest() const {  // -1 when empty
    for (size_t i = 0; i < w.size(); ++i)
      if (w[i]) return static_cast<int>(i * 64 + static_cast<size_t>(__builtin_ctzll(w[i])));
    return -1;
  }

  DynBits& operator|=(const DynBits& o) {
    for (size_t i = 0; i < w.size(); ++i) w[i] |= o.w[i];
    return *this;
  }

  DynBits& operator&=(const DynBits& o) {
    for (size_t i = 0; i < w.size(); ++i) w[i] &= o.w[i];
    return *this;
  }

  bool subset_of(const DynBits& o) const {
    for (size_t i = 0; i < w.size(); ++i)
      if (w[i] & ~o.w[i]) return false;
    return true;
  }

  bool intersects(const DynBits& o) const {
    for (size_t i = 0; i < w.size(); ++i)
      if (w[i] & o.w[i]) return true;
    return false;
  }

  bool operator==(const DynBits& o) const { return nbits == o.nbits && w == o.w; }
  bool operator<(const DynBits& o) const { return w < o.w; }

  // this |= (o << k), dropping bits beyond nbits.
  void or_shifted(const DynBits& o, int k) {
    for (int i = 0; i < o.nbits; ++i)
      if (o.test(i) && i + k < nbits) set(i + k);
  }
};

}  // namespace diamcover
