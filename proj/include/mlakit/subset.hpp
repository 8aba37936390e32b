#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace mlakit {

/// Fixed-capacity bitset over the element indices of one algebra.  Capacity
/// is 256, matching the validator's hard order ceiling.  Value type; the
/// owning algebra is implicit (the universe size is carried along so equality
/// and complements behave).
class Subset {
 public:
  Subset() = default;
  explicit Subset(int universe) : n_(universe) {}

  static Subset singleton(int universe, int i) {
    Subset s(universe);
    s.add(i);
    return s;
  }

  static Subset full(int universe) {
    Subset s(universe);
    for (int i = 0; i < universe; ++i) s.add(i);
    return s;
  }

  int universe() const { return n_; }
  void add(int i) { w_[static_cast<unsigned>(i) >> 6] |= 1ull << (i & 63); }
  void remove(int i) { w_[static_cast<unsigned>(i) >> 6] &= ~(1ull << (i & 63)); }
  bool test(int i) const { return (w_[static_cast<unsigned>(i) >> 6] >> (i & 63)) & 1u; }

  int count() const {
    int c = 0;
    for (auto word : w_) c += __builtin_popcountll(word);
    return c;
  }

  bool empty() const {
    for (auto word : w_)
      if (word) return false;
    return true;
  }

  /// Superset test: does this contain every member of `o`?
  bool contains(const Subset& o) const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (o.w_[k] & ~w_[k]) return false;
    return true;
  }

  Subset intersect(const Subset& o) const {
    Subset r(n_);
    for (std::size_t k = 0; k < w_.size(); ++k) r.w_[k] = w_[k] & o.w_[k];
    return r;
  }

  Subset unite(const Subset& o) const {
    Subset r(n_);
    for (std::size_t k = 0; k < w_.size(); ++k) r.w_[k] = w_[k] | o.w_[k];
    return r;
  }

  std::vector<int> members() const {
    std::vector<int> out;
    out.reserve(count());
    for (int i = 0; i < n_; ++i)
      if (test(i)) out.push_back(i);
    return out;
  }

  bool operator==(const Subset& o) const { return n_ == o.n_ && w_ == o.w_; }
  bool operator!=(const Subset& o) const { return !(*this == o); }

  /// Canonical listing order: smaller size first, ties broken by comparing
  /// the sorted member lists lexicographically.
  static bool canonical_less(const Subset& a, const Subset& b) {
    const int ca = a.count(), cb = b.count();
    if (ca != cb) return ca < cb;
    return a.members() < b.members();
  }

  std::size_t hash() const {
    // FNV-1a over the backing words; good enough to key unordered containers.
    std::uint64_t h = 1469598103934665603ull;
    for (auto word : w_) {
      for (int byte = 0; byte < 8; ++byte) {
        h ^= (word >> (8 * byte)) & 0xff;
        h *= 1099511628211ull;
      }
    }
    return static_cast<std::size_t>(h);
  }

 private:
  int n_ = 0;
  std::array<std::uint64_t, 4> w_{};
};

struct SubsetHash {
  std::size_t operator()(const Subset& s) const { return s.hash(); }
};

}  // namespace mlakit
