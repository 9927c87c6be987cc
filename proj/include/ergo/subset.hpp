#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace ergo {

/// Largest state space representable by a Subset.
inline constexpr int kMaxStates = 64;

/// A set of states of a game with at most 64 states, stored as a bitmask.
/// Bit i corresponds to the state with index i (0-based).
class Subset {
 public:
  constexpr Subset() = default;
  constexpr explicit Subset(std::uint64_t bits) : bits_(bits) {}
  Subset(std::initializer_list<int> members) {
    for (int i : members) insert(i);
  }

  static constexpr Subset empty() { return Subset(); }
  static constexpr Subset full(int n) {
    return Subset(n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
  }
  static Subset from_indices(const std::vector<int>& members) {
    Subset s;
    for (int i : members) s.insert(i);
    return s;
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool contains(int i) const { return (bits_ >> i) & 1U; }
  constexpr bool is_empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }

  void insert(int i) {
    if (i < 0 || i >= kMaxStates) throw std::out_of_range("state index out of range");
    bits_ |= std::uint64_t{1} << i;
  }
  void erase(int i) { bits_ &= ~(std::uint64_t{1} << i); }

  constexpr bool is_subset_of(Subset other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool intersects(Subset other) const { return (bits_ & other.bits_) != 0; }
  constexpr bool fits(int n) const { return is_subset_of(full(n)); }

  /// Complement relative to the state space [n].
  constexpr Subset complement(int n) const { return Subset(~bits_ & full(n).bits_); }

  constexpr Subset operator|(Subset o) const { return Subset(bits_ | o.bits_); }
  constexpr Subset operator&(Subset o) const { return Subset(bits_ & o.bits_); }
  constexpr Subset operator-(Subset o) const { return Subset(bits_ & ~o.bits_); }
  Subset& operator|=(Subset o) { bits_ |= o.bits_; return *this; }
  Subset& operator&=(Subset o) { bits_ &= o.bits_; return *this; }

  constexpr bool operator==(const Subset&) const = default;

  std::vector<int> indices() const {
    std::vector<int> out;
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  /// Indicator vector 1_K of length n.
  std::vector<double> indicator(int n) const {
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
      if (contains(i)) v[static_cast<std::size_t>(i)] = 1.0;
    return v;
  }

 private:
  std::uint64_t bits_ = 0;
};

/// Order by cardinality, then lexicographically on the sorted member lists.
/// This is the presentation order used for lattices and witnesses.
inline bool canonical_less(Subset a, Subset b) {
  if (a.size() != b.size()) return a.size() < b.size();
  auto ia = a.indices();
  auto ib = b.indices();
  return ia < ib;
}

/// Calls fn(subset) for every subset of [n] with exactly k members, in
/// lexicographic order of the sorted member lists. Stops early when fn
/// returns false; returns false in that case.
inline bool for_each_subset_of_size(int n, int k, const std::function<bool(Subset)>& fn) {
  if (k < 0 || k > n) return true;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    if (!fn(Subset::from_indices(idx))) return false;
    int pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
    if (pos < 0) return true;
    ++idx[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

/// Every subset of [n], by cardinality then lexicographically.
inline bool for_each_subset(int n, const std::function<bool(Subset)>& fn) {
  for (int k = 0; k <= n; ++k)
    if (!for_each_subset_of_size(n, k, fn)) return false;
  return true;
}

}  // namespace ergo
