// Copyright (c) sharing-analysis contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iterator>

namespace sharing {

/// Index of a variable inside the current set of variables of interest.
using VarId = std::uint32_t;

/// Largest number of variables of interest a single context may hold.
inline constexpr std::size_t kMaxVars = 64;

/// A set of variables of interest, stored as a 64-bit mask indexed by VarId.
///
/// Used both for sharing groups and for the freeness, linearity and
/// ground-or-free components. All operations are constexpr and branch-free
/// where possible.
class VarSet {
  std::uint64_t bits_{};

 public:
  class iterator {
    std::uint64_t rest_{};

   public:
    using value_type = VarId;
    using difference_type = std::ptrdiff_t;
    using iterator_category = std::forward_iterator_tag;

    constexpr iterator() = default;
    constexpr explicit iterator(std::uint64_t rest) : rest_{rest} {}
    constexpr VarId operator*() const { return static_cast<VarId>(std::countr_zero(rest_)); }
    constexpr iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    constexpr iterator operator++(int) {
      iterator old = *this;
      ++*this;
      return old;
    }
    constexpr bool operator==(const iterator&) const = default;
  };

  constexpr VarSet() = default;
  constexpr explicit VarSet(std::uint64_t bits) : bits_{bits} {}
  constexpr VarSet(std::initializer_list<VarId> vars) {
    for (VarId v : vars) bits_ |= bit(v);
  }

  static constexpr VarSet single(VarId v) { return VarSet(bit(v)); }
  /// The first `n` variables {0, ..., n-1}.
  static constexpr VarSet prefix(std::size_t n) {
    return VarSet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool contains(VarId v) const { return (bits_ & bit(v)) != 0; }
  constexpr bool intersects(VarSet o) const { return (bits_ & o.bits_) != 0; }
  constexpr bool subset_of(VarSet o) const { return (bits_ & ~o.bits_) == 0; }
  constexpr VarId front() const { return static_cast<VarId>(std::countr_zero(bits_)); }

  constexpr void insert(VarId v) { bits_ |= bit(v); }
  constexpr void erase(VarId v) { bits_ &= ~bit(v); }

  constexpr iterator begin() const { return iterator{bits_}; }
  constexpr iterator end() const { return iterator{0}; }

  constexpr VarSet operator|(VarSet o) const { return VarSet(bits_ | o.bits_); }
  constexpr VarSet operator&(VarSet o) const { return VarSet(bits_ & o.bits_); }
  /// Set difference.
  constexpr VarSet operator-(VarSet o) const { return VarSet(bits_ & ~o.bits_); }
  constexpr VarSet& operator|=(VarSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  constexpr VarSet& operator&=(VarSet o) {
    bits_ &= o.bits_;
    return *this;
  }
  constexpr VarSet& operator-=(VarSet o) {
    bits_ &= ~o.bits_;
    return *this;
  }
  /// Renames every variable v to v + offset.
  constexpr VarSet shifted(unsigned offset) const { return VarSet(bits_ << offset); }

  constexpr bool operator==(const VarSet&) const = default;

 private:
  static constexpr std::uint64_t bit(VarId v) { return std::uint64_t{1} << v; }
};

/// Orders groups as the sorted sequences of their members, lexicographically.
///
/// With variable names assigned in index order this matches the order in which
/// groups are conventionally printed, e.g. `vwxy < vwxyz < xy < xyz`.
constexpr bool lex_less(VarSet a, VarSet b) {
  const std::uint64_t diff = a.bits() ^ b.bits();
  if (diff == 0) return false;
  const std::uint64_t low = diff & (~diff + 1);
  const std::uint64_t at_or_above = ~(low - 1);
  if ((a.bits() & low) != 0) {
    // a has the smaller element unless b ran out first.
    return (b.bits() & at_or_above) != 0;
  }
  return (a.bits() & at_or_above) == 0;
}

struct LexLess {
  constexpr bool operator()(VarSet a, VarSet b) const { return lex_less(a, b); }
};

}  // namespace sharing

template <>
struct std::hash<sharing::VarSet> {
  std::size_t operator()(sharing::VarSet s) const noexcept { return std::hash<std::uint64_t>{}(s.bits()); }
};
