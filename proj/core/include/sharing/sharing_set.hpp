// Copyright (c) sharing-analysis contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sharing/term.hpp"
#include "sharing/var_set.hpp"

namespace sharing {

/// A set of non-empty sharing groups over the variables of interest.
///
/// Groups are kept sorted by `lex_less` without duplicates, so equality and
/// iteration order are canonical.
class SharingSet {
 public:
  SharingSet() = default;
  SharingSet(std::initializer_list<VarSet> groups);
  /// Throws std::invalid_argument when a group is empty.
  explicit SharingSet(std::vector<VarSet> groups);

  const std::vector<VarSet>& groups() const { return groups_; }
  std::size_t size() const { return groups_.size(); }
  bool empty() const { return groups_.empty(); }
  bool contains(VarSet group) const;
  auto begin() const { return groups_.begin(); }
  auto end() const { return groups_.end(); }

  /// vars(sh): union of all groups.
  VarSet vars() const;
  /// Subset test on sets of groups.
  bool subset_of(const SharingSet& other) const;

  bool operator==(const SharingSet&) const = default;

 private:
  std::vector<VarSet> groups_;
};

SharingSet operator|(const SharingSet& a, const SharingSet& b);

/// rel(V, sh) = { S in sh | S meets V }.
SharingSet rel(VarSet v, const SharingSet& sh);
/// nrel(V, sh) = sh \ rel(V, sh).
SharingSet nrel(VarSet v, const SharingSet& sh);
/// All non-empty unions of groups of sh.
SharingSet star_union(const SharingSet& sh);
/// { S1 u S2 | S1 in a, S2 in b }.
SharingSet bin(const SharingSet& a, const SharingSet& b);
SharingSet sbin(const SharingSet& sh);
/// Forgets V: drops V from every group and re-adds V as singletons.
SharingSet aexists(const SharingSet& sh, VarSet v);
/// { S n V | S in sh, S n V non-empty }.
SharingSet project(const SharingSet& sh, VarSet v);
/// Renames every variable i to i + offset.
SharingSet shifted(const SharingSet& sh, unsigned offset);
/// All non-empty subsets of V: the description of arbitrary aliasing.
SharingSet powerset(VarSet v);
/// { {x} | x in V }.
SharingSet singletons(VarSet v);

/// Abstract unification with star-union on both relevant components.
SharingSet amgu_sh(const SharingSet& sh, const Binding& b);
/// As amgu_sh with self-bin-union in place of star-union.
SharingSet amgu_psd(const SharingSet& sh, const Binding& b);

/// Groups of sh that cover every pair of a candidate group.
struct RhoWitness {
  VarSet group;
  std::vector<VarSet> covered_by;
};

/// Returns a witness when `group` belongs to the pair-cover closure of sh
/// without being a group of sh itself.
std::optional<RhoWitness> rho_witness(const SharingSet& sh, VarSet group);
/// Membership of `group` in the pair-cover closure of sh.
bool rho_contains(const SharingSet& sh, VarSet group);
/// Equality of pair-cover closures.
bool rho_eq(const SharingSet& a, const SharingSet& b);
/// Drops every group whose pairs are all covered by strictly smaller groups.
SharingSet rho_reduce(const SharingSet& sh);

/// Formats as `{vwxy, xy}`. With multi-character names the members of a group
/// are separated by spaces instead: `{X1 X2, X3}`.
std::string format(const SharingSet& sh, const VarNames& names);
/// Parses the output of `format`; names are resolved against `names`.
/// Throws std::invalid_argument on unknown names or malformed text.
SharingSet parse_sharing(std::string_view text, const VarNames& names);
/// Formats a variable set as `{u, x}`.
std::string format(VarSet v, const VarNames& names);
VarSet parse_var_set(std::string_view text, const VarNames& names);

}  // namespace sharing
