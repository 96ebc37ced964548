// Copyright (c) sharing-analysis contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sharing/term.hpp"
#include "sharing/var_set.hpp"

namespace sharing {

/// A Boolean function over the variables of interest, stored as a reduced
/// ordered BDD with variables ordered by index.
///
/// Each value owns its nodes, compacted in a canonical order, so two formulas
/// denote the same function exactly when they compare equal. The groundness
/// operations below only ever produce positive functions from positive
/// arguments; `falsum` exists to represent failure.
class PosFormula {
 public:
  struct Node {
    std::uint32_t var;
    std::uint32_t lo;
    std::uint32_t hi;
    bool operator==(const Node&) const = default;
  };

  /// The constant true function.
  PosFormula();
  static PosFormula truth() { return {}; }
  static PosFormula falsum();
  static PosFormula var(VarId v);
  /// Conjunction of the variables of `v` (true when empty).
  static PosFormula conj(VarSet v);
  /// x <-> conj(ys).
  static PosFormula iff(VarId x, VarSet ys);

  bool is_true() const;
  bool is_false() const;
  /// Value of the function under the assignment making exactly `true_vars` true.
  bool evaluate(VarSet true_vars) const;
  /// Variables the function depends on.
  VarSet support() const;
  bool entails(const PosFormula& other) const;
  /// Renames every variable i to i + offset; offsets may be negative as long as
  /// every variable of the support stays non-negative.
  PosFormula shifted(int offset) const;
  std::size_t node_count() const { return nodes_.size(); }

  bool operator==(const PosFormula&) const = default;

  friend PosFormula operator&(const PosFormula& a, const PosFormula& b);
  friend PosFormula operator|(const PosFormula& a, const PosFormula& b);
  friend PosFormula pos_project(const PosFormula& f, VarSet v);
  friend PosFormula restrict(const PosFormula& f, VarId v, bool value);
  friend std::string to_string(const PosFormula& f, const VarNames& names);

 private:
  friend class BddBuilder;
  PosFormula(std::vector<Node> nodes, std::uint32_t root) : nodes_{std::move(nodes)}, root_{root} {}

  /// Nodes 0 and 1 are the false and true terminals. Children always precede
  /// their parents.
  std::vector<Node> nodes_;
  std::uint32_t root_ = 1;
};

/// Raised when model enumeration would exceed the configured bound.
class ModelBoundExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Default largest number of variables `models` enumerates over.
inline constexpr std::size_t kDefaultModelBound = 24;

/// phi & (x <-> conj(vars(t))), omitting x itself from the conjunction when
/// the binding is cyclic.
PosFormula pos_amgu(const PosFormula& phi, const Binding& b);
/// { x | phi entails x }; every variable when phi is false.
VarSet ground_vars(const PosFormula& phi, VarSet vi);
/// Existentially quantifies the variables of `v` away.
PosFormula pos_project(const PosFormula& f, VarSet v);
PosFormula restrict(const PosFormula& f, VarId v, bool value);
inline PosFormula pos_lub(const PosFormula& a, const PosFormula& b) { return a | b; }
/// phi entails x \/ y.
bool entails_binary_disjunction(const PosFormula& phi, VarId x, VarId y);
/// The partition of `vi` in which x and y share a class iff phi entails x <-> y.
std::vector<VarSet> ground_equiv_classes(const PosFormula& phi, VarSet vi);
/// Every model over `vi`, as its set of true variables, in `lex_less` order.
/// Throws ModelBoundExceeded when |vi| exceeds `bound`.
std::vector<VarSet> models(const PosFormula& phi, VarSet vi, std::size_t bound = kDefaultModelBound);

/// Prints a conjunction of implications, e.g. `(x -> y) & (y -> x) & z`.
std::string to_string(const PosFormula& f, const VarNames& names);
/// Parses `x<->y&z`, `x\/y`, `x->y`, `true`, `false` and parentheses.
/// Precedence from loosest: `<->` (chains read pairwise), `->`, `\/`, `&`.
PosFormula parse_pos(std::string_view text, const VarNames& names);

}  // namespace sharing
