// Copyright (c) sharing-analysis contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "sharing/sharing_set.hpp"

namespace sharing {

/// Which closure the starred branches of amgu use: full star-union, or the
/// polynomial self-bin-union that is equivalent modulo pair-cover closure.
enum class Closure { Star, SelfBin };

SharingSet close(const SharingSet& sh, Closure c);

/// Set-sharing with definite freeness and linearity: <sh, f, l>.
struct SflElement {
  VarSet vi;
  SharingSet sh;
  VarSet f;
  VarSet l;

  /// <{ {x} | x in VI }, VI, VI>: distinct fresh variables.
  static SflElement fresh(VarSet vi);
  /// <{}, VI, VI>.
  static SflElement bottom(VarSet vi);
  bool is_bottom() const;

  bool operator==(const SflElement&) const = default;
};

/// SFL extended with the ground-or-free component gf.
struct SgflElement {
  VarSet vi;
  SharingSet sh;
  VarSet f;
  VarSet gf;
  VarSet l;

  static SgflElement fresh(VarSet vi);
  static SgflElement bottom(VarSet vi);
  /// Seeds gf with the free and the ground variables of d.
  static SgflElement from_sfl(const SflElement& d);
  SflElement to_sfl() const { return {vi, sh, f, l}; }
  bool is_bottom() const;

  bool operator==(const SgflElement&) const = default;
};

/// No group of sh meets both vars(s) and vars(t).
bool ind(const SharingSet& sh, const Term& s, const Term& t);
bool ind(const SflElement& d, const Term& s, const Term& t);
/// t is a variable in f.
bool free(const SflElement& d, const Term& t);
/// vars(t) in l, pairwise independent, and no repeated variable can share.
bool lin(const SharingSet& sh, VarSet l, const Term& t);
bool lin(const SflElement& d, const Term& t);
/// t is ground (empty relevant component) or a variable in gf.
bool gfree(const SgflElement& d, const Term& t);

/// The case analysis of one binding against one description, shared by the
/// amgu variants and the ordering heuristics.
struct BindingFacts {
  VarSet vx;
  VarSet vt;
  SharingSet rx;
  SharingSet rt;
  bool cyclic = false;
  bool free_x = false;
  bool free_t = false;
  /// The tests guarding the unstarred branches: freeness for SFL,
  /// ground-or-freeness for SGFL.
  bool mode_x = false;
  bool mode_t = false;
  bool lin_x = false;
  bool lin_t = false;
  bool ind = false;
  bool star_x = false;
  bool star_t = false;
};

BindingFacts binding_facts(const SflElement& d, const Binding& b);
BindingFacts binding_facts(const SgflElement& d, const Binding& b);

/// f' of the SFL amgu.
VarSet amgu_free(VarSet f, const BindingFacts& k);
/// l'' of the SFL amgu.
VarSet amgu_lin(VarSet l, const BindingFacts& k);

/// Abstract unification on SFL, with the refinement for cyclic bindings.
SflElement amgu_sfl(const SflElement& d, const Binding& b, Closure c = Closure::Star);
/// Abstract unification on SGFL, with the refinement for cyclic bindings.
SgflElement amgu_sgfl(const SgflElement& d, const Binding& b, Closure c = Closure::Star);

SflElement aexists_sfl(const SflElement& d, VarSet v);
SgflElement aexists_sgfl(const SgflElement& d, VarSet v);
/// Componentwise: union on sh, intersection on the mode components.
SflElement sfl_lub(const SflElement& a, const SflElement& b);
SgflElement sgfl_lub(const SgflElement& a, const SgflElement& b);

/// Partial order: sh included, every mode component a superset.
bool leq(const SflElement& a, const SflElement& b);
bool leq(const SgflElement& a, const SgflElement& b);

/// Enforces f within vars(sh) and the ground variables within l (and, for
/// SGFL, f within gf within l). Bottom elements are left untouched.
SflElement canonical(SflElement d);
SgflElement canonical(SgflElement d);

/// `<{groups}, {free}, {linear}>`.
std::string format(const SflElement& d, const VarNames& names);
/// `<{groups}, {free}, {gf}, {linear}>`.
std::string format(const SgflElement& d, const VarNames& names);
/// Parses the textual forms above; VI is every name in `names`.
SflElement parse_sfl(std::string_view text, const VarNames& names);
SgflElement parse_sgfl(std::string_view text, const VarNames& names);

}  // namespace sharing
