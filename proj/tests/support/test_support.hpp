// Copyright (c) sharing-analysis contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Shared fixtures for the test suites: short variable names, term builders and
// naive reference implementations written independently of the library.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sharing/mode_domains.hpp"
#include "sharing/sharing_set.hpp"
#include "sharing/term.hpp"

namespace sharing::testing {

inline const VarNames kUZ{"u", "v", "w", "x", "y", "z"};
inline const VarNames kVZ{"v", "w", "x", "y", "z"};
inline const VarNames kWZ{"w", "x", "y", "z"};
inline const VarNames kXZ{"x", "y", "z"};

inline VarId id(const VarNames& names, const std::string& n) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == n) return static_cast<VarId>(i);
  }
  throw std::invalid_argument("unknown test variable " + n);
}

inline Term V(VarId v) { return Term::variable(v); }
inline Term A(const std::string& name = "a") { return Term::atom(name); }
inline Term F(const std::string& f, std::vector<Term> args) { return Term::compound(f, std::move(args)); }

inline SharingSet sh(const std::string& text, const VarNames& names = kUZ) { return parse_sharing(text, names); }
inline VarSet vs(const std::string& text, const VarNames& names = kUZ) { return parse_var_set(text, names); }
inline SflElement sfl(const std::string& text, const VarNames& names = kUZ) { return parse_sfl(text, names); }
inline SgflElement sgfl(const std::string& text, const VarNames& names = kUZ) { return parse_sgfl(text, names); }

// ---------------------------------------------------------------------------
// Naive set-sharing over std::set, following the textbook definitions.

using Group = std::set<VarId>;
using Naive = std::set<Group>;

inline Naive to_naive(const SharingSet& s) {
  Naive out;
  for (VarSet g : s) out.insert(Group(g.begin(), g.end()));
  return out;
}

inline SharingSet from_naive(const Naive& n) {
  std::vector<VarSet> groups;
  for (const Group& g : n) {
    VarSet v;
    for (VarId x : g) v.insert(x);
    groups.push_back(v);
  }
  return SharingSet(std::move(groups));
}

inline bool meets(const Group& g, const Group& v) {
  return std::any_of(g.begin(), g.end(), [&](VarId x) { return v.count(x) != 0; });
}

inline Naive naive_rel(const Group& v, const Naive& s) {
  Naive out;
  for (const Group& g : s) {
    if (meets(g, v)) out.insert(g);
  }
  return out;
}

inline Naive naive_nrel(const Group& v, const Naive& s) {
  Naive out;
  for (const Group& g : s) {
    if (!meets(g, v)) out.insert(g);
  }
  return out;
}

inline Group join(const Group& a, const Group& b) {
  Group out = a;
  out.insert(b.begin(), b.end());
  return out;
}

// Closure under pairwise union, iterated to a fixpoint.
inline Naive naive_star(const Naive& s) {
  Naive out = s;
  bool changed = true;
  while (changed) {
    changed = false;
    const Naive snapshot = out;
    for (const Group& a : snapshot) {
      for (const Group& b : snapshot) {
        if (out.insert(join(a, b)).second) changed = true;
      }
    }
  }
  return out;
}

inline Naive naive_bin(const Naive& a, const Naive& b) {
  Naive out;
  for (const Group& x : a) {
    for (const Group& y : b) out.insert(join(x, y));
  }
  return out;
}

inline Group term_group(const Term& t) {
  const VarSet v = vars_of(t);
  return Group(v.begin(), v.end());
}

inline Naive naive_amgu(const Naive& s, const Binding& b) {
  const Group vx{b.lhs};
  const Group vt = term_group(b.rhs);
  Naive out = naive_nrel(join(vx, vt), s);
  for (const Group& g : naive_bin(naive_star(naive_rel(vx, s)), naive_star(naive_rel(vt, s)))) out.insert(g);
  return out;
}

inline Naive naive_aexists(const Naive& s, const Group& v) {
  Naive out;
  for (const Group& g : s) {
    Group r;
    for (VarId x : g) {
      if (v.count(x) == 0) r.insert(x);
    }
    if (!r.empty()) out.insert(r);
  }
  for (VarId x : v) out.insert(Group{x});
  return out;
}

// ---------------------------------------------------------------------------
// Random inputs.

inline SharingSet random_sharing(std::mt19937& rng, std::size_t n, std::size_t max_groups) {
  std::uniform_int_distribution<std::uint64_t> group(1, (std::uint64_t{1} << n) - 1);
  std::uniform_int_distribution<std::size_t> count(0, max_groups);
  std::vector<VarSet> groups;
  const std::size_t k = count(rng);
  for (std::size_t i = 0; i < k; ++i) groups.push_back(VarSet(group(rng)));
  return SharingSet(std::move(groups));
}

inline VarSet random_subset(std::mt19937& rng, VarSet of) {
  std::bernoulli_distribution coin(0.5);
  VarSet out;
  for (VarId x : of) {
    if (coin(rng)) out.insert(x);
  }
  return out;
}

// x = t with t a variable, a constant, or f/g over variables and constants,
// nested up to `depth`.
inline Term random_term(std::mt19937& rng, std::size_t n, std::size_t depth) {
  std::uniform_int_distribution<int> kind(0, depth == 0 ? 1 : 3);
  std::uniform_int_distribution<VarId> var(0, static_cast<VarId>(n - 1));
  switch (kind(rng)) {
    case 0:
      return V(var(rng));
    case 1:
      return (var(rng) % 3 == 0) ? A() : V(var(rng));
    case 2:
      return F("f", {random_term(rng, n, depth - 1)});
    default:
      return F("g", {random_term(rng, n, depth - 1), random_term(rng, n, depth - 1)});
  }
}

inline Binding random_binding(std::mt19937& rng, std::size_t n, std::size_t depth) {
  std::uniform_int_distribution<VarId> var(0, static_cast<VarId>(n - 1));
  return Binding{var(rng), random_term(rng, n, depth)};
}

}  // namespace sharing::testing
