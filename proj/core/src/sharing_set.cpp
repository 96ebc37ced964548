// Copyright (c) sharing-analysis contributors.
// SPDX-License-Identifier: Apache-2.0
#include "sharing/sharing_set.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "sharing/cancellation.hpp"

namespace sharing {
namespace {

std::vector<VarSet> canonical(std::vector<VarSet> groups) {
  std::sort(groups.begin(), groups.end(), LexLess{});
  groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
  return groups;
}

SharingSet from_unique(const std::unordered_set<VarSet>& set) {
  return SharingSet(std::vector<VarSet>(set.begin(), set.end()));
}

bool single_char_names(const VarNames& names, VarSet v) {
  return std::all_of(v.begin(), v.end(), [&](VarId x) { return x < names.size() && names[x].size() == 1; });
}

std::string name_of(VarId v, const VarNames& names) {
  return v < names.size() ? names[v] : "_G" + std::to_string(v);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\n");
  return s.substr(first, last - first + 1);
}

std::string_view strip_braces(std::string_view text) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '{' || text.back() != '}') {
    throw std::invalid_argument("expected a braced set: " + std::string(text));
  }
  return text.substr(1, text.size() - 2);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto at = s.find(sep, start);
    out.push_back(trim(s.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start)));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

VarId lookup(std::string_view name, const VarNames& names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<VarId>(i);
  }
  throw std::invalid_argument("unknown variable name: " + std::string(name));
}

VarSet parse_group(std::string_view text, const VarNames& names) {
  VarSet g;
  if (text.find(' ') != std::string_view::npos) {
    for (std::string_view part : split(text, ' ')) {
      if (!part.empty()) g.insert(lookup(part, names));
    }
  } else {
    bool whole = false;
    for (const auto& n : names) whole = whole || n == text;
    if (whole) {
      g.insert(lookup(text, names));
    } else {
      for (char c : text) g.insert(lookup(std::string_view(&c, 1), names));
    }
  }
  if (g.empty()) throw std::invalid_argument("empty sharing group");
  return g;
}

/// Union of the groups T of sh with x in T and T a subset of `within`,
/// excluding `within` itself when `strict`.
VarSet cover_of(const SharingSet& sh, VarId x, VarSet within, bool strict) {
  VarSet acc;
  for (VarSet t : sh) {
    if (t.contains(x) && t.subset_of(within) && !(strict && t == within)) acc |= t;
  }
  return acc;
}

bool pair_covered(const SharingSet& sh, VarSet group, bool strict) {
  if (group.size() < 2) return false;
  for (VarId x : group) {
    if (cover_of(sh, x, group, strict) != group) return false;
  }
  return true;
}

}  // namespace

SharingSet::SharingSet(std::initializer_list<VarSet> groups) : SharingSet(std::vector<VarSet>(groups)) {}

SharingSet::SharingSet(std::vector<VarSet> groups) {
  for (VarSet g : groups) {
    if (g.empty()) throw std::invalid_argument("sharing groups must be non-empty");
  }
  groups_ = canonical(std::move(groups));
}

bool SharingSet::contains(VarSet group) const {
  return std::binary_search(groups_.begin(), groups_.end(), group, LexLess{});
}

VarSet SharingSet::vars() const {
  VarSet acc;
  for (VarSet g : groups_) acc |= g;
  return acc;
}

bool SharingSet::subset_of(const SharingSet& other) const {
  return std::includes(other.groups_.begin(), other.groups_.end(), groups_.begin(), groups_.end(), LexLess{});
}

SharingSet operator|(const SharingSet& a, const SharingSet& b) {
  std::vector<VarSet> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), LexLess{});
  return SharingSet(std::move(out));
}

SharingSet rel(VarSet v, const SharingSet& sh) {
  std::vector<VarSet> out;
  for (VarSet g : sh) {
    if (g.intersects(v)) out.push_back(g);
  }
  return SharingSet(std::move(out));
}

SharingSet nrel(VarSet v, const SharingSet& sh) {
  std::vector<VarSet> out;
  for (VarSet g : sh) {
    if (!g.intersects(v)) out.push_back(g);
  }
  return SharingSet(std::move(out));
}

SharingSet star_union(const SharingSet& sh) {
  std::unordered_set<VarSet> seen;
  std::vector<VarSet> acc;
  for (VarSet g : sh) {
    const std::size_t n = acc.size();
    for (std::size_t i = 0; i < n; ++i) {
      poll_deadline();
      const VarSet u = acc[i] | g;
      if (seen.insert(u).second) acc.push_back(u);
    }
    if (seen.insert(g).second) acc.push_back(g);
  }
  return SharingSet(std::move(acc));
}

SharingSet bin(const SharingSet& a, const SharingSet& b) {
  std::unordered_set<VarSet> out;
  for (VarSet x : a) {
    for (VarSet y : b) {
      poll_deadline();
      out.insert(x | y);
    }
  }
  return from_unique(out);
}

SharingSet sbin(const SharingSet& sh) { return bin(sh, sh); }

SharingSet aexists(const SharingSet& sh, VarSet v) {
  std::vector<VarSet> out;
  for (VarSet g : sh) {
    if (VarSet r = g - v; !r.empty()) out.push_back(r);
  }
  for (VarId x : v) out.push_back(VarSet::single(x));
  return SharingSet(std::move(out));
}

SharingSet project(const SharingSet& sh, VarSet v) {
  std::vector<VarSet> out;
  for (VarSet g : sh) {
    if (VarSet r = g & v; !r.empty()) out.push_back(r);
  }
  return SharingSet(std::move(out));
}

SharingSet shifted(const SharingSet& sh, unsigned offset) {
  std::vector<VarSet> out;
  out.reserve(sh.size());
  for (VarSet g : sh) out.push_back(g.shifted(offset));
  return SharingSet(std::move(out));
}

SharingSet powerset(VarSet v) {
  std::vector<VarSet> out;
  // Enumerates the non-empty submasks of v.
  for (std::uint64_t s = v.bits(); s != 0; s = (s - 1) & v.bits()) out.emplace_back(s);
  return SharingSet(std::move(out));
}

SharingSet singletons(VarSet v) {
  std::vector<VarSet> out;
  for (VarId x : v) out.push_back(VarSet::single(x));
  return SharingSet(std::move(out));
}

SharingSet amgu_sh(const SharingSet& sh, const Binding& b) {
  const VarSet vx = VarSet::single(b.lhs);
  const VarSet vt = vars_of(b.rhs);
  return nrel(vx | vt, sh) | bin(star_union(rel(vx, sh)), star_union(rel(vt, sh)));
}

SharingSet amgu_psd(const SharingSet& sh, const Binding& b) {
  const VarSet vx = VarSet::single(b.lhs);
  const VarSet vt = vars_of(b.rhs);
  return nrel(vx | vt, sh) | bin(sbin(rel(vx, sh)), sbin(rel(vt, sh)));
}

std::optional<RhoWitness> rho_witness(const SharingSet& sh, VarSet group) {
  if (sh.contains(group) || !pair_covered(sh, group, false)) return std::nullopt;
  RhoWitness w{group, {}};
  for (VarSet t : sh) {
    if (t.subset_of(group) && t.size() >= 2) w.covered_by.push_back(t);
  }
  return w;
}

bool rho_contains(const SharingSet& sh, VarSet group) {
  return sh.contains(group) || pair_covered(sh, group, false);
}

bool rho_eq(const SharingSet& a, const SharingSet& b) {
  const auto covered = [](const SharingSet& x, const SharingSet& y) {
    return std::all_of(x.begin(), x.end(), [&](VarSet g) { return rho_contains(y, g); });
  };
  return covered(a, b) && covered(b, a);
}

SharingSet rho_reduce(const SharingSet& sh) {
  std::vector<VarSet> out;
  for (VarSet g : sh) {
    if (!pair_covered(sh, g, true)) out.push_back(g);
  }
  return SharingSet(std::move(out));
}

std::string format(const SharingSet& sh, const VarNames& names) {
  const bool compact = single_char_names(names, sh.vars());
  std::string out = "{";
  bool first = true;
  for (VarSet g : sh) {
    if (!first) out += ", ";
    first = false;
    bool first_var = true;
    for (VarId x : g) {
      if (!compact && !first_var) out += ' ';
      first_var = false;
      out += name_of(x, names);
    }
  }
  return out + "}";
}

SharingSet parse_sharing(std::string_view text, const VarNames& names) {
  const std::string_view body = trim(strip_braces(text));
  std::vector<VarSet> groups;
  if (body.empty()) return {};
  for (std::string_view part : split(body, ',')) groups.push_back(parse_group(part, names));
  return SharingSet(std::move(groups));
}

std::string format(VarSet v, const VarNames& names) {
  std::string out = "{";
  bool first = true;
  for (VarId x : v) {
    if (!first) out += ", ";
    first = false;
    out += name_of(x, names);
  }
  return out + "}";
}

VarSet parse_var_set(std::string_view text, const VarNames& names) {
  const std::string_view body = trim(strip_braces(text));
  VarSet out;
  if (body.empty()) return out;
  for (std::string_view part : split(body, ',')) out |= parse_group(part, names);
  return out;
}

}  // namespace sharing
