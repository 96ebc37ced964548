// Copyright (c) sharing-analysis contributors.
// SPDX-License-Identifier: Apache-2.0
#include "sharing/mode_domains.hpp"

#include <stdexcept>
#include <vector>

namespace sharing {
namespace {

bool rel_disjoint(const SharingSet& a, const SharingSet& b) {
  for (VarSet g : a) {
    if (b.contains(g)) return false;
  }
  return true;
}

BindingFacts facts(const SharingSet& sh, VarSet f, VarSet l, const Binding& b) {
  BindingFacts k;
  k.vx = VarSet::single(b.lhs);
  k.vt = vars_of(b.rhs);
  k.rx = rel(k.vx, sh);
  k.rt = rel(k.vt, sh);
  k.cyclic = k.vt.contains(b.lhs);
  k.free_x = f.contains(b.lhs);
  k.free_t = b.rhs.is_variable() && f.contains(b.rhs.var());
  k.lin_x = l.contains(b.lhs);
  k.lin_t = lin(sh, l, b.rhs);
  k.ind = rel_disjoint(k.rx, k.rt);
  return k;
}

void decide_stars(BindingFacts& k) {
  const bool unstarred = k.mode_x || k.mode_t;
  if (k.cyclic) {
    // The cyclic refinement replaces S_t by CS_t, guarded by the x test only.
    k.star_x = !(unstarred || (k.lin_t && k.ind));
    k.star_t = !k.mode_x;
    return;
  }
  k.star_x = !(unstarred || (k.lin_t && k.ind));
  k.star_t = !(unstarred || (k.lin_x && k.ind));
}

SharingSet new_sharing(const SharingSet& sh, const BindingFacts& k, Closure c) {
  const SharingSet sx = k.star_x ? close(k.rx, c) : k.rx;
  SharingSet st;
  if (k.cyclic) {
    VarSet rest = k.vt;
    rest -= k.vx;
    const SharingSet crt = rel(rest, sh);
    st = k.star_t ? close(crt, c) : crt;
  } else {
    st = k.star_t ? close(k.rt, c) : k.rt;
  }
  return nrel(k.vx | k.vt, sh) | bin(sx, st);
}

/// Shared by f' and gf'': the four-way case analysis on the two tests.
VarSet drop_touched(VarSet s, bool test_x, bool test_t, const BindingFacts& k) {
  if (test_x && test_t) return s;
  if (test_x) return s - k.rx.vars();
  if (test_t) return s - k.rt.vars();
  return s - (k.rx.vars() | k.rt.vars());
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\n");
  return s.substr(first, last - first + 1);
}

/// Splits `<{..}, {..}, ...>` into its braced components.
std::vector<std::string_view> components(std::string_view text) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '<' || text.back() != '>') {
    throw std::invalid_argument("expected <...>: " + std::string(text));
  }
  text = text.substr(1, text.size() - 2);
  std::vector<std::string_view> out;
  std::size_t depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '{') {
      if (depth++ == 0) start = i;
    } else if (text[i] == '}') {
      if (depth == 0) throw std::invalid_argument("unbalanced braces");
      if (--depth == 0) out.push_back(text.substr(start, i - start + 1));
    }
  }
  if (depth != 0) throw std::invalid_argument("unbalanced braces");
  return out;
}

}  // namespace

SharingSet close(const SharingSet& sh, Closure c) { return c == Closure::Star ? star_union(sh) : sbin(sh); }

SflElement SflElement::fresh(VarSet vi) { return {vi, singletons(vi), vi, vi}; }
SflElement SflElement::bottom(VarSet vi) { return {vi, {}, vi, vi}; }
bool SflElement::is_bottom() const { return sh.empty() && f == vi && l == vi && !vi.empty(); }

SgflElement SgflElement::fresh(VarSet vi) { return {vi, singletons(vi), vi, vi, vi}; }
SgflElement SgflElement::bottom(VarSet vi) { return {vi, {}, vi, vi, vi}; }
bool SgflElement::is_bottom() const { return sh.empty() && f == vi && l == vi && !vi.empty(); }

SgflElement SgflElement::from_sfl(const SflElement& d) {
  const VarSet ground = d.vi - d.sh.vars();
  return {d.vi, d.sh, d.f, d.f | ground, d.l};
}

bool ind(const SharingSet& sh, const Term& s, const Term& t) {
  return rel_disjoint(rel(vars_of(s), sh), rel(vars_of(t), sh));
}

bool ind(const SflElement& d, const Term& s, const Term& t) { return ind(d.sh, s, t); }

bool free(const SflElement& d, const Term& t) { return t.is_variable() && d.f.contains(t.var()); }

bool lin(const SharingSet& sh, VarSet l, const Term& t) {
  const TermVars tv = term_vars(t);
  if (!tv.set.subset_of(l)) return false;
  if (tv.repeated().intersects(sh.vars())) return false;
  for (VarSet g : sh) {
    if ((g & tv.set).size() > 1) return false;
  }
  return true;
}

bool lin(const SflElement& d, const Term& t) { return lin(d.sh, d.l, t); }

bool gfree(const SgflElement& d, const Term& t) {
  if (rel(vars_of(t), d.sh).empty()) return true;
  return t.is_variable() && d.gf.contains(t.var());
}

BindingFacts binding_facts(const SflElement& d, const Binding& b) {
  BindingFacts k = facts(d.sh, d.f, d.l, b);
  k.mode_x = k.free_x;
  k.mode_t = k.free_t;
  decide_stars(k);
  return k;
}

BindingFacts binding_facts(const SgflElement& d, const Binding& b) {
  BindingFacts k = facts(d.sh, d.f, d.l, b);
  k.mode_x = gfree(d, Term::variable(b.lhs));
  k.mode_t = gfree(d, b.rhs);
  decide_stars(k);
  return k;
}

VarSet amgu_free(VarSet f, const BindingFacts& k) { return drop_touched(f, k.free_x, k.free_t, k); }

VarSet amgu_lin(VarSet l, const BindingFacts& k) {
  if (k.lin_x && k.lin_t) return l - (k.rx.vars() & k.rt.vars());
  if (k.lin_x) return l - k.rx.vars();
  if (k.lin_t) return l - k.rt.vars();
  return l - (k.rx.vars() | k.rt.vars());
}

SflElement amgu_sfl(const SflElement& d, const Binding& b, Closure c) {
  if (d.is_bottom()) return d;
  const BindingFacts k = binding_facts(d, b);
  SflElement out{d.vi, new_sharing(d.sh, k, c), amgu_free(d.f, k), {}};
  out.l = (d.vi - out.sh.vars()) | out.f | amgu_lin(d.l, k);
  return canonical(std::move(out));
}

SgflElement amgu_sgfl(const SgflElement& d, const Binding& b, Closure c) {
  if (d.is_bottom()) return d;
  const BindingFacts k = binding_facts(d, b);
  SgflElement out{d.vi, new_sharing(d.sh, k, c), amgu_free(d.f, k), {}, {}};
  out.gf = (d.vi - out.sh.vars()) | drop_touched(d.gf, k.mode_x, k.mode_t, k);
  out.l = out.gf | amgu_lin(d.l, k);
  return canonical(std::move(out));
}

SflElement aexists_sfl(const SflElement& d, VarSet v) {
  return {d.vi, aexists(d.sh, v), d.f | v, d.l | v};
}

SgflElement aexists_sgfl(const SgflElement& d, VarSet v) {
  return {d.vi, aexists(d.sh, v), d.f | v, d.gf | v, d.l | v};
}

SflElement sfl_lub(const SflElement& a, const SflElement& b) {
  if (a.vi != b.vi) throw std::invalid_argument("lub of elements over different variables");
  return {a.vi, a.sh | b.sh, a.f & b.f, a.l & b.l};
}

SgflElement sgfl_lub(const SgflElement& a, const SgflElement& b) {
  if (a.vi != b.vi) throw std::invalid_argument("lub of elements over different variables");
  return {a.vi, a.sh | b.sh, a.f & b.f, a.gf & b.gf, a.l & b.l};
}

bool leq(const SflElement& a, const SflElement& b) {
  return a.sh.subset_of(b.sh) && b.f.subset_of(a.f) && b.l.subset_of(a.l);
}

bool leq(const SgflElement& a, const SgflElement& b) {
  return a.sh.subset_of(b.sh) && b.f.subset_of(a.f) && b.gf.subset_of(a.gf) && b.l.subset_of(a.l);
}

SflElement canonical(SflElement d) {
  if (d.is_bottom()) return d;
  const VarSet shared = d.sh.vars();
  d.f &= shared;
  d.l |= d.vi - shared;
  d.l |= d.f;
  return d;
}

SgflElement canonical(SgflElement d) {
  if (d.is_bottom()) return d;
  const VarSet shared = d.sh.vars();
  d.f &= shared;
  d.gf |= d.f | (d.vi - shared);
  d.l |= d.gf;
  return d;
}

std::string format(const SflElement& d, const VarNames& names) {
  return "<" + format(d.sh, names) + ", " + format(d.f, names) + ", " + format(d.l, names) + ">";
}

std::string format(const SgflElement& d, const VarNames& names) {
  return "<" + format(d.sh, names) + ", " + format(d.f, names) + ", " + format(d.gf, names) + ", " +
         format(d.l, names) + ">";
}

SflElement parse_sfl(std::string_view text, const VarNames& names) {
  const auto parts = components(text);
  if (parts.size() != 3) throw std::invalid_argument("expected three components");
  return {VarSet::prefix(names.size()), parse_sharing(parts[0], names), parse_var_set(parts[1], names),
          parse_var_set(parts[2], names)};
}

SgflElement parse_sgfl(std::string_view text, const VarNames& names) {
  const auto parts = components(text);
  if (parts.size() != 4) throw std::invalid_argument("expected four components");
  return {VarSet::prefix(names.size()), parse_sharing(parts[0], names), parse_var_set(parts[1], names),
          parse_var_set(parts[2], names), parse_var_set(parts[3], names)};
}

}  // namespace sharing
