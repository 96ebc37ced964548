// Copyright (c) sharing-analysis contributors.
// SPDX-License-Identifier: Apache-2.0
#include "sharing/enhancements.hpp"

#include <algorithm>
#include <stdexcept>

namespace sharing {
namespace {

template <typename Element>
Element groundness_common(const PosFormula& phi, Element d) {
  const VarSet ground = ground_vars(phi, d.vi);
  if (ground.empty()) return d;
  std::vector<VarSet> kept;
  for (VarSet g : d.sh) {
    if (!g.intersects(ground)) kept.push_back(g);
  }
  d.sh = SharingSet(std::move(kept));
  d.l |= ground | (d.vi - d.sh.vars());
  return d;
}

/// The set of variables of t that are linear and independent of every other
/// variable of t.
VarSet linear_part(const SharingSet& sh, VarSet l, const Term& t) {
  const TermVars tv = term_vars(t);
  const VarSet shared = sh.vars();
  const VarSet repeated = tv.repeated();
  VarSet out;
  for (VarId y : tv.set) {
    if (!l.contains(y)) continue;
    if (repeated.contains(y) && shared.contains(y)) continue;
    bool independent = true;
    for (VarSet g : sh) {
      if (g.contains(y) && (g & tv.set).size() > 1) {
        independent = false;
        break;
      }
    }
    if (independent) out.insert(y);
  }
  return out;
}

/// The refined sharing component, or nullopt when the refinement does not apply.
std::optional<SharingSet> klin_sharing(const SharingSet& sh, VarSet l, const Binding& b, const BindingFacts& k,
                                       Closure c) {
  if (k.cyclic || k.mode_x || k.mode_t || !k.lin_x || k.lin_t || !k.ind) return std::nullopt;
  const VarSet vl = linear_part(sh, l, b.rhs);
  const VarSet vnl = k.vt - vl;
  const SharingSet rl = rel(vl, sh);
  const SharingSet rnl = rel(vnl, sh);
  if (rl.empty() || rnl.empty()) return std::nullopt;
  return nrel(k.vx | k.vt, sh) | bin(k.rx, rl) | bin(close(k.rx, c), rnl);
}

void enumerate_covers(const std::vector<VarSet>& candidates, VarSet free_vars, VarSet uncovered,
                      std::vector<VarSet>& chosen, std::vector<std::vector<VarSet>>& out, std::size_t bound,
                      bool& overflow) {
  if (overflow) return;
  if (uncovered.empty()) {
    if (out.size() >= bound) {
      overflow = true;
      return;
    }
    out.push_back(chosen);
    return;
  }
  const VarId v = uncovered.front();
  for (VarSet g : candidates) {
    if (!g.contains(v) || !(g & free_vars).subset_of(uncovered)) continue;
    chosen.push_back(g);
    enumerate_covers(candidates, free_vars, uncovered - g, chosen, out, bound, overflow);
    chosen.pop_back();
    if (overflow) return;
  }
}

template <typename Element>
std::optional<Element> compound_common(const Element& d, const Binding& b, VarSet compound, bool occurs_check) {
  if (!occurs_check || !compound_reduce_applicable(d.f, b, compound)) return d;
  const VarSet vt = vars_of(b.rhs);
  std::vector<VarSet> kept;
  for (VarSet g : d.sh) {
    if (!(g.contains(b.lhs) && g.intersects(vt))) kept.push_back(g);
  }
  Element out = d;
  out.sh = SharingSet(std::move(kept));
  const VarSet lost = (d.f & d.sh.vars()) - out.sh.vars();
  if (!lost.empty()) return std::nullopt;
  return out;
}

template <typename Element>
Element free_split_common(const Element& d, const Binding& b,
                          const std::function<Element(const Element&, const Binding&)>& amgu,
                          Element (*lub)(const Element&, const Element&), std::size_t bound, bool* fell_back) {
  if (d.is_bottom()) return d;
  const Decomposition parts = free_decompose(d.sh, d.f, bound);
  if (fell_back != nullptr) *fell_back = parts.fell_back;
  std::optional<Element> acc;
  for (const SharingSet& sh : parts.components) {
    Element part = d;
    part.sh = sh;
    Element r = amgu(part, b);
    acc = acc ? lub(*acc, r) : r;
  }
  return acc ? *acc : amgu(d, b);
}

}  // namespace

std::string_view to_string(OrderingStrategy s) {
  switch (s) {
    case OrderingStrategy::Textual:
      return "textual";
    case OrderingStrategy::Reverse:
      return "reverse";
    case OrderingStrategy::DelayStarUnions:
      return "stardelay";
    case OrderingStrategy::MaxFreeLin:
      return "freelin";
  }
  return "textual";
}

std::optional<OrderingStrategy> parse_ordering(std::string_view text) {
  for (auto s : {OrderingStrategy::Textual, OrderingStrategy::Reverse, OrderingStrategy::DelayStarUnions,
                 OrderingStrategy::MaxFreeLin}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

bool is_grounding(const SharingSet& sh, const Binding& b) {
  return rel(VarSet::single(b.lhs), sh).empty() || rel(vars_of(b.rhs), sh).empty();
}

std::pair<std::vector<Binding>, std::vector<Binding>> partition_grounding(const SharingSet& sh,
                                                                          const std::vector<Binding>& bs) {
  std::pair<std::vector<Binding>, std::vector<Binding>> out;
  for (const Binding& b : bs) (is_grounding(sh, b) ? out.first : out.second).push_back(b);
  return out;
}

SflElement apply_groundness(const PosFormula& phi, const SflElement& d) { return groundness_common(phi, d); }

SgflElement apply_groundness(const PosFormula& phi, const SgflElement& d) {
  SgflElement out = groundness_common(phi, d);
  out.gf |= ground_vars(phi, d.vi) | (d.vi - out.sh.vars());
  return out;
}

SharingSet reduce_product(const PosFormula& phi, const SharingSet& sh, VarSet vi) {
  std::vector<VarSet> kept;
  for (VarSet g : sh) {
    if (phi.evaluate(vi - g)) kept.push_back(g);
  }
  return SharingSet(std::move(kept));
}

int star_count(const SflElement& d, const Binding& b) {
  const BindingFacts k = binding_facts(d, b);
  return int{k.star_x} + int{k.star_t};
}

int star_count(const SgflElement& d, const Binding& b) {
  const BindingFacts k = binding_facts(d, b);
  return int{k.star_x} + int{k.star_t};
}

SflElement amgu_klin(const SflElement& d, const Binding& b, Closure c) {
  if (d.is_bottom()) return d;
  const BindingFacts k = binding_facts(d, b);
  auto sh = klin_sharing(d.sh, d.l, b, k, c);
  if (!sh) return amgu_sfl(d, b, c);
  SflElement out{d.vi, std::move(*sh), amgu_free(d.f, k), {}};
  out.l = (d.vi - out.sh.vars()) | out.f | amgu_lin(d.l, k);
  return canonical(std::move(out));
}

SgflElement amgu_klin(const SgflElement& d, const Binding& b, Closure c) {
  if (d.is_bottom()) return d;
  const BindingFacts k = binding_facts(d, b);
  auto sh = klin_sharing(d.sh, d.l, b, k, c);
  if (!sh) return amgu_sgfl(d, b, c);
  // The refinement requires both ground-or-free tests to fail, so gf'' is the
  // same four-way case as in the plain operator: the last one.
  SgflElement out{d.vi, std::move(*sh), amgu_free(d.f, k), {}, {}};
  out.gf = (d.vi - out.sh.vars()) | (d.gf - (k.rx.vars() | k.rt.vars()));
  out.l = out.gf | amgu_lin(d.l, k);
  return canonical(std::move(out));
}

Decomposition free_decompose(const SharingSet& sh, VarSet f, std::size_t bound) {
  const VarSet free_shared = f & sh.vars();
  if (free_shared.empty()) return {{sh}, false};
  std::vector<VarSet> with_free;
  std::vector<VarSet> without_free;
  for (VarSet g : sh) (g.intersects(free_shared) ? with_free : without_free).push_back(g);
  std::vector<std::vector<VarSet>> covers;
  std::vector<VarSet> chosen;
  bool overflow = false;
  enumerate_covers(with_free, free_shared, free_shared, chosen, covers, bound, overflow);
  if (overflow || covers.empty()) return {{sh}, true};
  Decomposition out;
  for (auto& cover : covers) {
    cover.insert(cover.end(), without_free.begin(), without_free.end());
    out.components.emplace_back(std::move(cover));
  }
  return out;
}

std::vector<SflElement> free_decompose(const SflElement& d, std::size_t bound) {
  std::vector<SflElement> out;
  for (SharingSet& sh : free_decompose(d.sh, d.f, bound).components) out.push_back({d.vi, std::move(sh), d.f, d.l});
  return out;
}

SflElement amgu_free_split(const SflElement& d, const Binding& b,
                           const std::function<SflElement(const SflElement&, const Binding&)>& amgu,
                           std::size_t bound, bool* fell_back) {
  return free_split_common<SflElement>(d, b, amgu, &sfl_lub, bound, fell_back);
}

SgflElement amgu_free_split(const SgflElement& d, const Binding& b,
                            const std::function<SgflElement(const SgflElement&, const Binding&)>& amgu,
                            std::size_t bound, bool* fell_back) {
  return free_split_common<SgflElement>(d, b, amgu, &sgfl_lub, bound, fell_back);
}

SflElement amgu_free_split(const SflElement& d, const Binding& b, Closure c) {
  return amgu_free_split(d, b, [c](const SflElement& x, const Binding& y) { return amgu_sfl(x, y, c); });
}

bool compound_reduce_applicable(VarSet f, const Binding& b, VarSet compound) {
  if (!f.contains(b.lhs)) return false;
  if (b.rhs.is_compound()) return true;
  return b.rhs.is_variable() && compound.contains(b.rhs.var());
}

std::optional<SflElement> compound_reduce(const SflElement& d, const Binding& b, VarSet compound,
                                          bool occurs_check) {
  return compound_common(d, b, compound, occurs_check);
}

std::optional<SgflElement> compound_reduce(const SgflElement& d, const Binding& b, VarSet compound,
                                           bool occurs_check) {
  return compound_common(d, b, compound, occurs_check);
}

}  // namespace sharing
