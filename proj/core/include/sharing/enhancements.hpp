// Copyright (c) sharing-analysis contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sharing/mode_domains.hpp"
#include "sharing/pos.hpp"

namespace sharing {

enum class OrderingStrategy { Textual, Reverse, DelayStarUnions, MaxFreeLin };

std::string_view to_string(OrderingStrategy s);
std::optional<OrderingStrategy> parse_ordering(std::string_view text);

/// x is already ground or t is already ground.
bool is_grounding(const SharingSet& sh, const Binding& b);

/// Splits bs into grounding and non-grounding bindings, keeping relative order.
std::pair<std::vector<Binding>, std::vector<Binding>> partition_grounding(const SharingSet& sh,
                                                                          const std::vector<Binding>& bs);

/// Removes the groups containing a variable that phi makes definitely ground
/// and recovers linearity (and ground-or-freeness) for the ground variables.
SflElement apply_groundness(const PosFormula& phi, const SflElement& d);
SgflElement apply_groundness(const PosFormula& phi, const SgflElement& d);

/// Keeps the groups S of sh such that VI \ S is a model of phi.
///
/// Evaluates phi directly on each complement, so no enumeration bound
/// applies. `sh` must not be pair-cover reduced.
SharingSet reduce_product(const PosFormula& phi, const SharingSet& sh, VarSet vi);

/// Number of relevant components the amgu of b would star (0, 1 or 2).
int star_count(const SflElement& d, const Binding& b);
int star_count(const SgflElement& d, const Binding& b);

/// Orders bindings greedily against the description they are applied to.
///
/// At every step a binding that is grounding for the current description is
/// preferred; among the candidates the strategy decides, ties going to textual
/// order. `amgu` is the operator that will execute the bindings, used to
/// advance the description and, for MaxFreeLin, to score candidates.
/// `Element` needs `sh`, `f` and `l` members and a `star_count` overload.
template <typename Element>
std::vector<Binding> order_bindings(OrderingStrategy strategy, const Element& d, const std::vector<Binding>& bs,
                                    const std::function<Element(const Element&, const Binding&)>& amgu) {
  std::vector<Binding> remaining = bs;
  std::vector<Binding> out;
  out.reserve(bs.size());
  Element cur = d;
  while (!remaining.empty()) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      if (is_grounding(cur.sh, remaining[i])) candidates.push_back(i);
    }
    if (candidates.empty()) {
      for (std::size_t i = 0; i < remaining.size(); ++i) candidates.push_back(i);
    }
    std::size_t pick = candidates.front();
    switch (strategy) {
      case OrderingStrategy::Textual:
        break;
      case OrderingStrategy::Reverse:
        pick = candidates.back();
        break;
      case OrderingStrategy::DelayStarUnions: {
        int best = 3;
        for (std::size_t i : candidates) {
          const int stars = star_count(cur, remaining[i]);
          if (stars < best) {
            best = stars;
            pick = i;
          }
        }
        break;
      }
      case OrderingStrategy::MaxFreeLin: {
        std::pair<std::size_t, std::size_t> best{0, 0};
        bool first = true;
        for (std::size_t i : candidates) {
          const Element r = amgu(cur, remaining[i]);
          const std::pair<std::size_t, std::size_t> score{r.f.size(), r.l.size()};
          if (first || score > best) {
            best = score;
            pick = i;
            first = false;
          }
        }
        break;
      }
    }
    out.push_back(remaining[pick]);
    if (remaining.size() > 1) cur = amgu(cur, remaining[pick]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return out;
}

/// The linearity-refined amgu: when x is linear and non-free, t is non-linear
/// and independent of x, the linear variables of t are joined without
/// star-union. Falls back to the plain operator when the conditions fail.
SflElement amgu_klin(const SflElement& d, const Binding& b, Closure c = Closure::Star);
SgflElement amgu_klin(const SgflElement& d, const Binding& b, Closure c = Closure::Star);

/// Default bound on the number of components of a freeness decomposition.
inline constexpr std::size_t kDefaultComponentBound = 4096;

struct Decomposition {
  std::vector<SharingSet> components;
  /// True when the component bound was exceeded or no consistent component
  /// exists; `components` then holds the undecomposed sharing set.
  bool fell_back = false;
};

/// Splits sh into the maximal sub-sets in which every free variable occurring
/// in sh lies in exactly one group. Groups without free variables belong to
/// every component.
Decomposition free_decompose(const SharingSet& sh, VarSet f, std::size_t bound = kDefaultComponentBound);
std::vector<SflElement> free_decompose(const SflElement& d, std::size_t bound = kDefaultComponentBound);

/// The lub of `amgu` applied to every decomposition component of d. Sets
/// `*fell_back` when the decomposition was not possible.
SflElement amgu_free_split(const SflElement& d, const Binding& b,
                           const std::function<SflElement(const SflElement&, const Binding&)>& amgu,
                           std::size_t bound = kDefaultComponentBound, bool* fell_back = nullptr);
SgflElement amgu_free_split(const SgflElement& d, const Binding& b,
                            const std::function<SgflElement(const SgflElement&, const Binding&)>& amgu,
                            std::size_t bound = kDefaultComponentBound, bool* fell_back = nullptr);
/// Decomposition followed by the plain SFL amgu.
SflElement amgu_free_split(const SflElement& d, const Binding& b, Closure c = Closure::Star);

/// Whether the compoundness reduction applies: one side is a free variable and
/// the other a compound term or a variable known to be compound.
bool compound_reduce_applicable(VarSet f, const Binding& b, VarSet compound);

/// Drops the groups containing both sides of b before the amgu, which is only
/// valid under occurs-check. Returns nullopt (bottom) when a free variable of
/// sh loses all its groups. Without occurs-check, or when not applicable,
/// returns d unchanged.
std::optional<SflElement> compound_reduce(const SflElement& d, const Binding& b, VarSet compound,
                                          bool occurs_check);
std::optional<SgflElement> compound_reduce(const SgflElement& d, const Binding& b, VarSet compound,
                                           bool occurs_check);

}  // namespace sharing
