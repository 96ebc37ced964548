// Copyright (c) sharing-analysis contributors.
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "sharing/concrete_oracle.hpp"
#include "sharing/enhancements.hpp"
#include "support/test_support.hpp"

namespace sharing {
namespace {

using namespace sharing::testing;

const VarId u = 0, v = 1, w = 2, x = 3, y = 4, z = 5;

const std::function<SflElement(const SflElement&, const Binding&)> kSfl = [](const SflElement& d,
                                                                              const Binding& b) {
  return amgu_sfl(d, b);
};

TEST(Grounding, Examples) {
  EXPECT_TRUE(is_grounding(sh("{xy}"), Binding{x, A()}));
  EXPECT_TRUE(is_grounding(sh("{y}"), Binding{x, V(y)}));
  const SharingSet s = sh("{vy, wy, xy, yz}");
  EXPECT_FALSE(is_grounding(s, Binding{v, V(w)}));
  EXPECT_FALSE(is_grounding(s, Binding{x, V(y)}));
}

TEST(Grounding, PartitionKeepsOrder) {
  const std::vector<Binding> bs{Binding{x, V(y)}, Binding{u, A()}, Binding{v, V(w)}, Binding{z, A("b")}};
  const auto [g, rest] = partition_grounding(sh("{vy, wy, xy, yz}"), bs);
  EXPECT_EQ(g, (std::vector<Binding>{bs[1], bs[3]}));
  EXPECT_EQ(rest, (std::vector<Binding>{bs[0], bs[2]}));
}

TEST(ApplyGroundness, Examples) {
  const SflElement d = sfl("<{xy, z}, {}, {}>", kXZ);
  const SflElement r = apply_groundness(PosFormula::var(0), d);
  EXPECT_EQ(r.sh, sh("{z}", kXZ));
  EXPECT_TRUE(r.l.contains(1));
  EXPECT_TRUE(r.l.contains(0));
  EXPECT_EQ(apply_groundness(PosFormula::truth(), d), d);
  const SflElement all = apply_groundness(PosFormula::conj(VarSet::prefix(3)), d);
  EXPECT_TRUE(all.sh.empty());
  EXPECT_EQ(all.l, VarSet::prefix(3));
  const SgflElement g = apply_groundness(PosFormula::var(0), SgflElement::from_sfl(d));
  EXPECT_TRUE(g.gf.contains(0));
  EXPECT_TRUE(g.gf.contains(1));
}

TEST(ReduceProduct, Examples) {
  const PosFormula phi = parse_pos("x <-> y <-> z", kXZ);
  const VarSet vi = VarSet::prefix(3);
  EXPECT_EQ(reduce_product(phi, sh("{xy, xz, yz, xyz}", kXZ), vi), sh("{xyz}", kXZ));
  EXPECT_TRUE(reduce_product(phi, sh("{xy, xz, yz}", kXZ), vi).empty());
  const SharingSet s = sh("{x, xy, z}", kXZ);
  EXPECT_EQ(reduce_product(PosFormula::truth(), s, vi), s);
}

TEST(Ordering, DelayStarUnionsFirstExample) {
  const SflElement d = sfl("<{vw, wx, wy, z}, {}, {u, v, x, y}>");
  const Binding vw{v, V(w)};
  const Binding xz{x, V(z)};
  EXPECT_EQ(star_count(d, xz), 1);
  EXPECT_EQ(star_count(d, vw), 2);
  EXPECT_EQ(order_bindings(OrderingStrategy::DelayStarUnions, d, {vw, xz}, kSfl), (std::vector<Binding>{xz, vw}));
  EXPECT_EQ(order_bindings(OrderingStrategy::Textual, d, {vw, xz}, kSfl), (std::vector<Binding>{vw, xz}));
  EXPECT_EQ(order_bindings(OrderingStrategy::Reverse, d, {vw, xz}, kSfl), (std::vector<Binding>{xz, vw}));
}

TEST(Ordering, FirstExampleSequences) {
  const SflElement d = sfl("<{vw, wx, wy, z}, {}, {u, v, x, y}>");
  const Binding vw{v, V(w)};
  const Binding xz{x, V(z)};
  const SflElement d1 = amgu_sfl(d, xz);
  EXPECT_EQ(d1, sfl("<{vw, wxz, wy}, {}, {u, v, y}>"));
  EXPECT_EQ(amgu_sfl(d1, vw), sfl("<{vw, vwxyz, vwxz, vwy}, {}, {u, y}>"));
  const SflElement d2 = amgu_sfl(d, vw);
  EXPECT_EQ(d2, sfl("<{vw, vwx, vwxy, vwy, z}, {}, {u, x, y}>"));
  EXPECT_EQ(amgu_sfl(d2, xz), sfl("<{vw, vwxyz, vwxz, vwy}, {}, {u}>"));
}

TEST(Ordering, DelayStarUnionsCanLoseIndependence) {
  const SflElement d = sfl("<{u, uw, v, w, xy, xz}, {u, x}, {u, x}>");
  const Binding ux{u, V(x)};
  const Binding vw{v, V(w)};
  EXPECT_EQ(order_bindings(OrderingStrategy::DelayStarUnions, d, {ux, vw}, kSfl), (std::vector<Binding>{ux, vw}));
  const SflElement d12 = amgu_sfl(amgu_sfl(d, ux), vw);
  const SflElement d21 = amgu_sfl(amgu_sfl(d, vw), ux);
  EXPECT_EQ(d12, sfl("<{uvwxy, uvwxyz, uvwxz, uxy, uxz, vw}, {}, {}>"));
  EXPECT_EQ(d21, sfl("<{uvwxy, uvwxz, uxy, uxz, vw}, {}, {}>"));
  EXPECT_TRUE(ind(d21, V(y), V(z)));
  EXPECT_FALSE(ind(d12, V(y), V(z)));
}

TEST(Ordering, MaxFreeLinPrefersFreenessThenLinearity) {
  const SflElement d = sfl("<{vy, wy, xy, yz}, {}, {u, x, z}>");
  const Binding vw{v, V(w)};
  const Binding xy{x, V(y)};
  // v = w keeps x and z linear; x = y loses x.
  EXPECT_EQ(order_bindings(OrderingStrategy::MaxFreeLin, d, {xy, vw}, kSfl), (std::vector<Binding>{vw, xy}));
}

TEST(Ordering, SingletonIsUnchanged) {
  const SflElement d = sfl("<{vy, wy, xy, yz}, {}, {u, x, z}>");
  const std::vector<Binding> one{Binding{x, V(y)}};
  for (auto s : {OrderingStrategy::Textual, OrderingStrategy::Reverse, OrderingStrategy::DelayStarUnions,
                 OrderingStrategy::MaxFreeLin}) {
    EXPECT_EQ(order_bindings(s, d, one, kSfl), one);
  }
  EXPECT_EQ(parse_ordering("stardelay"), OrderingStrategy::DelayStarUnions);
  EXPECT_EQ(parse_ordering("freelin"), OrderingStrategy::MaxFreeLin);
  EXPECT_FALSE(parse_ordering("random").has_value());
}

TEST(Klin, RefinesTheExample) {
  const SflElement d = sfl("<{vx, wx, y, z}, {v, w, y}, {v, w, x, y}>", kVZ);
  const Binding b{id(kVZ, "x"), F("f", {V(id(kVZ, "y")), V(id(kVZ, "z"))})};
  const SflElement k = amgu_klin(d, b);
  const SflElement s = amgu_sfl(d, b);
  EXPECT_EQ(k, sfl("<{vwxz, vxy, vxz, wxy, wxz}, {}, {y}>", kVZ));
  EXPECT_EQ(s, sfl("<{vwxy, vwxz, vxy, vxz, wxy, wxz}, {}, {y}>", kVZ));
  EXPECT_TRUE(k.sh.subset_of(s.sh));
  EXPECT_NE(k.sh, s.sh);
}

TEST(Klin, FreeLhsFallsBack) {
  const SflElement d = sfl("<{vx, wx, y, z}, {v, w, x, y}, {v, w, x, y}>", kVZ);
  const Binding b{id(kVZ, "x"), F("f", {V(id(kVZ, "y")), V(id(kVZ, "z"))})};
  EXPECT_EQ(amgu_klin(d, b), amgu_sfl(d, b));
}

TEST(Decompose, ReducedElementHasFourComponents) {
  const SflElement d = sfl("<{w, x, xy, xz, y, yz, z}, {w, x, y, z}, {w, x, y, z}>", kWZ);
  const auto parts = free_decompose(d);
  std::vector<SharingSet> got;
  for (const auto& p : parts) got.push_back(p.sh);
  std::sort(got.begin(), got.end(), [](const SharingSet& a, const SharingSet& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), LexLess{});
  });
  std::vector<SharingSet> want{sh("{w, x, y, z}", kWZ), sh("{w, x, yz}", kWZ), sh("{w, xz, y}", kWZ),
                               sh("{w, xy, z}", kWZ)};
  std::sort(want.begin(), want.end(), [](const SharingSet& a, const SharingSet& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), LexLess{});
  });
  EXPECT_EQ(got, want);
  for (const auto& p : parts) {
    EXPECT_EQ(p.f, d.f);
    EXPECT_EQ(p.l, d.l);
  }
}

TEST(Decompose, FullElementAddsFifthComponent) {
  const SharingSet full = sh("{w, x, xy, xyz, xz, y, yz, z}", kWZ);
  const Decomposition dec = free_decompose(full, VarSet::prefix(4));
  EXPECT_FALSE(dec.fell_back);
  EXPECT_EQ(dec.components.size(), 5u);
  EXPECT_NE(std::find(dec.components.begin(), dec.components.end(), sh("{w, xyz}", kWZ)), dec.components.end());
}

TEST(Decompose, NoFreeVariablesGivesOneComponent) {
  const SflElement d = sfl("<{xy, yz}, {}, {x}>", kXZ);
  const auto parts = free_decompose(d);
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0], d);
}

TEST(Decompose, BoundFallsBack) {
  const SharingSet full = sh("{w, x, xy, xyz, xz, y, yz, z}", kWZ);
  const Decomposition dec = free_decompose(full, VarSet::prefix(4), 2);
  EXPECT_TRUE(dec.fell_back);
  ASSERT_EQ(dec.components.size(), 1u);
  EXPECT_EQ(dec.components[0], full);
  bool fell_back = false;
  const SflElement d{VarSet::prefix(4), full, VarSet::prefix(4), VarSet::prefix(4)};
  const Binding b{0, V(1)};
  EXPECT_EQ(amgu_free_split(d, b, kSfl, 2, &fell_back), amgu_sfl(d, b));
  EXPECT_TRUE(fell_back);
}

TEST(Compound, ReductionBeforeAmgu) {
  const VarId cw = 0, cx = 1, cy = 2, cz = 3;
  const SflElement d = sfl("<{wx, xy, xz, y, z}, {x}, {w, x, y, z}>", kWZ);
  const Binding b{cx, F("f", {V(cy), V(cz)})};
  const auto r = compound_reduce(d, b, VarSet{}, true);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->sh, sh("{wx, y, z}", kWZ));
  const SflElement after = amgu_sfl(*r, b);
  EXPECT_EQ(after.sh, sh("{wxy, wxz}", kWZ));
  EXPECT_EQ(after.l, (VarSet{cw, cx, cy, cz}));
}

TEST(Compound, KnownCompoundVariable) {
  const VarId cx = 1, cy = 2;
  const SflElement d = sfl("<{wx, xyz, y}, {x}, {w, x, y, z}>", kWZ);
  const Binding b{cx, V(cy)};
  const auto r = compound_reduce(d, b, VarSet{cy}, true);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->sh, sh("{wx, y}", kWZ));
  const SflElement after = amgu_sfl(*r, b);
  EXPECT_EQ(after.sh, sh("{wxy}", kWZ));
  EXPECT_EQ(after.l, VarSet::prefix(4));
}

TEST(Compound, InconsistentStateIsBottom) {
  const SflElement d = sfl("<{wxy, wxz, x, y, z}, {w, x}, {w, x, y, z}>", kWZ);
  const Binding b{1, F("f", {V(2), V(3)})};
  EXPECT_FALSE(compound_reduce(d, b, VarSet{}, true).has_value());
}

TEST(Compound, WithoutOccursCheckIsSkipped) {
  const SflElement d = sfl("<{wxy, wxz, x, y, z}, {w, x}, {w, x, y, z}>", kWZ);
  const Binding b{1, F("f", {V(2), V(3)})};
  const auto r = compound_reduce(d, b, VarSet{}, false);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(*r, d);
  EXPECT_FALSE(compound_reduce_applicable(VarSet{}, b, VarSet{}));
}

class EnhancementProperties : public ::testing::Test {
 protected:
  std::mt19937 rng{4242};
  RandomTerms gen{4, 2, 3};

  SflElement random_element() {
    std::vector<Substitution> sigmas;
    std::uniform_int_distribution<int> count(1, 3);
    for (int i = count(rng); i > 0; --i) sigmas.push_back(gen.substitution(rng));
    return alpha(sigmas, gen.n);
  }
};

TEST_F(EnhancementProperties, OrderingIsAPermutationWithGroundingFirst) {
  for (int i = 0; i < 300; ++i) {
    const SflElement d = random_element();
    std::vector<Binding> bs;
    for (int k = 0; k < 4; ++k) bs.push_back(gen.binding(rng));
    for (auto s : {OrderingStrategy::Textual, OrderingStrategy::Reverse, OrderingStrategy::DelayStarUnions,
                   OrderingStrategy::MaxFreeLin}) {
      const auto out = order_bindings(s, d, bs, kSfl);
      ASSERT_TRUE(std::is_permutation(out.begin(), out.end(), bs.begin(), bs.end(),
                                      [](const Binding& a, const Binding& b) { return a == b; }));
      // Replaying the order: whenever some remaining binding is grounding
      // for the current description, the chosen one is grounding too.
      SflElement cur = d;
      std::vector<Binding> remaining = bs;
      for (const Binding& b : out) {
        const bool any = std::any_of(remaining.begin(), remaining.end(),
                                     [&](const Binding& r) { return is_grounding(cur.sh, r); });
        ASSERT_TRUE(!any || is_grounding(cur.sh, b));
        remaining.erase(std::find(remaining.begin(), remaining.end(), b));
        cur = amgu_sfl(cur, b);
      }
    }
  }
}

TEST_F(EnhancementProperties, ReduceIsShrinkingAndIdempotent) {
  for (int i = 0; i < 300; ++i) {
    const SharingSet s = random_sharing(rng, 4, 10);
    const Binding b = random_binding(rng, 4, 2);
    const PosFormula phi = pos_amgu(PosFormula::truth(), b);
    const SharingSet r = reduce_product(phi, s, VarSet::prefix(4));
    ASSERT_TRUE(r.subset_of(s));
    ASSERT_EQ(reduce_product(phi, r, VarSet::prefix(4)), r);
  }
}

TEST_F(EnhancementProperties, KlinRefinesSfl) {
  for (int i = 0; i < 500; ++i) {
    const SflElement d = random_element();
    const Binding b = gen.binding(rng);
    const SflElement k = amgu_klin(d, b);
    const SflElement s = amgu_sfl(d, b);
    ASSERT_TRUE(k.sh.subset_of(s.sh));
    ASSERT_EQ(k.f, s.f);
    ASSERT_EQ(k.l, s.l);
  }
}

TEST_F(EnhancementProperties, DecompositionCoversAndSplitRefines) {
  for (int i = 0; i < 300; ++i) {
    const SflElement d = random_element();
    const auto parts = free_decompose(d);
    SharingSet all;
    for (const auto& p : parts) {
      all = all | p.sh;
      for (VarId f : d.f & d.sh.vars()) {
        std::size_t holders = 0;
        for (VarSet g : p.sh) holders += g.contains(f) ? 1 : 0;
        ASSERT_EQ(holders, 1u);
      }
    }
    ASSERT_EQ(all, d.sh);
    const Binding b = gen.binding(rng);
    ASSERT_TRUE(leq(amgu_free_split(d, b), amgu_sfl(d, b)));
  }
}

}  // namespace
}  // namespace sharing
