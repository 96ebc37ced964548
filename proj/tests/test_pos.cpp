// Copyright (c) sharing-analysis contributors.
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "sharing/pos.hpp"
#include "support/test_support.hpp"

namespace sharing {
namespace {

using namespace sharing::testing;

const VarId x = 0, y = 1, z = 2;
const VarSet kVI{x, y, z};

PosFormula P(const std::string& text) { return parse_pos(text, kXZ); }

// Truth-table comparison against a reference predicate over `vars`.
void expect_function(const PosFormula& f, VarSet vars, const std::function<bool(VarSet)>& expected) {
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << vars.size()); ++bits) {
    VarSet assignment;
    std::size_t i = 0;
    for (VarId v : vars) {
      if ((bits >> i++) & 1) assignment.insert(v);
    }
    EXPECT_EQ(f.evaluate(assignment), expected(assignment)) << "assignment " << assignment.bits();
  }
}

TEST(Pos, Constants) {
  EXPECT_TRUE(PosFormula::truth().is_true());
  EXPECT_TRUE(PosFormula::falsum().is_false());
  EXPECT_TRUE(PosFormula::conj(VarSet{}).is_true());
  EXPECT_EQ(P("true"), PosFormula());
}

TEST(Pos, AmguExamples) {
  const PosFormula t = PosFormula::truth();
  const PosFormula a = pos_amgu(t, Binding{x, F("f", {V(y), V(z)})});
  expect_function(a, kVI, [](VarSet s) { return s.contains(x) == (s.contains(y) && s.contains(z)); });
  EXPECT_EQ(a, P("x <-> y & z"));
  EXPECT_EQ(pos_amgu(t, Binding{x, A()}), P("x"));
  EXPECT_EQ(pos_amgu(t, Binding{x, F("f", {V(x), V(y)})}), P("x <-> y"));
}

TEST(Pos, GroundVarsAndLub) {
  EXPECT_EQ(ground_vars(P("x & (y <-> z)"), kVI), VarSet{x});
  const PosFormula d = pos_lub(P("x"), P("y"));
  EXPECT_EQ(d, P("x \\/ y"));
  EXPECT_TRUE(ground_vars(d, kVI).empty());
}

TEST(Pos, Projection) {
  EXPECT_TRUE(pos_project(P("x <-> y"), VarSet{y}).is_true());
  EXPECT_EQ(pos_project(P("(x <-> y) & (y <-> z)"), VarSet{y}), P("x <-> z"));
  EXPECT_EQ(restrict(P("x <-> y & z"), z, true), P("x <-> y"));
}

TEST(Pos, BinaryDisjunction) {
  EXPECT_TRUE(entails_binary_disjunction(P("x \\/ y"), x, y));
  EXPECT_FALSE(entails_binary_disjunction(PosFormula::truth(), x, y));
  EXPECT_TRUE(entails_binary_disjunction(P("x"), x, y));
}

TEST(Pos, GroundEquivalenceClasses) {
  const auto classes = ground_equiv_classes(P("(x <-> y) & z"), kVI);
  EXPECT_EQ(classes, (std::vector<VarSet>{VarSet{x, y}, VarSet{z}}));
  EXPECT_EQ(ground_equiv_classes(PosFormula::truth(), kVI),
            (std::vector<VarSet>{VarSet{x}, VarSet{y}, VarSet{z}}));
  EXPECT_EQ(ground_equiv_classes(P("x <-> y <-> z"), kVI), (std::vector<VarSet>{kVI}));
}

TEST(Pos, Models) {
  EXPECT_EQ(models(P("x <-> y <-> z"), kVI), (std::vector<VarSet>{VarSet{}, kVI}));
  EXPECT_EQ(models(PosFormula::truth(), VarSet{x}), (std::vector<VarSet>{VarSet{}, VarSet{x}}));
  EXPECT_EQ(models(P("x"), VarSet{x, y}), (std::vector<VarSet>{VarSet{x}, VarSet{x, y}}));
  EXPECT_THROW(models(PosFormula::truth(), VarSet::prefix(30)), ModelBoundExceeded);
}

TEST(Pos, ShiftRenames) {
  const PosFormula f = P("x <-> y");
  const PosFormula g = f.shifted(3);
  EXPECT_EQ(g.support(), (VarSet{3, 4}));
  EXPECT_EQ(g.shifted(-3), f);
}

TEST(Pos, ToStringRoundTrip) {
  for (const char* text : {"true", "x", "x <-> y & z", "x \\/ y", "(x <-> y) & z"}) {
    const PosFormula f = P(text);
    EXPECT_EQ(parse_pos(to_string(f, kXZ), kXZ), f) << text;
  }
}

// Random formulas built from bindings and lubs, compared with an explicit
// truth-table construction.
TEST(PosProperties, OperationsAgreeWithTruthTables) {
  std::mt19937 rng(7);
  const VarSet vi = VarSet::prefix(4);
  for (int i = 0; i < 300; ++i) {
    const Binding b1 = random_binding(rng, 4, 2);
    const Binding b2 = random_binding(rng, 4, 2);
    const auto sat = [](const Binding& b, VarSet s) {
      if (b.rhs.is_variable() && b.rhs.var() == b.lhs) return true;
      // For x = t(x, ys), x is ground exactly when the ys are.
      const VarSet t = vars_of(b.rhs) - VarSet{b.lhs};
      return s.contains(b.lhs) == t.subset_of(s);
    };
    const PosFormula f = pos_amgu(pos_amgu(PosFormula::truth(), b1), b2);
    SCOPED_TRACE(to_string(b1, kWZ) + " ; " + to_string(b2, kWZ));
    expect_function(f, vi, [&](VarSet s) { return sat(b1, s) && sat(b2, s); });
    const PosFormula g = pos_amgu(PosFormula::truth(), b2);
    const PosFormula l = pos_lub(f, g);
    expect_function(l, vi, [&](VarSet s) { return f.evaluate(s) || g.evaluate(s); });
    // Positivity and the projection laws.
    ASSERT_TRUE(f.evaluate(vi));
    const VarSet drop = random_subset(rng, vi);
    const PosFormula p = pos_project(f, drop);
    ASSERT_TRUE(f.entails(p));
    ASSERT_FALSE(p.support().intersects(drop));
    ASSERT_TRUE(ground_vars(f, vi).subset_of(ground_vars(f & g, vi)));
  }
}

}  // namespace
}  // namespace sharing
