// Copyright (c) sharing-analysis contributors.
// SPDX-License-Identifier: Apache-2.0

// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Runtime limits are part of the criteria.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sharing/concrete_oracle.hpp"
#include "sharing/enhancements.hpp"
#include "sharing/precision.hpp"
#include "support/test_support.hpp"

namespace {

using namespace sharing;
using namespace sharing::testing;
namespace fs = std::filesystem;

struct Outcome {
  bool ok = true;
  std::string detail;
  // When set, the time the limit applies to (the checked computation alone,
  // without fixture construction).
  std::optional<double> measured_seconds;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

struct Criterion {
  int number;
  const char* title;
  double limit_seconds;  // 0: no limit
  std::function<Outcome()> run;
};

// ---------------------------------------------------------------------------

Outcome ordering_goldens() {
  Outcome o;
  const VarId v = 1, w = 2, x = 3, y = 4;
  const SflElement d = sfl("<{vy, wy, xy, yz}, {}, {u, x, z}>");
  const Binding vw{v, V(w)};
  const Binding xy{x, V(y)};
  const auto start = std::chrono::steady_clock::now();
  const SflElement d1 = amgu_sfl(d, vw);
  const SflElement d12 = amgu_sfl(d1, xy);
  const SflElement d2 = amgu_sfl(d, xy);
  const SflElement d21 = amgu_sfl(d2, vw);
  o.measured_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(d1 == sfl("<{vwy, xy, yz}, {}, {u, x, z}>"), "d1 = " + format(d1, kUZ));
  o.require(d12 == sfl("<{vwxy, vwxyz, xy, xyz}, {}, {u, z}>"), "d12 = " + format(d12, kUZ));
  o.require(d2 == sfl("<{vwxy, vwxyz, vxy, vxyz, wxy, wxyz, xy, xyz}, {}, {u, z}>"), "d2 = " + format(d2, kUZ));
  o.require(d21 == sfl("<{vwxy, vwxyz, xy, xyz}, {}, {u}>"), "d21 = " + format(d21, kUZ));
  return o;
}

Outcome heuristic_goldens() {
  Outcome o;
  const VarId u = 0, v = 1, w = 2, x = 3, z = 5;
  const std::function<SflElement(const SflElement&, const Binding&)> amgu = [](const SflElement& d,
                                                                               const Binding& b) {
    return amgu_sfl(d, b);
  };
  const SflElement first = sfl("<{vw, wx, wy, z}, {}, {u, v, x, y}>");
  const Binding vw{v, V(w)};
  const Binding xz{x, V(z)};
  const auto order = order_bindings(OrderingStrategy::DelayStarUnions, first, {vw, xz}, amgu);
  o.require(order == std::vector<Binding>{xz, vw}, "first element: stardelay does not put x = z first");

  const SflElement second = sfl("<{u, uw, v, w, xy, xz}, {u, x}, {u, x}>");
  const Binding ux{u, V(x)};
  const auto order2 = order_bindings(OrderingStrategy::DelayStarUnions, second, {vw, ux}, amgu);
  o.require(order2 == std::vector<Binding>{ux, vw}, "second element: stardelay does not put u = x first");
  const SflElement d1 = amgu_sfl(second, ux);
  const SflElement d12 = amgu_sfl(d1, vw);
  const SflElement d2 = amgu_sfl(second, vw);
  const SflElement d21 = amgu_sfl(d2, ux);
  o.require(d1 == sfl("<{uwxy, uwxz, uxy, uxz, v, w}, {u, x}, {u, x}>"), "d1 = " + format(d1, kUZ));
  o.require(d12 == sfl("<{uvwxy, uvwxyz, uvwxz, uxy, uxz, vw}, {}, {}>"), "d12 = " + format(d12, kUZ));
  o.require(d2 == sfl("<{u, uvw, vw, xy, xz}, {x}, {x}>"), "d2 = " + format(d2, kUZ));
  o.require(d21 == sfl("<{uvwxy, uvwxz, uxy, uxz, vw}, {}, {}>"), "d21 = " + format(d21, kUZ));
  // The heuristic's order loses the independence of y and z.
  o.require(!ind(d12, V(4), V(5)) && ind(d21, V(4), V(5)), "y/z independence not lost by the heuristic order");
  return o;
}

Outcome reduce_goldens() {
  Outcome o;
  const PosFormula phi = parse_pos("x <-> y <-> z", kXZ);
  const VarSet vi = VarSet::prefix(3);
  const SharingSet full = reduce_product(phi, sh("{xy, xz, yz, xyz}", kXZ), vi);
  const SharingSet reduced = reduce_product(phi, sh("{xy, xz, yz}", kXZ), vi);
  o.require(full == sh("{xyz}", kXZ), "reduce on the full set = " + format(full, kXZ));
  o.require(reduced.empty(), "reduce on the reduced set = " + format(reduced, kXZ));
  AnalysisConfig c;
  c.domain = Domain::PosRedSfl;
  c.rho_reduced = true;
  o.require(validate(c).has_value(), "pos_red_sfl with pair-cover reduction was accepted");
  return o;
}

Outcome klin_goldens() {
  Outcome o;
  const SflElement d = sfl("<{vx, wx, y, z}, {v, w, y}, {v, w, x, y}>", kVZ);
  const Binding b{id(kVZ, "x"), F("f", {V(id(kVZ, "y")), V(id(kVZ, "z"))})};
  const SflElement k = amgu_klin(d, b);
  const SflElement s = amgu_sfl(d, b);
  o.require(k == sfl("<{vwxz, vxy, vxz, wxy, wxz}, {}, {y}>", kVZ), "klin = " + format(k, kVZ));
  o.require(s == sfl("<{vwxy, vwxz, vxy, vxz, wxy, wxz}, {}, {y}>", kVZ), "sfl = " + format(s, kVZ));
  o.require(k.sh.subset_of(s.sh) && k.sh != s.sh, "klin sharing is not a strict subset");
  return o;
}

std::set<std::string> component_texts(const std::vector<SharingSet>& parts) {
  std::set<std::string> out;
  for (const auto& p : parts) out.insert(format(p, kWZ));
  return out;
}

Outcome decomposition_goldens() {
  Outcome o;
  const VarSet f = VarSet::prefix(4);
  const std::set<std::string> c1_4{"{w, x, y, z}", "{w, x, yz}", "{w, xz, y}", "{w, xy, z}"};
  const Decomposition reduced = free_decompose(sh("{w, x, xy, xz, y, yz, z}", kWZ), f);
  o.require(!reduced.fell_back && component_texts(reduced.components) == c1_4,
            "reduced element components differ");
  std::set<std::string> c1_5 = c1_4;
  c1_5.insert("{w, xyz}");
  const Decomposition full = free_decompose(sh("{w, x, xy, xyz, xz, y, yz, z}", kWZ), f);
  o.require(!full.fell_back && component_texts(full.components) == c1_5, "full element components differ");
  o.require(reduced.components.size() == 4 && full.components.size() == 5, "duplicate components");
  return o;
}

Outcome compound_goldens() {
  Outcome o;
  const VarId x = 1, y = 2, z = 3;
  const Binding xf{x, F("f", {V(y), V(z)})};

  const SflElement a = sfl("<{wx, xy, xz, y, z}, {x}, {w, x, y, z}>", kWZ);
  const auto ra = compound_reduce(a, xf, VarSet{}, true);
  o.require(ra && ra->sh == sh("{wx, y, z}", kWZ), "first scenario: reduction");
  if (ra) {
    const SflElement after = amgu_sfl(*ra, xf);
    o.require(after.sh == sh("{wxy, wxz}", kWZ) && after.l == VarSet::prefix(4),
              "first scenario: amgu = " + format(after, kWZ));
  }

  const SflElement b = sfl("<{wx, xyz, y}, {x}, {w, x, y, z}>", kWZ);
  const Binding xy{x, V(y)};
  const auto rb = compound_reduce(b, xy, VarSet{y}, true);
  o.require(rb.has_value(), "second scenario: unexpected bottom");
  if (rb) {
    const SflElement after = amgu_sfl(*rb, xy);
    o.require(after.sh == sh("{wxy}", kWZ) && after.l == VarSet::prefix(4),
              "second scenario: amgu = " + format(after, kWZ));
  }

  const SflElement c = sfl("<{wxy, wxz, x, y, z}, {w, x}, {w, x, y, z}>", kWZ);
  o.require(!compound_reduce(c, xf, VarSet{}, true).has_value(), "third scenario: not bottom");
  return o;
}

Outcome rho_equivalence() {
  Outcome o;
  std::mt19937 rng(0xC0FFEE);
  std::uniform_int_distribution<std::size_t> nvars(1, 6);
  std::size_t cases = 0;
  for (; cases < 5000 && o.ok; ++cases) {
    const std::size_t n = nvars(rng);
    const SharingSet s = random_sharing(rng, n, 12);
    const Binding b = random_binding(rng, n, 2);
    if (!rho_eq(amgu_psd(s, b), amgu_sh(s, b))) {
      o.require(false, "counterexample: sh = " + format(s, kUZ) + ", " + to_string(b, kUZ));
    }
  }
  o.detail = o.ok ? std::to_string(cases) + " cases" : o.detail;
  return o;
}

// Every term of depth <= 1 over x, y, z, the constant a, f/1 and g/2.
std::vector<Term> shallow_terms() {
  std::vector<Term> leaves{V(0), V(1), V(2), A()};
  std::vector<Term> out = leaves;
  for (const Term& s : leaves) out.push_back(F("f", {s}));
  for (const Term& s : leaves) {
    for (const Term& t : leaves) out.push_back(F("g", {s, t}));
  }
  return out;
}

Outcome sh_commutativity() {
  Outcome o;
  std::vector<Binding> bindings;
  for (VarId x = 0; x < 3; ++x) {
    for (const Term& t : shallow_terms()) bindings.push_back(Binding{x, t});
  }
  std::size_t cases = 0;
  for (std::uint64_t mask = 0; mask < 128 && o.ok; ++mask) {
    std::vector<VarSet> groups;
    for (std::uint64_t g = 1; g < 8; ++g) {
      if ((mask >> (g - 1)) & 1) groups.emplace_back(g);
    }
    const SharingSet s(groups);
    std::vector<SharingSet> once;
    once.reserve(bindings.size());
    for (const Binding& b : bindings) once.push_back(amgu_sh(s, b));
    for (std::size_t i = 0; i < bindings.size() && o.ok; ++i) {
      for (std::size_t j = i + 1; j < bindings.size(); ++j) {
        ++cases;
        if (amgu_sh(once[i], bindings[j]) != amgu_sh(once[j], bindings[i])) {
          o.require(false, "counterexample: sh = " + format(s, kXZ) + ", " + to_string(bindings[i], kXZ) + " / " +
                               to_string(bindings[j], kXZ));
          break;
        }
      }
    }
  }
  if (o.ok) o.detail = std::to_string(cases) + " pairs";
  return o;
}

Outcome soundness() {
  Outcome o;
  std::mt19937 rng(2024);
  const RandomTerms gen{4, 2, 3};
  std::uniform_int_distribution<int> count(1, 3);
  const std::function<SflElement(const SflElement&, const Binding&)> plain = [](const SflElement& d,
                                                                               const Binding& b) {
    return amgu_sfl(d, b);
  };
  const std::function<SflElement(const SflElement&, const Binding&)> klin = [](const SflElement& d,
                                                                              const Binding& b) {
    return amgu_klin(d, b);
  };
  const std::function<SgflElement(const SgflElement&, const Binding&)> gfl = [](const SgflElement& d,
                                                                               const Binding& b) {
    return amgu_sgfl(d, b);
  };
  const std::size_t kCases = 2000;
  for (std::size_t i = 0; i < kCases && o.ok; ++i) {
    std::vector<Substitution> sigmas;
    for (int k = count(rng); k > 0; --k) sigmas.push_back(gen.substitution(rng));
    const Binding b = gen.binding(rng);
    o.require(soundness_check(sigmas, b, gen.n, plain), "amgu_sfl unsound on " + to_string(b, kWZ));
    o.require(soundness_check(sigmas, b, gen.n, klin), "amgu_klin unsound on " + to_string(b, kWZ));
    o.require(soundness_check(sigmas, b, gen.n, gfl), "amgu_sgfl unsound on " + to_string(b, kWZ));
  }
  if (o.ok) o.detail = std::to_string(kCases) + " cases per operator";
  return o;
}

Program load(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str());
}

Outcome corpus_differential() {
  Outcome o;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(SHARING_CORPUS_DIR)) {
    if (e.path().extension() == ".pl") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  o.require(!files.empty(), "empty corpus");
  std::size_t gf_gains = 0;
  for (AnalysisMode mode : {AnalysisMode::GoalIndependent, AnalysisMode::GoalDependent}) {
    std::vector<BenchmarkMetrics> base, comb, sgfl;
    for (const fs::path& f : files) {
      const Program prog = load(f);
      const std::string name = f.stem().string();
      AnalysisConfig c;
      c.mode = mode;
      c.timeout_seconds = 20;
      c.domain = Domain::Sfl2;
      base.push_back({name, measure(analyze(prog, c))});
      c.domain = Domain::PosXSfl2;
      comb.push_back({name, measure(analyze(prog, c))});
      c.domain = Domain::Sgfl2;
      sgfl.push_back({name, measure(analyze(prog, c))});
    }
    const std::string m(to_string(mode));
    const Comparison pc = compare(base, comb);
    for (const auto& row : pc.rows) {
      for (Quantity q : {Quantity::I, Quantity::G, Quantity::F, Quantity::L}) {
        const PrecisionClass cls = row.classes[static_cast<std::size_t>(q)];
        o.require(!is_loss(cls) && cls != PrecisionClass::Unknown,
                  m + ": pos_x_sfl2 vs sfl2 on " + row.benchmark + " " + std::string(to_string(q)) + " is " +
                      std::string(label(cls)));
      }
    }
    const Comparison sc = compare(base, sgfl);
    for (const auto& row : sc.rows) {
      for (Quantity q : {Quantity::I, Quantity::G, Quantity::F}) {
        const PrecisionClass cls = row.classes[static_cast<std::size_t>(q)];
        o.require(!is_loss(cls) && cls != PrecisionClass::Unknown,
                  m + ": sgfl2 vs sfl2 on " + row.benchmark + " " + std::string(to_string(q)) + " is " +
                      std::string(label(cls)));
      }
      if (is_gain(row.classes[static_cast<std::size_t>(Quantity::GF)])) ++gf_gains;
    }
  }
  o.require(gf_gains >= 1, "sgfl2 shows no GF improvement");
  if (o.ok) o.detail = std::to_string(files.size()) + " programs, " + std::to_string(gf_gains) + " GF gains";
  return o;
}

// Concrete lists of length <= 3 over the constant a and fresh variables;
// the second argument may also be a fresh variable or the constant.
std::vector<Term> small_lists(VarId& next_var) {
  std::vector<Term> out;
  for (int len = 0; len <= 3; ++len) {
    for (int mask = 0; mask < (1 << len); ++mask) {
      Term list = Term::atom("[]");
      for (int i = len - 1; i >= 0; --i) {
        const Term elem = ((mask >> i) & 1) ? Term::variable(next_var++) : Term::atom("a");
        list = Term::compound(".", {elem, list});
      }
      out.push_back(list);
    }
  }
  return out;
}

Term concatenate(const Term& xs, const Term& ys) {
  if (xs.is_atomic()) return ys;
  return Term::compound(".", {xs.args()[0], concatenate(xs.args()[1], ys)});
}

Outcome append_groundness() {
  Outcome o;
  VarId next = 3;
  std::vector<Term> firsts = small_lists(next);
  std::vector<Term> seconds = small_lists(next);
  seconds.push_back(Term::variable(next++));
  seconds.push_back(Term::atom("a"));
  std::set<VarSet, LexLess> observed;
  for (const Term& a : firsts) {
    for (const Term& b : seconds) {
      const Term c = concatenate(a, b);
      VarSet ground;
      if (vars_of(a).empty()) ground.insert(0);
      if (vars_of(b).empty()) ground.insert(1);
      if (vars_of(c).empty()) ground.insert(2);
      observed.insert(ground);
    }
  }
  const std::set<VarSet, LexLess> expected{VarSet{0, 1, 2}, VarSet{1}, VarSet{0}, VarSet{}};
  o.require(observed == expected, "concrete enumeration gave an unexpected model set");

  AnalysisConfig c;
  c.domain = Domain::Pos;
  const AnalysisResult r = analyze(load(fs::path(SHARING_CORPUS_DIR) / "append.pl"), c);
  const auto it = r.predicates.find(PredicateKey{"app", 3});
  o.require(it != r.predicates.end(), "no result for app/3");
  if (it == r.predicates.end()) return o;
  const PosFormula& phi = it->second.success.pos;
  const VarNames names{"X1", "X2", "X3"};
  o.require(phi.entails(parse_pos("X1 & X2 <-> X3", names)), "success pattern " + to_string(phi, names));
  const auto m = models(phi, VarSet::prefix(3));
  o.require(std::set<VarSet, LexLess>(m.begin(), m.end()) == observed, "models differ from the concrete enumeration");
  if (o.ok) o.detail = to_string(phi, names);
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "ordering example goldens", 0.001, ordering_goldens},
      {2, "heuristic ordering goldens", 0, heuristic_goldens},
      {3, "reduce goldens and configuration check", 0, reduce_goldens},
      {4, "enhanced linearity golden", 0, klin_goldens},
      {5, "freeness decomposition goldens", 0, decomposition_goldens},
      {6, "compoundness goldens", 0, compound_goldens},
      {7, "pair-cover equivalence of the self-bin amgu", 10, rho_equivalence},
      {8, "exhaustive sharing commutativity", 60, sh_commutativity},
      {9, "soundness against the concrete oracle", 30, soundness},
      {10, "corpus differential precision", 60, corpus_differential},
      {11, "append groundness against brute force", 0, append_groundness},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double limited = o.measured_seconds.value_or(secs);
    if (o.ok && c.limit_seconds > 0 && limited >= c.limit_seconds) {
      o.ok = false;
      o.detail = "runtime limit of " + std::to_string(c.limit_seconds) + " s exceeded";
    }
    failures += o.ok ? 0 : 1;
    std::printf("%s criterion %d: %s (%.3f s)%s%s\n", o.ok ? "PASS" : "FAIL", c.number, c.title, secs,
                o.detail.empty() ? "" : " - ", o.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
