// Copyright (c) sharing-analysis contributors.
// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <fstream>
#include <random>
#include <sstream>

#include "sharing/enhancements.hpp"
#include "sharing/precision.hpp"

namespace {

using namespace sharing;

// Groups over n variables, each a random mask, seeded for repeatability.
SharingSet make_sharing(std::size_t n, std::size_t groups, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::uint64_t> mask(1, (std::uint64_t{1} << n) - 1);
  std::vector<VarSet> out;
  for (std::size_t i = 0; i < groups; ++i) out.emplace_back(mask(rng));
  return SharingSet(std::move(out));
}

Binding wide_binding(std::size_t n) {
  std::vector<Term> args;
  for (VarId v = 1; v < n; v += 2) args.push_back(Term::variable(v));
  return Binding{0, Term::compound("f", std::move(args))};
}

void BM_AmguSh(benchmark::State& state) {
  const std::size_t n = 12;
  const SharingSet s = make_sharing(n, static_cast<std::size_t>(state.range(0)), 1);
  const Binding b = wide_binding(n);
  for (auto _ : state) benchmark::DoNotOptimize(amgu_sh(s, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AmguSh)->RangeMultiplier(2)->Range(4, 32);

void BM_AmguPsd(benchmark::State& state) {
  const std::size_t n = 12;
  const SharingSet s = make_sharing(n, static_cast<std::size_t>(state.range(0)), 1);
  const Binding b = wide_binding(n);
  for (auto _ : state) benchmark::DoNotOptimize(amgu_psd(s, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AmguPsd)->RangeMultiplier(2)->Range(4, 32);

void BM_RhoReduce(benchmark::State& state) {
  const SharingSet s = star_union(make_sharing(10, static_cast<std::size_t>(state.range(0)), 3));
  for (auto _ : state) benchmark::DoNotOptimize(rho_reduce(s));
  state.counters["groups"] = static_cast<double>(s.size());
}
BENCHMARK(BM_RhoReduce)->Arg(4)->Arg(6)->Arg(8);

void BM_AmguSfl(benchmark::State& state) {
  const VarSet vi = VarSet::prefix(10);
  SflElement d{vi, make_sharing(10, 24, 5), VarSet{}, VarSet{0, 2, 4}};
  d = canonical(d);
  const Binding b = wide_binding(10);
  const Closure c = state.range(0) == 0 ? Closure::Star : Closure::SelfBin;
  for (auto _ : state) benchmark::DoNotOptimize(amgu_sfl(d, b, c));
  state.SetLabel(c == Closure::Star ? "star" : "self-bin");
}
BENCHMARK(BM_AmguSfl)->Arg(0)->Arg(1);

void BM_FreeDecompose(benchmark::State& state) {
  const SharingSet s = make_sharing(8, static_cast<std::size_t>(state.range(0)), 9);
  const VarSet f{0, 1, 2, 3};
  for (auto _ : state) benchmark::DoNotOptimize(free_decompose(s, f));
}
BENCHMARK(BM_FreeDecompose)->Arg(8)->Arg(16)->Arg(24);

void BM_PosAmgu(benchmark::State& state) {
  const Binding b = wide_binding(static_cast<std::size_t>(state.range(0)));
  const Binding c{1, Term::compound("g", {Term::variable(0), Term::variable(2)})};
  for (auto _ : state) benchmark::DoNotOptimize(pos_amgu(pos_amgu(PosFormula::truth(), b), c));
}
BENCHMARK(BM_PosAmgu)->Arg(8)->Arg(32);

Program load(const char* name) {
  std::ifstream in(std::string(SHARING_CORPUS_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str());
}

void BM_AnalyzeCorpus(benchmark::State& state, const char* file, Domain domain) {
  const Program prog = load(file);
  AnalysisConfig c;
  c.domain = domain;
  c.timeout_seconds = 30;
  for (auto _ : state) benchmark::DoNotOptimize(analyze(prog, c));
}
BENCHMARK_CAPTURE(BM_AnalyzeCorpus, qsort_sfl2, "qsort.pl", Domain::Sfl2);
BENCHMARK_CAPTURE(BM_AnalyzeCorpus, qsort_pos_x_sfl2, "qsort.pl", Domain::PosXSfl2);
BENCHMARK_CAPTURE(BM_AnalyzeCorpus, serialize_sgfl2, "serialize.pl", Domain::Sgfl2);
BENCHMARK_CAPTURE(BM_AnalyzeCorpus, zebra_sfl2, "zebra.pl", Domain::Sfl2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
