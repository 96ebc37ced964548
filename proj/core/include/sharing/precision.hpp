// Copyright (c) sharing-analysis contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sharing/fixpoint_engine.hpp"

namespace sharing {

/// Precision counts; larger is more precise for every quantity.
struct Metrics {
  std::size_t I = 0;  ///< independent pairs
  std::size_t G = 0;  ///< definitely ground variables
  std::size_t F = 0;  ///< definitely free variables
  std::size_t GF = 0; ///< ground-or-free variables
  std::size_t L = 0;  ///< definitely linear variables

  Metrics& operator+=(const Metrics& o);
  bool operator==(const Metrics&) const = default;
};

/// Counts for one description over its own variables.
///
/// Domains without linearity report L = G (ground variables are linear);
/// domains without freeness report F = 0. A bottom description is maximally
/// precise.
Metrics measure(Domain domain, const Description& d);

/// Sum over success patterns (goal-independent) or over call and success
/// patterns (goal-dependent). nullopt for a timed-out result.
std::optional<Metrics> measure(const AnalysisResult& result);

enum class Quantity { I, G, F, GF, L };
inline constexpr std::array<Quantity, 5> kQuantities{Quantity::I, Quantity::G, Quantity::F, Quantity::GF,
                                                     Quantity::L};
std::string_view to_string(Quantity q);
std::size_t get(const Metrics& m, Quantity q);

enum class PrecisionClass {
  Gain20,   ///< p > 20
  Gain10,   ///< 10 < p <= 20
  Gain5,    ///< 5 < p <= 10
  Gain2,    ///< 2 < p <= 5
  Gain0,    ///< 0 < p <= 2
  Same,
  Loss0,    ///< -2 <= p < 0
  Loss2,    ///< -5 <= p < -2
  Loss5,    ///< -10 <= p < -5
  Loss10,   ///< -20 <= p < -10
  Loss20,   ///< p < -20
  Unknown,
};

inline constexpr std::array<PrecisionClass, 12> kPrecisionClasses{
    PrecisionClass::Gain20, PrecisionClass::Gain10, PrecisionClass::Gain5,  PrecisionClass::Gain2,
    PrecisionClass::Gain0,  PrecisionClass::Same,   PrecisionClass::Loss0,  PrecisionClass::Loss2,
    PrecisionClass::Loss5,  PrecisionClass::Loss10, PrecisionClass::Loss20, PrecisionClass::Unknown};

std::string_view label(PrecisionClass c);
bool is_gain(PrecisionClass c);
bool is_loss(PrecisionClass c);

/// p = (enhanced - baseline) / baseline * 100. A zero baseline counts as an
/// infinite change when the enhanced count is positive.
double percent_change(std::size_t baseline, std::size_t enhanced);
PrecisionClass classify(std::size_t baseline, std::size_t enhanced);
/// The largest improvement, unless some quantity degraded, in which case the
/// worst degradation. Unknown if any class is unknown.
PrecisionClass overall(const std::vector<PrecisionClass>& classes);

struct BenchmarkMetrics {
  std::string benchmark;
  /// nullopt when the run timed out.
  std::optional<Metrics> metrics;
};

struct BenchmarkComparison {
  std::string benchmark;
  std::optional<Metrics> baseline;
  std::optional<Metrics> enhanced;
  /// Per quantity, in kQuantities order; nullopt when unknown.
  std::array<std::optional<double>, 5> percent;
  std::array<PrecisionClass, 5> classes{};
  PrecisionClass overall = PrecisionClass::Same;
};

struct Comparison {
  std::vector<BenchmarkComparison> rows;

  /// Share of benchmarks in class c for quantity q (or the overall column
  /// when q is nullopt), as a percentage.
  double distribution(std::optional<Quantity> q, PrecisionClass c) const;
  std::size_t count(std::optional<Quantity> q, PrecisionClass c) const;
};

/// Pairs benchmarks by name. Throws std::invalid_argument naming the
/// benchmarks present on only one side.
Comparison compare(const std::vector<BenchmarkMetrics>& baseline, const std::vector<BenchmarkMetrics>& enhanced);

/// Aligned text: the class distribution per column (O, I, G, F, GF, L)
/// followed by the per-benchmark changes.
std::string format_table(const Comparison& c);

/// The JSON document of one analysis run.
std::string result_to_json(const AnalysisResult& result, std::string_view benchmark, int indent = 2);
/// A human-readable rendering of one analysis run.
std::string result_to_table(const AnalysisResult& result, std::string_view benchmark);
/// Several runs as one JSON array.
std::string results_to_json(const std::vector<std::pair<std::string, AnalysisResult>>& runs, int indent = 2);
std::string comparison_to_json(const Comparison& c, int indent = 2);

/// Reads benchmark metrics from a run document or an array of them.
/// Throws std::invalid_argument on malformed input.
std::vector<BenchmarkMetrics> read_metrics(std::string_view json_text);

}  // namespace sharing
