// Copyright (c) sharing-analysis contributors.
// SPDX-License-Identifier: Apache-2.0
#include "sharing_cli/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "sharing/precision.hpp"

namespace sharing::cli {
namespace {

namespace fs = std::filesystem;

const std::vector<std::string> kDomainChoices{"sh", "psd", "sfl", "sfl2", "sgfl2", "pos", "pos_x_sfl2", "pos_red_sfl"};
const std::vector<std::string> kOrderChoices{"textual", "reverse", "stardelay", "freelin"};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AnalysisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw AnalysisError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw AnalysisError("cannot write " + path);
  file << text;
  if (!text.empty() && text.back() != '\n') file << '\n';
}

Program load_program(const std::string& path, const std::string& entries_path) {
  const std::string text = read_file(path);
  try {
    Program p = parse_program(text);
    if (!entries_path.empty()) {
      for (EntryGoal& g : parse_goals(read_file(entries_path))) p.entries.push_back(std::move(g));
    }
    return p;
  } catch (const ParseError& e) {
    // Also covers UnsupportedConstruct.
    throw AnalysisError(path + ": " + e.what());
  }
}

AnalysisResult run_analysis(const Program& program, const AnalysisConfig& config, const std::string& name) {
  try {
    return analyze(program, config);
  } catch (const std::length_error& e) {
    throw AnalysisError(name + ": " + e.what());
  } catch (const std::out_of_range& e) {
    throw AnalysisError(name + ": " + e.what());
  }
}

void check_config(const AnalysisConfig& config) {
  if (auto error = validate(config)) throw UsageError(*error);
}

/// Options shared by `analyze` and `matrix`.
struct CommonOptions {
  std::string mode = "gi";
  std::string order = "textual";
  double timeout = 600;
  std::string out;
  std::string format = "json";

  void add_to(CLI::App& app) {
    app.add_option("--mode", mode, "Goal-independent or goal-dependent analysis")
        ->check(CLI::IsMember({"gi", "gd"}))
        ->capture_default_str();
    app.add_option("--order", order, "Binding ordering strategy")
        ->check(CLI::IsMember(kOrderChoices))
        ->capture_default_str();
    app.add_option("--timeout", timeout, "Timeout per analysis in seconds")->capture_default_str();
    app.add_option("--out", out, "Output path (standard output when absent)");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "table"}))->capture_default_str();
  }

  void apply(AnalysisConfig& c) const {
    c.mode = *parse_mode(mode);
    c.order = *parse_ordering(order);
    c.timeout_seconds = timeout;
  }
};

/// A matrix configuration such as `sfl2+klin+freelin`.
AnalysisConfig parse_config_token(const std::string& token, const AnalysisConfig& defaults) {
  AnalysisConfig c = defaults;
  std::istringstream in(token);
  std::string part;
  bool first = true;
  while (std::getline(in, part, '+')) {
    if (first) {
      const auto domain = parse_domain(part);
      if (!domain) throw UsageError("unknown domain '" + part + "' in configuration '" + token + "'");
      c.domain = *domain;
      first = false;
    } else if (part == "klin") {
      c.klin = true;
    } else if (part == "free-split") {
      c.free_split = true;
    } else if (part == "compound-reduce") {
      c.compound_reduce = true;
    } else if (part == "occurs-check") {
      c.occurs_check = true;
    } else if (part == "psd") {
      c.rho_reduced = true;
    } else if (auto order = parse_ordering(part)) {
      c.order = *order;
    } else {
      throw UsageError("unknown modifier '" + part + "' in configuration '" + token + "'");
    }
  }
  if (first) throw UsageError("empty configuration");
  check_config(c);
  return c;
}

std::vector<std::string> corpus_files(const std::vector<std::string>& programs, const std::string& corpus) {
  std::vector<std::string> out = programs;
  if (!corpus.empty()) {
    if (!fs::is_directory(corpus)) throw UsageError("--corpus " + corpus + " is not a directory");
    std::vector<std::string> found;
    for (const auto& entry : fs::directory_iterator(corpus)) {
      if (entry.is_regular_file() && entry.path().extension() == ".pl") found.push_back(entry.path().string());
    }
    std::sort(found.begin(), found.end());
    out.insert(out.end(), found.begin(), found.end());
  }
  if (out.empty()) throw UsageError("no programs given");
  return out;
}

std::string safe_file_name(std::string s) {
  for (char& ch : s) {
    if (ch == '+' || ch == '/' || ch == ' ') ch = '_';
  }
  return s;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sharing, freeness, linearity and groundness analysis of logic programs", "sharing"};
  app.require_subcommand(1);

  // analyze
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "Analyze one program");
  CommonOptions analyze_opts;
  analyze_opts.add_to(*analyze_cmd);
  std::string domain = "sfl2";
  bool klin = false, free_split = false, compound_reduce = false, occurs_check = false, psd = false;
  std::string program_path, entries_path, name;
  analyze_cmd->add_option("--domain", domain, "Abstract domain")
      ->check(CLI::IsMember(kDomainChoices))
      ->capture_default_str();
  analyze_cmd->add_flag("--klin", klin, "Enhanced linearity amgu");
  analyze_cmd->add_flag("--free-split", free_split, "Freeness decomposition before each amgu");
  analyze_cmd->add_flag("--compound-reduce", compound_reduce, "Compoundness reduction (needs --occurs-check)");
  analyze_cmd->add_flag("--occurs-check", occurs_check, "Assume unification with occurs-check");
  analyze_cmd->add_flag("--psd", psd, "Keep sharing sets pair-cover reduced");
  analyze_cmd->add_option("--entries", entries_path, "File with entry goals, one per line");
  analyze_cmd->add_option("--name", name, "Benchmark name (default: file stem)");
  analyze_cmd->add_option("program", program_path, "Program file");

  // compare
  CLI::App* compare_cmd = app.add_subcommand("compare", "Compare the metrics of two sets of runs");
  std::string baseline_path, enhanced_path, compare_out, compare_format = "table";
  compare_cmd->add_option("--baseline", baseline_path, "Baseline run document(s)")->required();
  compare_cmd->add_option("--enhanced", enhanced_path, "Enhanced run document(s)")->required();
  compare_cmd->add_option("--out", compare_out, "Output path (standard output when absent)");
  compare_cmd->add_option("--format", compare_format, "Output format")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();

  // matrix
  CLI::App* matrix_cmd = app.add_subcommand("matrix", "Run several configurations over a corpus and compare them");
  CommonOptions matrix_opts;
  matrix_opts.format = "table";
  matrix_opts.add_to(*matrix_cmd);
  std::vector<std::string> programs;
  std::string corpus;
  std::vector<std::string> configs{"sfl2", "pos_x_sfl2", "sgfl2"};
  std::string results_dir;
  matrix_cmd->add_option("--corpus", corpus, "Directory of .pl programs");
  matrix_cmd->add_option("--configs", configs, "Configurations; the first is the baseline (e.g. sfl2,sfl2+klin)")
      ->delimiter(',')
      ->capture_default_str();
  matrix_cmd->add_option("--results", results_dir, "Directory receiving one JSON document per configuration");
  matrix_cmd->add_option("programs", programs, "Program files");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (analyze_cmd->parsed()) {
    AnalysisConfig config;
    config.domain = *parse_domain(domain);
    analyze_opts.apply(config);
    config.klin = klin;
    config.free_split = free_split;
    config.compound_reduce = compound_reduce;
    config.occurs_check = occurs_check;
    config.rho_reduced = psd;
    check_config(config);
    if (program_path.empty()) throw UsageError("analyze needs a program file");
    for (const std::string& w : config_warnings(config)) err << "warning: " << w << '\n';
    const Program program = load_program(program_path, entries_path);
    const std::string bench = name.empty() ? fs::path(program_path).stem().string() : name;
    const AnalysisResult result = run_analysis(program, config, bench);
    if (result.status == AnalysisStatus::TimedOut) err << "warning: " << bench << " timed out\n";
    const std::string text =
        analyze_opts.format == "json" ? result_to_json(result, bench) : result_to_table(result, bench);
    write_output(analyze_opts.out, text, out);
    return kExitOk;
  }

  if (compare_cmd->parsed()) {
    std::vector<BenchmarkMetrics> baseline;
    std::vector<BenchmarkMetrics> enhanced;
    try {
      baseline = read_metrics(read_file(baseline_path));
      enhanced = read_metrics(read_file(enhanced_path));
    } catch (const std::invalid_argument& e) {
      throw AnalysisError(e.what());
    }
    Comparison c;
    try {
      c = compare(baseline, enhanced);
    } catch (const std::invalid_argument& e) {
      throw AnalysisError(e.what());
    }
    write_output(compare_out, compare_format == "json" ? comparison_to_json(c) : format_table(c), out);
    return kExitOk;
  }

  // matrix
  AnalysisConfig defaults;
  matrix_opts.apply(defaults);
  std::vector<AnalysisConfig> parsed;
  for (const std::string& token : configs) parsed.push_back(parse_config_token(token, defaults));
  if (parsed.size() < 2) throw UsageError("matrix needs at least two configurations");
  const std::vector<std::string> files = corpus_files(programs, corpus);
  for (const AnalysisConfig& c : parsed) {
    for (const std::string& w : config_warnings(c)) err << "warning: " << w << '\n';
  }

  std::vector<std::pair<std::string, Program>> loaded;
  bool failed = false;
  for (const std::string& f : files) {
    try {
      loaded.emplace_back(fs::path(f).stem().string(), load_program(f, ""));
    } catch (const AnalysisError& e) {
      err << "error: " << e.what() << '\n';
      failed = true;
    }
  }
  std::vector<std::vector<BenchmarkMetrics>> metrics(parsed.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    std::vector<std::pair<std::string, AnalysisResult>> runs;
    for (const auto& [bench, program] : loaded) {
      try {
        AnalysisResult r = run_analysis(program, parsed[i], bench);
        metrics[i].push_back({bench, measure(r)});
        runs.emplace_back(bench, std::move(r));
      } catch (const AnalysisError& e) {
        err << "error: " << e.what() << '\n';
        metrics[i].push_back({bench, std::nullopt});
        failed = true;
      }
    }
    if (!results_dir.empty()) {
      fs::create_directories(results_dir);
      write_output((fs::path(results_dir) / (safe_file_name(configs[i]) + ".json")).string(), results_to_json(runs),
                   out);
    }
  }

  nlohmann::json doc = nlohmann::json::array();
  std::string tables;
  for (std::size_t i = 1; i < parsed.size(); ++i) {
    const Comparison c = compare(metrics[0], metrics[i]);
    if (matrix_opts.format == "json") {
      doc.push_back({{"baseline", configs[0]},
                     {"enhanced", configs[i]},
                     {"comparison", nlohmann::json::parse(comparison_to_json(c))}});
    } else {
      tables += "== " + configs[i] + " vs " + configs[0] + " ==\n" + format_table(c) + "\n";
    }
  }
  write_output(matrix_opts.out, matrix_opts.format == "json" ? doc.dump(2) : tables, out);
  return failed ? kExitAnalysisError : kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run(args, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const AnalysisError& e) {
    err << "error: " << e.what() << '\n';
    return kExitAnalysisError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitAnalysisError;
  }
}

}  // namespace sharing::cli
