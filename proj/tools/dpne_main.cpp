// Copyright 2026 The dpne Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dpne/baselines.hpp"
#include "dpne/error.hpp"
#include "dpne/evaluate.hpp"
#include "dpne/report.hpp"
#include "dpne/runner.hpp"

namespace {

using dpne::RunConfig;

// Exit codes: 0 success, 2 config error, 3 I/O error, 4 internal error.
constexpr int kConfigError = 2;
constexpr int kIoError = 3;
constexpr int kInternalError = 4;

struct CommonArgs {
  RunConfig config;
  std::string config_file;  // full RunConfig as JSON; overrides the flags
  std::string format = "jsonl";
  std::string prune = "both";
  std::string mode = "scalable";
  std::string report_format = "table";
  int threads = 1;
  double probe_target = 1e6;
  double sample_p = 0.0;         // 0 = automatic per level
  double sigma_override = -1.0;  // <0 = unset
  double rho_override = 0.0;
  bool rho_override_set = false;
};

void add_privacy_flags(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--epsilon", args.config.epsilon, "Privacy loss bound")
      ->capture_default_str();
  cmd->add_option("--delta", args.config.delta, "Privacy failure probability")
      ->capture_default_str();
  cmd->add_option("--max-len,-T", args.config.max_len,
                  "Maximum n-gram length T")
      ->capture_default_str();
  cmd->add_option("--delta0", args.config.delta0, "Per-level contribution cap")
      ->capture_default_str();
  cmd->add_option("--caps", args.config.caps,
                  "Per-level caps (T values, overrides --delta0)");
  cmd->add_option("--eta", args.config.eta, "Tolerated spurious fraction")
      ->capture_default_str();
  cmd->add_option("--decay", args.config.decay,
                  "Noise decay c (sigma_k = c * sigma_{k-1})")
      ->capture_default_str();
  cmd->add_option("--sample-p", args.sample_p,
                  "Validity-estimation sampling probability (0 = auto)");
}

void add_extract_flags(CLI::App* cmd, CommonArgs& args) {
  add_privacy_flags(cmd, args);
  cmd->add_option("--input", args.config.input, "Corpus file");
  cmd->add_option("--format", args.format, "Corpus format: jsonl|lines")
      ->capture_default_str();
  cmd->add_option("--prune", args.prune, "Pruning rule: both|single")
      ->capture_default_str();
  cmd->add_option("--mode", args.mode, "Extraction mode: reference|scalable")
      ->capture_default_str();
  cmd->add_option("--seed", args.config.seed, "Random seed")
      ->capture_default_str();
  cmd->add_flag("--lowercase,!--no-lowercase", args.config.lowercase,
                "Lowercase tokens during ingestion");
  cmd->add_option("--threads", args.threads, "Worker threads")
      ->capture_default_str();
  cmd->add_option("--probe-target", args.probe_target,
                  "Validity probes per level when --sample-p is automatic")
      ->capture_default_str();
  cmd->add_flag("--unsafe-no-privacy", args.config.unsafe_no_privacy,
                "Allow zero noise / threshold overrides; output is NOT "
                "differentially private");
  cmd->add_option("--sigma-override", args.sigma_override,
                  "Replace every sigma_k (requires --unsafe-no-privacy)");
  cmd->add_option("--rho-override", args.rho_override,
                  "Replace every rho_k (requires --unsafe-no-privacy)")
      ->each([&args](const std::string&) { args.rho_override_set = true; });
  cmd->add_option("--report-format", args.report_format,
                  "Stdout format: table|json|csv")
      ->capture_default_str();
}

RunConfig finalize_config(CommonArgs& args) {
  if (!args.config_file.empty()) {
    std::ifstream in(args.config_file);
    if (!in) {
      throw dpne::IoError("cannot open config file: " + args.config_file);
    }
    try {
      return dpne::config_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw dpne::InvalidArgument("invalid config file: " +
                                  std::string(e.what()));
    }
  }
  args.config.format = dpne::parse_corpus_format(args.format);
  args.config.rule = dpne::parse_pruning_rule(args.prune);
  args.config.mode = dpne::parse_extract_mode(args.mode);
  if (args.sample_p > 0.0) {
    args.config.sample_p = args.sample_p;
  }
  if (args.sigma_override >= 0.0) {
    args.config.sigma_override = args.sigma_override;
  }
  if (args.rho_override_set) {
    args.config.rho_override = args.rho_override;
  }
  return args.config;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path);
  if (!out) {
    throw dpne::IoError("cannot write " + path.string());
  }
  out << content;
  if (!out) {
    throw dpne::IoError("write failed: " + path.string());
  }
}

int cmd_calibrate(CommonArgs& args) {
  const RunConfig config = finalize_config(args);
  const dpne::NoiseSchedule sched = dpne::schedule_from_config(config);
  const double residual = dpne::composition_residual(sched);
  std::cout << "config " << dpne::config_to_json(config).dump() << '\n';
  if (args.report_format == "json") {
    nlohmann::json doc = dpne::schedule_to_json(sched);
    doc["composition_residual"] = residual;
    std::cout << doc.dump(2) << '\n';
  } else if (args.report_format == "csv") {
    std::cout << "k,sigma\n";
    for (int k = 1; k <= sched.max_len; ++k) {
      std::cout << k << ',' << sched.sigmas[k - 1] << '\n';
    }
  } else {
    std::cout << "epsilon      " << sched.target.epsilon << '\n'
              << "delta        " << sched.target.delta << '\n'
              << "sigma_star   " << sched.sigma_star << '\n';
    for (int k = 1; k <= sched.max_len; ++k) {
      std::cout << "sigma_" << k << "      " << sched.sigmas[k - 1] << '\n';
    }
    std::cout << "rho1         " << sched.rho1 << '\n'
              << "composition residual " << residual << '\n';
  }
  return 0;
}

int cmd_extract(CommonArgs& args) {
  const RunConfig config = finalize_config(args);
  if (config.input.empty()) {
    throw dpne::InvalidArgument("extract: --input is required");
  }
  if (config.output_dir.empty()) {
    throw dpne::InvalidArgument("extract: --output-dir is required");
  }
  const dpne::Corpus corpus =
      dpne::load_corpus(config.input, config.format, config.lowercase);
  const dpne::ExtractRun run =
      dpne::run_extract_to_dir(corpus, config, args.threads, args.probe_target);

  std::cout << "config " << dpne::config_to_json(config).dump() << '\n';
  dpne::MethodCounts row{"dpne", {}, true};
  for (const auto& level : run.result.levels) {
    row.per_length.push_back(level.size());
  }
  if (args.report_format == "json") {
    nlohmann::json doc;
    doc["levels"] = dpne::stats_to_json(run.result.stats);
    std::cout << doc.dump(2) << '\n';
  } else if (args.report_format == "csv") {
    std::cout << dpne::render_method_csv({row});
  } else {
    std::cout << dpne::render_method_table({row});
  }
  if (run.result.noise_disabled) {
    std::cout << "WARNING: noise disabled; this output is not private\n";
  }
  return 0;
}

int cmd_compare(CommonArgs& args, const std::vector<std::string>& methods) {
  const RunConfig config = finalize_config(args);
  if (config.input.empty()) {
    throw dpne::InvalidArgument("compare: --input is required");
  }
  const dpne::Corpus corpus =
      dpne::load_corpus(config.input, config.format, config.lowercase);
  const dpne::PrivacyTarget target{config.epsilon, config.delta};
  const int cap0 = config.delta0;

  std::vector<dpne::MethodCounts> rows;
  for (const std::string& method : methods) {
    dpne::MethodCounts row{method, {}, true};
    if (method == "dpne") {
      const dpne::ExtractRun run =
          dpne::run_extract(corpus, config, args.threads, args.probe_target);
      for (const auto& level : run.result.levels) {
        row.per_length.push_back(level.size());
      }
    } else if (method == "dpsu_all") {
      const auto result = dpne::dpsu_all(corpus, target, config.max_len, cap0,
                                         config.seed, args.threads);
      for (const auto& level : result.levels) {
        row.per_length.push_back(level.size());
      }
    } else if (method == "dpsu_even") {
      const auto result = dpne::dpsu_even(corpus, target, config.max_len, cap0,
                                          config.seed, args.threads);
      for (const auto& level : result.levels) {
        row.per_length.push_back(level.size());
      }
    } else if (method == "dpsu_single") {
      for (int k = 1; k <= config.max_len; ++k) {
        row.per_length.push_back(
            dpne::dpsu_single(corpus, target, k, cap0, config.seed,
                              args.threads)
                .size());
      }
      row.with_total = false;  // each column is a separate full-budget run
    } else {
      throw dpne::InvalidArgument("unknown method: " + method);
    }
    rows.push_back(std::move(row));
  }

  std::cout << "config " << dpne::config_to_json(config).dump() << '\n';
  if (args.report_format == "csv") {
    std::cout << dpne::render_method_csv(rows);
  } else {
    std::cout << dpne::render_method_table(rows);
  }
  if (!config.output_dir.empty()) {
    std::filesystem::create_directories(config.output_dir);
    write_text_file(std::filesystem::path(config.output_dir) / "compare.csv",
                    dpne::render_method_csv(rows));
  }
  return 0;
}

int cmd_evaluate(CommonArgs& args, const std::string& result_dir,
                 std::vector<std::uint64_t> thresholds) {
  args.config.format = dpne::parse_corpus_format(args.format);
  dpne::Corpus corpus = dpne::load_corpus(
      args.config.input, args.config.format, args.config.lowercase);
  const dpne::LoadedExtraction loaded =
      dpne::load_extraction_outputs(result_dir, corpus.tokens());
  if (thresholds.empty()) {
    thresholds = {10, 100};
  }
  const dpne::EvalReport report =
      dpne::evaluate_extraction(loaded.result, corpus, thresholds);

  std::cout << "config " << dpne::config_to_json(loaded.config).dump() << '\n';
  nlohmann::json doc = dpne::eval_to_json(report);
  doc["unsafe_no_privacy"] = loaded.config.unsafe_no_privacy;
  std::string csv = dpne::eval_coverage_csv(report);
  if (loaded.config.unsafe_no_privacy) {
    csv = std::string(dpne::kUnsafeStamp) + "\n" + csv;
  }
  if (args.report_format == "json") {
    std::cout << doc.dump(2) << '\n';
  } else if (args.report_format == "csv") {
    std::cout << csv;
  } else {
    std::cout << dpne::render_eval_table(report);
  }
  const std::string out_dir =
      args.config.output_dir.empty() ? result_dir : args.config.output_dir;
  std::filesystem::create_directories(out_dir);
  write_text_file(std::filesystem::path(out_dir) / "eval.json",
                  doc.dump(2) + "\n");
  write_text_file(std::filesystem::path(out_dir) / "coverage.csv", csv);
  return 0;
}

struct SynthArgs {
  std::string output;
  std::uint64_t users = 1000;
  std::uint64_t tokens_per_user = 50;
  std::uint64_t vocab = 1000;
  double zipf = 1.1;
  std::uint64_t seed = 0;
};

int cmd_synth(const SynthArgs& args) {
  nlohmann::json echo;
  echo["output"] = args.output;
  echo["users"] = args.users;
  echo["tokens_per_user"] = args.tokens_per_user;
  echo["vocab"] = args.vocab;
  echo["zipf"] = args.zipf;
  echo["seed"] = args.seed;
  std::cout << "config " << echo.dump() << '\n';
  const dpne::Corpus corpus = dpne::synth_corpus(
      args.users, args.tokens_per_user, args.vocab, args.zipf, args.seed);
  dpne::write_corpus_jsonl(corpus, args.output);
  std::cout << "wrote " << corpus.user_count() << " users to " << args.output
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private n-gram extraction"};
  app.require_subcommand(1);

  CommonArgs args;
  SynthArgs synth_args;
  std::vector<std::string> methods{"dpne", "dpsu_all", "dpsu_even",
                                   "dpsu_single"};
  std::string result_dir;
  std::vector<std::uint64_t> thresholds;

  CLI::App* calibrate =
      app.add_subcommand("calibrate", "Print the noise schedule");
  add_privacy_flags(calibrate, args);
  calibrate->add_option("--report-format", args.report_format,
                        "Stdout format: table|json|csv");

  CLI::App* extract =
      app.add_subcommand("extract", "Run the private extraction");
  add_extract_flags(extract, args);
  extract->add_option("--output-dir", args.config.output_dir,
                      "Directory for gram files and report.json");
  extract->add_option("--config", args.config_file,
                      "Run from an echoed config JSON instead of flags");

  CLI::App* compare =
      app.add_subcommand("compare", "Run extraction methods side by side");
  add_extract_flags(compare, args);
  compare->add_option("--output-dir", args.config.output_dir,
                      "Directory for compare.csv (optional)");
  compare->add_option("--methods", methods,
                      "dpne dpsu_all dpsu_even dpsu_single");

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Coverage and spurious audit");
  evaluate->add_option("--result-dir", result_dir, "Prior extraction outputs")
      ->required();
  evaluate->add_option("--input", args.config.input, "Cleartext corpus")
      ->required();
  evaluate->add_option("--format", args.format, "Corpus format: jsonl|lines");
  evaluate->add_flag("--lowercase,!--no-lowercase", args.config.lowercase,
                     "Lowercase tokens during ingestion");
  evaluate->add_option("--k-thresholds", thresholds,
                       "K values for coverage (default 10 100)");
  evaluate->add_option("--output-dir", args.config.output_dir,
                       "Where to write eval.json/coverage.csv");
  evaluate->add_option("--report-format", args.report_format,
                       "Stdout format: table|json|csv");

  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic corpus");
  synth->add_option("--output", synth_args.output, "Output jsonl file")
      ->required();
  synth->add_option("--users", synth_args.users, "Number of users");
  synth->add_option("--tokens-per-user", synth_args.tokens_per_user,
                    "Sequence length per user");
  synth->add_option("--vocab", synth_args.vocab, "Vocabulary size");
  synth->add_option("--zipf", synth_args.zipf, "Zipf exponent");
  synth->add_option("--seed", synth_args.seed, "Random seed");

  try {
    app.parse(argc, argv);
    if (calibrate->parsed()) return cmd_calibrate(args);
    if (extract->parsed()) return cmd_extract(args);
    if (compare->parsed()) return cmd_compare(args, methods);
    if (evaluate->parsed()) return cmd_evaluate(args, result_dir, thresholds);
    if (synth->parsed()) return cmd_synth(synth_args);
    return kConfigError;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  } catch (const dpne::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const dpne::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}
