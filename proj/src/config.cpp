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

#include "dpne/config.hpp"

#include "dpne/error.hpp"

namespace dpne {

std::vector<int> resolved_caps(const RunConfig& config) {
  if (!config.caps.empty()) {
    if (static_cast<int>(config.caps.size()) != config.max_len) {
      throw InvalidArgument("config: caps must list exactly T values");
    }
    return config.caps;
  }
  if (config.delta0 < 1) {
    throw InvalidArgument("config: delta0 must be >= 1");
  }
  return std::vector<int>(config.max_len, config.delta0);
}

NoiseSchedule schedule_from_config(const RunConfig& config) {
  return allocate_schedule({config.epsilon, config.delta}, config.max_len,
                           config.decay, resolved_caps(config), config.eta,
                           config.sample_p);
}

ExtractOptions extract_options_from_config(const RunConfig& config,
                                           int threads, double probe_target) {
  if ((config.sigma_override || config.rho_override) &&
      !config.unsafe_no_privacy) {
    throw InvalidArgument(
        "config: sigma/rho overrides require --unsafe-no-privacy");
  }
  ExtractOptions opt;
  opt.rule = config.rule;
  opt.mode = config.mode;
  opt.seed = config.seed;
  opt.threads = threads;
  opt.allow_non_private = config.unsafe_no_privacy;
  opt.sigma_override = config.sigma_override;
  opt.rho_override = config.rho_override;
  opt.probe_target = probe_target;
  return opt;
}

std::string to_string(CorpusFormat format) {
  return format == CorpusFormat::kJsonlText ? "jsonl" : "lines";
}

std::string to_string(PruningRule rule) {
  return rule == PruningRule::kBothSide ? "both" : "single";
}

std::string to_string(ExtractMode mode) {
  return mode == ExtractMode::kReference ? "reference" : "scalable";
}

CorpusFormat parse_corpus_format(const std::string& text) {
  if (text == "jsonl") return CorpusFormat::kJsonlText;
  if (text == "lines") return CorpusFormat::kSequenceLines;
  throw InvalidArgument("unknown corpus format: " + text);
}

PruningRule parse_pruning_rule(const std::string& text) {
  if (text == "both") return PruningRule::kBothSide;
  if (text == "single") return PruningRule::kSingleSide;
  throw InvalidArgument("unknown pruning rule: " + text);
}

ExtractMode parse_extract_mode(const std::string& text) {
  if (text == "reference") return ExtractMode::kReference;
  if (text == "scalable") return ExtractMode::kScalable;
  throw InvalidArgument("unknown extraction mode: " + text);
}

nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json doc;
  doc["input"] = c.input;
  doc["format"] = to_string(c.format);
  doc["output_dir"] = c.output_dir;
  doc["epsilon"] = c.epsilon;
  doc["delta"] = c.delta;
  doc["max_len"] = c.max_len;
  doc["delta0"] = c.delta0;
  doc["caps"] = c.caps;
  doc["eta"] = c.eta;
  doc["decay"] = c.decay;
  doc["sample_p"] =
      c.sample_p ? nlohmann::json(*c.sample_p) : nlohmann::json(nullptr);
  doc["prune"] = to_string(c.rule);
  doc["mode"] = to_string(c.mode);
  doc["seed"] = c.seed;
  doc["lowercase"] = c.lowercase;
  doc["unsafe_no_privacy"] = c.unsafe_no_privacy;
  doc["sigma_override"] = c.sigma_override ? nlohmann::json(*c.sigma_override)
                                           : nlohmann::json(nullptr);
  doc["rho_override"] =
      c.rho_override ? nlohmann::json(*c.rho_override) : nlohmann::json(nullptr);
  return doc;
}

RunConfig config_from_json(const nlohmann::json& doc) {
  RunConfig c;
  c.input = doc.at("input").get<std::string>();
  c.format = parse_corpus_format(doc.at("format").get<std::string>());
  c.output_dir = doc.at("output_dir").get<std::string>();
  c.epsilon = doc.at("epsilon").get<double>();
  c.delta = doc.at("delta").get<double>();
  c.max_len = doc.at("max_len").get<int>();
  c.delta0 = doc.at("delta0").get<int>();
  c.caps = doc.at("caps").get<std::vector<int>>();
  c.eta = doc.at("eta").get<double>();
  c.decay = doc.at("decay").get<double>();
  if (!doc.at("sample_p").is_null()) {
    c.sample_p = doc.at("sample_p").get<double>();
  }
  c.rule = parse_pruning_rule(doc.at("prune").get<std::string>());
  c.mode = parse_extract_mode(doc.at("mode").get<std::string>());
  c.seed = doc.at("seed").get<std::uint64_t>();
  c.lowercase = doc.at("lowercase").get<bool>();
  c.unsafe_no_privacy = doc.at("unsafe_no_privacy").get<bool>();
  if (!doc.at("sigma_override").is_null()) {
    c.sigma_override = doc.at("sigma_override").get<double>();
  }
  if (!doc.at("rho_override").is_null()) {
    c.rho_override = doc.at("rho_override").get<double>();
  }
  return c;
}

}  // namespace dpne
