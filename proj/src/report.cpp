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

#include "dpne/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "dpne/error.hpp"

namespace dpne {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::filesystem::path level_file(const std::filesystem::path& dir, int k) {
  return dir / ("ngrams_" + std::to_string(k) + ".tsv");
}

nlohmann::json finite_or_null(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

}  // namespace

std::string gram_to_line(const NGram& gram, const TokenTable& table) {
  std::string line;
  for (std::size_t i = 0; i < gram.size(); ++i) {
    if (i > 0) line += '\t';
    line += table.text(gram[i]);
  }
  return line;
}

nlohmann::json schedule_to_json(const NoiseSchedule& s) {
  nlohmann::json doc;
  doc["epsilon"] = s.target.epsilon;
  doc["delta"] = s.target.delta;
  doc["max_len"] = s.max_len;
  doc["sigma_star"] = s.sigma_star;
  doc["sigmas"] = s.sigmas;
  doc["rho1"] = s.rho1;
  doc["caps"] = s.caps;
  doc["eta"] = s.eta;
  doc["decay"] = s.decay;
  doc["sample_p"] = s.sample_p_auto ? nlohmann::json(nullptr)
                                    : nlohmann::json(s.sample_p);
  return doc;
}

nlohmann::json stats_to_json(const std::vector<LevelStats>& stats) {
  nlohmann::json levels = nlohmann::json::array();
  for (const LevelStats& st : stats) {
    nlohmann::json row;
    row["k"] = st.k;
    row["sigma"] = st.sigma;
    row["rho"] = finite_or_null(st.rho);
    row["support"] = st.support;
    row["valid"] = st.valid;
    row["valid_estimated"] = st.valid_estimated;
    row["released"] = st.released;
    row["spurious_injected"] = st.spurious_injected < 0
                                   ? nlohmann::json(nullptr)
                                   : nlohmann::json(st.spurious_injected);
    levels.push_back(std::move(row));
  }
  return levels;
}

void write_extraction_outputs(const std::filesystem::path& dir,
                              const RunConfig& config,
                              const NoiseSchedule& schedule,
                              const ExtractionResult& result,
                              const TokenTable& table) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory: " + dir.string());
  }
  const bool debug = config.unsafe_no_privacy;
  for (std::size_t level = 0; level < result.levels.size(); ++level) {
    const int k = static_cast<int>(level) + 1;
    std::ofstream out(level_file(dir, k));
    if (!out) {
      throw IoError("cannot write " + level_file(dir, k).string());
    }
    if (debug) {
      out << kUnsafeStamp << '\n';
    }
    std::vector<std::string> lines;
    lines.reserve(result.levels[level].size());
    for (const NGram& gram : result.levels[level]) {
      std::string line = gram_to_line(gram, table);
      if (debug) {
        const bool spurious = level < result.spurious.size() &&
                              set_contains(result.spurious[level], gram);
        line += spurious ? "\t1" : "\t0";
      }
      lines.push_back(std::move(line));
    }
    std::sort(lines.begin(), lines.end());
    for (const std::string& line : lines) {
      out << line << '\n';
    }
    if (!out) {
      throw IoError("write failed: " + level_file(dir, k).string());
    }
  }

  nlohmann::json report;
  report["config"] = config_to_json(config);
  report["schedule"] = schedule_to_json(schedule);
  report["levels"] = stats_to_json(result.stats);
  report["noise_disabled"] = result.noise_disabled;
  report["unsafe_no_privacy"] = config.unsafe_no_privacy;
  std::ofstream out(dir / "report.json");
  if (!out) {
    throw IoError("cannot write report.json in " + dir.string());
  }
  out << report.dump(2) << '\n';
  if (!out) {
    throw IoError("write failed: report.json");
  }
}

LoadedExtraction load_extraction_outputs(const std::filesystem::path& dir,
                                         TokenTable& table) {
  std::ifstream report_in(dir / "report.json");
  if (!report_in) {
    throw IoError("cannot open " + (dir / "report.json").string());
  }
  nlohmann::json report;
  try {
    report = nlohmann::json::parse(report_in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("invalid report.json: " + std::string(e.what()));
  }

  LoadedExtraction loaded;
  loaded.config = config_from_json(report.at("config"));
  const bool debug = report.value("unsafe_no_privacy", false);
  loaded.result.noise_disabled = report.value("noise_disabled", false);
  const int max_len = loaded.config.max_len;
  loaded.result.levels.resize(max_len);
  loaded.result.spurious.resize(max_len);
  loaded.result.stats.resize(max_len);

  for (const auto& row : report.at("levels")) {
    const int k = row.at("k").get<int>();
    if (k < 1 || k > max_len) {
      throw IoError("report.json: level index out of range");
    }
    LevelStats& st = loaded.result.stats[k - 1];
    st.k = k;
    st.sigma = row.at("sigma").get<double>();
    st.rho = row.at("rho").is_null() ? kInf : row.at("rho").get<double>();
    st.support = row.at("support").get<std::uint64_t>();
    st.valid = row.at("valid").get<std::uint64_t>();
    st.valid_estimated = row.at("valid_estimated").get<bool>();
    st.released = row.at("released").get<std::uint64_t>();
    st.spurious_injected = row.at("spurious_injected").is_null()
                               ? -1
                               : row.at("spurious_injected").get<std::int64_t>();
  }

  for (int k = 1; k <= max_len; ++k) {
    std::ifstream in(level_file(dir, k));
    if (!in) {
      throw IoError("missing level file: " + level_file(dir, k).string());
    }
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (first && debug && line == kUnsafeStamp) {
        first = false;
        continue;
      }
      first = false;
      if (line.empty()) {
        continue;
      }
      std::vector<std::string> fields = split_tabs(line);
      bool spurious = false;
      if (debug) {
        if (static_cast<int>(fields.size()) != k + 1) {
          throw IoError(level_file(dir, k).string() +
                        ": expected k tokens plus a spurious flag");
        }
        spurious = fields.back() == "1";
        fields.pop_back();
      } else if (static_cast<int>(fields.size()) != k) {
        throw IoError(level_file(dir, k).string() +
                      ": expected exactly k tokens per line");
      }
      std::vector<TokenId> ids;
      ids.reserve(fields.size());
      for (const std::string& f : fields) {
        ids.push_back(table.intern(f));
      }
      loaded.result.levels[k - 1].emplace_back(
          std::span<const TokenId>(ids.data(), ids.size()));
      if (spurious) {
        loaded.result.spurious[k - 1].push_back(
            loaded.result.levels[k - 1].back());
      }
    }
    sort_unique(loaded.result.levels[k - 1]);
    sort_unique(loaded.result.spurious[k - 1]);
  }
  return loaded;
}

std::string render_method_table(const std::vector<MethodCounts>& rows) {
  std::size_t max_len = 0;
  std::size_t name_width = 6;
  for (const auto& row : rows) {
    max_len = std::max(max_len, row.per_length.size());
    name_width = std::max(name_width, row.name.size());
  }
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{"method"};
  for (std::size_t k = 1; k <= max_len; ++k) {
    header.push_back(std::to_string(k));
  }
  header.push_back("total");
  cells.push_back(header);
  for (const auto& row : rows) {
    std::vector<std::string> line{row.name};
    std::uint64_t total = 0;
    for (std::size_t k = 0; k < max_len; ++k) {
      const std::uint64_t n =
          k < row.per_length.size() ? row.per_length[k] : 0;
      total += n;
      line.push_back(std::to_string(n));
    }
    line.push_back(row.with_total ? std::to_string(total) : "-");
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> widths(cells.front().size(), 0);
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      widths[c] = std::max(widths[c], line[c].size());
    }
  }
  std::ostringstream out;
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      const std::string pad(widths[c] - line[c].size(), ' ');
      if (c == 0) {
        out << line[c] << pad;  // method names left-aligned
      } else {
        out << "  " << pad << line[c];
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string render_method_csv(const std::vector<MethodCounts>& rows) {
  std::size_t max_len = 0;
  for (const auto& row : rows) {
    max_len = std::max(max_len, row.per_length.size());
  }
  std::ostringstream out;
  out << "method";
  for (std::size_t k = 1; k <= max_len; ++k) {
    out << ',' << k;
  }
  out << ",total\n";
  for (const auto& row : rows) {
    out << row.name;
    std::uint64_t total = 0;
    for (std::size_t k = 0; k < max_len; ++k) {
      const std::uint64_t n = k < row.per_length.size() ? row.per_length[k] : 0;
      total += n;
      out << ',' << n;
    }
    out << ',' << (row.with_total ? std::to_string(total) : "") << '\n';
  }
  return out.str();
}

nlohmann::json eval_to_json(const EvalReport& report) {
  nlohmann::json doc;
  doc["released_per_length"] = report.released_per_length;
  doc["spurious_per_length"] = report.spurious_per_length;
  doc["released_total"] = report.released_total;
  doc["spurious_total"] = report.spurious_total;
  doc["spurious_fraction"] = report.spurious_fraction;
  nlohmann::json coverage = nlohmann::json::array();
  for (const auto& [k, cells] : report.coverage) {
    for (const auto& [threshold, cell] : cells) {
      nlohmann::json row;
      row["k"] = k;
      row["K"] = threshold;
      row["covered"] = cell.covered;
      row["total"] = cell.total;
      row["fraction"] = cell.fraction();
      coverage.push_back(std::move(row));
    }
  }
  doc["coverage"] = std::move(coverage);
  return doc;
}

std::string eval_coverage_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "k,K,covered,total,fraction\n";
  for (const auto& [k, cells] : report.coverage) {
    for (const auto& [threshold, cell] : cells) {
      out << k << ',' << threshold << ',' << cell.covered << ',' << cell.total
          << ',' << cell.fraction() << '\n';
    }
  }
  return out.str();
}

std::string render_eval_table(const EvalReport& report) {
  std::ostringstream out;
  out << "length      released  spurious\n";
  for (std::size_t k = 0; k < report.released_per_length.size(); ++k) {
    out << k + 1 << "\t" << report.released_per_length[k] << "\t"
        << report.spurious_per_length[k] << "\n";
  }
  out << "total\t" << report.released_total << "\t" << report.spurious_total
      << "  (spurious fraction " << report.spurious_fraction << ")\n";
  out << "\ncoverage (k, K, covered/total, fraction)\n";
  for (const auto& [k, cells] : report.coverage) {
    for (const auto& [threshold, cell] : cells) {
      out << k << "\tK=" << threshold << "\t" << cell.covered << "/"
          << cell.total << "\t" << cell.fraction() << "\n";
    }
  }
  return out.str();
}

}  // namespace dpne
