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

#include "dpne/corpus.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "dpne/error.hpp"
#include "dpne/rng.hpp"

namespace dpne {
namespace {

// Unicode White_Space code points.
bool is_unicode_space(char32_t cp) {
  switch (cp) {
    case 0x0009: case 0x000a: case 0x000b: case 0x000c: case 0x000d:
    case 0x0020: case 0x0085: case 0x00a0: case 0x1680:
    case 0x2028: case 0x2029: case 0x202f: case 0x205f: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200a;
  }
}

// Decodes the UTF-8 code point at `i`, advancing `i`. Invalid bytes are
// returned as-is so they behave like ordinary (non-space) characters.
char32_t decode_utf8(std::string_view s, std::size_t& i) {
  const unsigned char c0 = static_cast<unsigned char>(s[i]);
  std::size_t extra = 0;
  char32_t cp = c0;
  if (c0 < 0x80) {
    extra = 0;
  } else if ((c0 & 0xe0) == 0xc0) {
    extra = 1;
    cp = c0 & 0x1f;
  } else if ((c0 & 0xf0) == 0xe0) {
    extra = 2;
    cp = c0 & 0x0f;
  } else if ((c0 & 0xf8) == 0xf0) {
    extra = 3;
    cp = c0 & 0x07;
  }
  for (std::size_t j = 1; j <= extra; ++j) {
    if (i + j >= s.size() ||
        (static_cast<unsigned char>(s[i + j]) & 0xc0) != 0x80) {
      ++i;
      return c0;  // malformed sequence: treat the lead byte alone
    }
    cp = (cp << 6) | (static_cast<unsigned char>(s[i + j]) & 0x3f);
  }
  i += extra + 1;
  return cp;
}

}  // namespace

TokenId TokenTable::intern(std::string_view text) {
  auto it = index_.find(std::string(text));
  if (it != index_.end()) {
    return it->second;
  }
  const TokenId id = static_cast<TokenId>(texts_.size());
  texts_.emplace_back(text);
  index_.emplace(texts_.back(), id);
  return id;
}

std::optional<TokenId> TokenTable::find(std::string_view text) const {
  auto it = index_.find(std::string(text));
  if (it == index_.end()) {
    return std::nullopt;
  }
  return it->second;
}

const std::string& TokenTable::text(TokenId id) const {
  if (id >= texts_.size()) {
    throw InvalidArgument("TokenTable::text: unknown id");
  }
  return texts_[id];
}

void Corpus::add_user(UserRecord record) {
  auto [it, inserted] = ids_.emplace(record.user_id, users_.size());
  if (!inserted) {
    throw IoError("duplicate user_id: " + record.user_id);
  }
  users_.push_back(std::move(record));
}

std::vector<TokenId> tokenize(std::string_view text, TokenTable& table,
                              bool lowercase) {
  std::vector<TokenId> out;
  std::string word;
  std::size_t i = 0;
  auto flush = [&] {
    if (!word.empty()) {
      out.push_back(table.intern(word));
      word.clear();
    }
  };
  while (i < text.size()) {
    const std::size_t start = i;
    const char32_t cp = decode_utf8(text, i);
    if (is_unicode_space(cp)) {
      flush();
    } else {
      for (std::size_t j = start; j < i; ++j) {
        char c = text[j];
        if (lowercase && c >= 'A' && c <= 'Z') {
          c = static_cast<char>(c - 'A' + 'a');
        }
        word.push_back(c);
      }
    }
  }
  flush();
  return out;
}

NGramSet extract_kgrams(std::span<const TokenId> tokens, std::size_t k) {
  if (k < 1) {
    throw InvalidArgument("extract_kgrams: k must be >= 1");
  }
  NGramSet out;
  if (k > NGram::kMaxLen || tokens.size() < k) {
    return out;
  }
  out.reserve(tokens.size() - k + 1);
  for (std::size_t i = 0; i + k <= tokens.size(); ++i) {
    out.emplace_back(tokens.subspan(i, k));
  }
  sort_unique(out);
  return out;
}

NGramSet user_kgrams(const UserRecord& user, std::size_t k) {
  NGramSet out;
  for (const auto& seq : user.sequences) {
    if (seq.size() < k || k < 1 || k > NGram::kMaxLen) {
      continue;
    }
    for (std::size_t i = 0; i + k <= seq.size(); ++i) {
      out.emplace_back(std::span<const TokenId>(seq.data() + i, k));
    }
  }
  sort_unique(out);
  return out;
}

NGramSet user_pooled_grams(const UserRecord& user, std::size_t max_len) {
  NGramSet out;
  for (std::size_t k = 1; k <= max_len; ++k) {
    NGramSet grams = user_kgrams(user, k);
    out.insert(out.end(), grams.begin(), grams.end());
  }
  sort_unique(out);
  return out;
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   bool lowercase) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open corpus file: " + path.string());
  }
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    UserRecord user;
    if (format == CorpusFormat::kJsonlText) {
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw IoError(path.string() + ":" + std::to_string(line_no) +
                      ": invalid JSON: " + e.what());
      }
      if (!doc.is_object() || !doc.contains("user_id") ||
          !doc["user_id"].is_string() || !doc.contains("texts") ||
          !doc["texts"].is_array()) {
        throw IoError(path.string() + ":" + std::to_string(line_no) +
                      ": expected {\"user_id\": string, \"texts\": [string]}");
      }
      user.user_id = doc["user_id"].get<std::string>();
      for (const auto& t : doc["texts"]) {
        if (!t.is_string()) {
          throw IoError(path.string() + ":" + std::to_string(line_no) +
                        ": texts entries must be strings");
        }
        user.sequences.push_back(
            tokenize(t.get<std::string>(), corpus.tokens(), lowercase));
      }
    } else {
      user.user_id = std::to_string(line_no);
      user.sequences.push_back(tokenize(line, corpus.tokens(), lowercase));
    }
    corpus.add_user(std::move(user));
  }
  return corpus;
}

Corpus synth_corpus(std::size_t n_users, std::size_t tokens_per_user,
                    std::size_t vocab_size, double zipf_exponent,
                    std::uint64_t seed) {
  if (vocab_size < 1 || tokens_per_user < 1) {
    throw InvalidArgument("synth_corpus: sizes must be positive");
  }
  Corpus corpus;
  // Intern the whole vocabulary up front: ids equal Zipf ranks.
  for (std::size_t r = 0; r < vocab_size; ++r) {
    corpus.tokens().intern("w" + std::to_string(r));
  }
  // Cumulative Zipf weights, normalized.
  std::vector<double> cum(vocab_size);
  double total = 0.0;
  for (std::size_t r = 0; r < vocab_size; ++r) {
    total += std::pow(static_cast<double>(r + 1), -zipf_exponent);
    cum[r] = total;
  }
  for (auto& c : cum) {
    c /= total;
  }
  for (std::size_t u = 0; u < n_users; ++u) {
    StreamRng rng = substream({seed, streams::kSynth, u});
    std::vector<TokenId> seq(tokens_per_user);
    for (auto& tok : seq) {
      const double x = rng.next_unit();
      const auto it = std::lower_bound(cum.begin(), cum.end(), x);
      tok = static_cast<TokenId>(it == cum.end() ? vocab_size - 1
                                                 : it - cum.begin());
    }
    UserRecord user;
    user.user_id = "u" + std::to_string(u);
    user.sequences.push_back(std::move(seq));
    corpus.add_user(std::move(user));
  }
  return corpus;
}

void write_corpus_jsonl(const Corpus& corpus,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write corpus file: " + path.string());
  }
  for (const auto& user : corpus.users()) {
    nlohmann::json doc;
    doc["user_id"] = user.user_id;
    auto& texts = doc["texts"] = nlohmann::json::array();
    for (const auto& seq : user.sequences) {
      std::string text;
      for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i > 0) text += ' ';
        text += corpus.tokens().text(seq[i]);
      }
      texts.push_back(std::move(text));
    }
    out << doc.dump() << '\n';
  }
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

}  // namespace dpne
