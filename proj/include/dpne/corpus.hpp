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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dpne/ngram.hpp"

namespace dpne {

// Bidirectional token interner. Ids are dense and assigned in first-seen
// order, which keeps runs deterministic for a fixed input file.
class TokenTable {
 public:
  TokenId intern(std::string_view text);
  std::optional<TokenId> find(std::string_view text) const;
  const std::string& text(TokenId id) const;
  std::size_t size() const { return texts_.size(); }

 private:
  std::vector<std::string> texts_;
  std::unordered_map<std::string, TokenId> index_;
};

// One user's private data: one or more token sequences.
struct UserRecord {
  std::string user_id;
  std::vector<std::vector<TokenId>> sequences;
};

// The private input database. Immutable once loaded; user ids are unique.
class Corpus {
 public:
  TokenTable& tokens() { return table_; }
  const TokenTable& tokens() const { return table_; }

  void add_user(UserRecord record);
  std::span<const UserRecord> users() const { return users_; }
  std::size_t user_count() const { return users_.size(); }

 private:
  TokenTable table_;
  std::vector<UserRecord> users_;
  std::unordered_map<std::string, std::size_t> ids_;
};

enum class CorpusFormat {
  kJsonlText,      // one JSON object per line: {"user_id": ..., "texts": [...]}
  kSequenceLines,  // one user per line, whitespace-separated tokens
};

// Whitespace tokenizer with optional ASCII lowercasing. Splits on the
// Unicode White_Space code points; runs of whitespace collapse.
std::vector<TokenId> tokenize(std::string_view text, TokenTable& table,
                              bool lowercase = true);

// All distinct contiguous length-k windows of a sequence: G_k(w).
NGramSet extract_kgrams(std::span<const TokenId> tokens, std::size_t k);

// Union of G_k over all of a user's sequences; grams never cross a
// sequence boundary.
NGramSet user_kgrams(const UserRecord& user, std::size_t k);

// Distinct grams of all lengths 1..max_len, pooled (DPSU-all item sets).
NGramSet user_pooled_grams(const UserRecord& user, std::size_t max_len);

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   bool lowercase = true);

// Deterministic synthetic corpus: one sequence per user, tokens drawn i.i.d.
// from a Zipf law over vocab_size ranks.
Corpus synth_corpus(std::size_t n_users, std::size_t tokens_per_user,
                    std::size_t vocab_size, double zipf_exponent,
                    std::uint64_t seed);

// Writes a corpus in jsonl_text form (used by the synth command).
void write_corpus_jsonl(const Corpus& corpus, const std::filesystem::path& path);

}  // namespace dpne
