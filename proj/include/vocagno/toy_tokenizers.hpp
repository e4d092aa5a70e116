// Copyright 2026 The Vocagno Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VOCAGNO_TOY_TOKENIZERS_HPP_
#define VOCAGNO_TOY_TOKENIZERS_HPP_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vocagno/corpus_io.hpp"

namespace vocagno {

enum class VocabKind { kChar, kWhitespace, kGreedyMerge };

std::optional<VocabKind> parse_vocab_kind(std::string_view name);
std::string_view to_string(VocabKind kind);

// Immutable vocabulary of UTF-8 token strings. Entries are kept sorted by
// byte order and the token id is the index into that order. Characters or
// words not in the vocabulary encode to unk_id() == size().
class ToyVocab {
 public:
  ToyVocab(VocabKind kind, std::vector<std::string> entries);

  VocabKind kind() const { return kind_; }
  const std::vector<std::string>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }
  int64_t unk_id() const { return static_cast<int64_t>(entries_.size()); }
  // Size of the id space a model over this vocabulary needs (entries + unk).
  size_t model_vocab_size() const { return entries_.size() + 1; }
  std::optional<int64_t> find(std::u32string_view piece) const;
  size_t max_piece_length() const { return max_len_; }

  friend bool operator==(const ToyVocab& a, const ToyVocab& b) {
    return a.kind_ == b.kind_ && a.entries_ == b.entries_;
  }

 private:
  VocabKind kind_;
  std::vector<std::string> entries_;
  std::unordered_map<std::u32string, int64_t> index_;
  size_t max_len_ = 0;
};

// Distinct characters of the texts.
ToyVocab train_char(const std::vector<std::string>& texts);
// Distinct maximal non-whitespace runs of the texts.
ToyVocab train_whitespace(const std::vector<std::string>& texts);

// Starts from the character inventory and repeatedly merges the most frequent
// adjacent pair (ties go to the lexicographically smallest pair) until the
// vocabulary reaches target_vocab_size or no pair is left. The merge loop is
// fully determined by its inputs; `seed` is accepted for interface symmetry
// with the other trainers and does not change the result.
// Throws kEmptyCorpus when the texts contain no characters and
// kInvalidArgument when target_vocab_size is below the character count.
ToyVocab train_greedy_merge(const std::vector<std::string>& texts,
                            size_t target_vocab_size, uint64_t seed);

// Greedy longest-match, left to right. Char and GreedyMerge spans tile
// [0, text_len); Whitespace drops whitespace characters and leaves gaps.
TokenizedSequence encode(const ToyVocab& vocab, std::string_view text,
                         Role role = Role::kStudent, std::string doc_id = {});
TokenizedSequence encode(const ToyVocab& vocab, std::u32string_view text,
                         Role role = Role::kStudent, std::string doc_id = {});

// Text covered by a span, as UTF-8.
std::string surface(std::u32string_view text, const TokenSpan& span);

enum class OverlapDenominator { kUnion, kMin };

// |A n B| / |A u B| (or / min(|A|, |B|)) over exact token strings.
// Throws kEmptyVocab when either side is empty.
double vocab_overlap(const std::set<std::string>& a, const std::set<std::string>& b,
                     OverlapDenominator denominator = OverlapDenominator::kUnion);
double vocab_overlap(const ToyVocab& a, const ToyVocab& b,
                     OverlapDenominator denominator = OverlapDenominator::kUnion);

// {"kind": ..., "entries": [sorted]}; load also accepts a bare sorted array.
std::string vocab_to_json(const ToyVocab& vocab);
ToyVocab vocab_from_json(std::string_view json_text);
void save_vocab(const ToyVocab& vocab, const std::string& path);
ToyVocab load_vocab(const std::string& path);

}  // namespace vocagno

#endif  // VOCAGNO_TOY_TOKENIZERS_HPP_
