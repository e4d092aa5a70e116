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

#include "vocagno/toy_tokenizers.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vocagno/error.hpp"
#include "vocagno/unicode.hpp"

namespace vocagno {

std::optional<VocabKind> parse_vocab_kind(std::string_view name) {
  if (name == "char") return VocabKind::kChar;
  if (name == "whitespace") return VocabKind::kWhitespace;
  if (name == "greedy_merge" || name == "merge") return VocabKind::kGreedyMerge;
  return std::nullopt;
}

std::string_view to_string(VocabKind kind) {
  switch (kind) {
    case VocabKind::kChar: return "char";
    case VocabKind::kWhitespace: return "whitespace";
    case VocabKind::kGreedyMerge: return "greedy_merge";
  }
  return "unknown";
}

ToyVocab::ToyVocab(VocabKind kind, std::vector<std::string> entries)
    : kind_(kind), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end());
  for (size_t i = 0; i < entries_.size(); ++i) {
    const std::string& e = entries_[i];
    if (e.empty()) fail(ErrorCode::kInvalidArgument, "vocabulary entry is empty");
    if (i > 0 && entries_[i - 1] == e) {
      fail(ErrorCode::kInvalidArgument, "duplicate vocabulary entry '" + e + "'");
    }
    std::u32string piece = utf8_to_u32(e);
    if (kind_ == VocabKind::kChar && piece.size() != 1) {
      fail(ErrorCode::kInvalidArgument,
           "char vocabulary entry '" + e + "' is not a single character");
    }
    if (kind_ == VocabKind::kWhitespace &&
        std::any_of(piece.begin(), piece.end(), is_space)) {
      fail(ErrorCode::kInvalidArgument,
           "whitespace vocabulary entry '" + e + "' contains whitespace");
    }
    max_len_ = std::max(max_len_, piece.size());
    index_.emplace(std::move(piece), static_cast<int64_t>(i));
  }
}

std::optional<int64_t> ToyVocab::find(std::u32string_view piece) const {
  auto it = index_.find(std::u32string(piece));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::vector<std::u32string> decode_all(const std::vector<std::string>& texts) {
  std::vector<std::u32string> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(utf8_to_u32(t));
  return out;
}

std::set<std::u32string> char_inventory(const std::vector<std::u32string>& texts) {
  std::set<std::u32string> chars;
  for (const auto& t : texts) {
    for (char32_t c : t) chars.insert(std::u32string(1, c));
  }
  return chars;
}

std::vector<std::string> to_utf8(const std::set<std::u32string>& pieces) {
  std::vector<std::string> out;
  out.reserve(pieces.size());
  for (const auto& p : pieces) out.push_back(u32_to_utf8(p));
  return out;
}

}  // namespace

ToyVocab train_char(const std::vector<std::string>& texts) {
  auto chars = char_inventory(decode_all(texts));
  if (chars.empty()) fail(ErrorCode::kEmptyCorpus, "no characters to build a vocabulary from");
  return ToyVocab(VocabKind::kChar, to_utf8(chars));
}

ToyVocab train_whitespace(const std::vector<std::string>& texts) {
  std::set<std::u32string> words;
  for (const auto& text : decode_all(texts)) {
    size_t i = 0;
    while (i < text.size()) {
      if (is_space(text[i])) {
        ++i;
        continue;
      }
      size_t j = i;
      while (j < text.size() && !is_space(text[j])) ++j;
      words.insert(text.substr(i, j - i));
      i = j;
    }
  }
  if (words.empty()) fail(ErrorCode::kEmptyCorpus, "no words to build a vocabulary from");
  return ToyVocab(VocabKind::kWhitespace, to_utf8(words));
}

ToyVocab train_greedy_merge(const std::vector<std::string>& texts,
                            size_t target_vocab_size, uint64_t /*seed*/) {
  const auto decoded = decode_all(texts);
  std::set<std::u32string> vocab = char_inventory(decoded);
  if (vocab.empty()) fail(ErrorCode::kEmptyCorpus, "no characters to build a vocabulary from");
  if (target_vocab_size < vocab.size()) {
    fail(ErrorCode::kInvalidArgument,
         "target vocabulary size " + std::to_string(target_vocab_size) +
             " is below the " + std::to_string(vocab.size()) + " distinct characters");
  }

  std::vector<std::vector<std::u32string>> docs;
  docs.reserve(decoded.size());
  for (const auto& t : decoded) {
    std::vector<std::u32string> pieces;
    pieces.reserve(t.size());
    for (char32_t c : t) pieces.emplace_back(1, c);
    docs.push_back(std::move(pieces));
  }

  using Pair = std::pair<std::u32string, std::u32string>;
  while (vocab.size() < target_vocab_size) {
    std::map<Pair, size_t> counts;
    for (const auto& pieces : docs) {
      for (size_t i = 0; i + 1 < pieces.size(); ++i) ++counts[{pieces[i], pieces[i + 1]}];
    }
    if (counts.empty()) break;
    // std::map iterates in lexicographic order, so the first maximum wins ties.
    auto best = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it) {
      if (it->second > best->second) best = it;
    }
    const Pair pair = best->first;
    const std::u32string merged = pair.first + pair.second;
    for (auto& pieces : docs) {
      std::vector<std::u32string> next;
      next.reserve(pieces.size());
      for (size_t i = 0; i < pieces.size(); ++i) {
        if (i + 1 < pieces.size() && pieces[i] == pair.first && pieces[i + 1] == pair.second) {
          next.push_back(merged);
          ++i;
        } else {
          next.push_back(std::move(pieces[i]));
        }
      }
      pieces = std::move(next);
    }
    vocab.insert(merged);
  }
  return ToyVocab(VocabKind::kGreedyMerge, to_utf8(vocab));
}

TokenizedSequence encode(const ToyVocab& vocab, std::u32string_view text,
                         Role role, std::string doc_id) {
  TokenizedSequence seq;
  seq.role = role;
  seq.doc_id = std::move(doc_id);
  seq.text_len = static_cast<int64_t>(text.size());
  const size_t n = text.size();
  size_t i = 0;
  auto emit = [&](int64_t id, size_t st, size_t ed) {
    seq.tokens.push_back({id, static_cast<int64_t>(st), static_cast<int64_t>(ed), false});
  };
  if (vocab.kind() == VocabKind::kWhitespace) {
    while (i < n) {
      if (is_space(text[i])) {
        ++i;
        continue;
      }
      size_t j = i;
      while (j < n && !is_space(text[j])) ++j;
      emit(vocab.find(text.substr(i, j - i)).value_or(vocab.unk_id()), i, j);
      i = j;
    }
    return seq;
  }
  while (i < n) {
    const size_t longest = std::min(vocab.max_piece_length(), n - i);
    bool matched = false;
    for (size_t len = longest; len >= 1; --len) {
      if (auto id = vocab.find(text.substr(i, len))) {
        emit(*id, i, i + len);
        i += len;
        matched = true;
        break;
      }
    }
    if (!matched) {
      emit(vocab.unk_id(), i, i + 1);
      ++i;
    }
  }
  return seq;
}

TokenizedSequence encode(const ToyVocab& vocab, std::string_view text,
                         Role role, std::string doc_id) {
  return encode(vocab, std::u32string_view(utf8_to_u32(text)), role, std::move(doc_id));
}

std::string surface(std::u32string_view text, const TokenSpan& span) {
  if (span.st < 0 || span.ed < span.st || static_cast<size_t>(span.ed) > text.size()) {
    fail(ErrorCode::kIndexOutOfRange, "span outside text");
  }
  return u32_to_utf8(text.substr(span.st, span.ed - span.st));
}

double vocab_overlap(const std::set<std::string>& a, const std::set<std::string>& b,
                     OverlapDenominator denominator) {
  if (a.empty() || b.empty()) fail(ErrorCode::kEmptyVocab, "vocabulary overlap needs non-empty sets");
  size_t common = 0;
  for (const auto& s : a) common += b.count(s);
  const size_t denom = denominator == OverlapDenominator::kUnion
                           ? a.size() + b.size() - common
                           : std::min(a.size(), b.size());
  return static_cast<double>(common) / static_cast<double>(denom);
}

double vocab_overlap(const ToyVocab& a, const ToyVocab& b, OverlapDenominator denominator) {
  return vocab_overlap(std::set<std::string>(a.entries().begin(), a.entries().end()),
                       std::set<std::string>(b.entries().begin(), b.entries().end()),
                       denominator);
}

std::string vocab_to_json(const ToyVocab& vocab) {
  nlohmann::json doc = {{"kind", to_string(vocab.kind())}, {"entries", vocab.entries()}};
  return doc.dump();
}

ToyVocab vocab_from_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::kInvalidArgument, std::string("vocabulary JSON: ") + e.what());
  }
  std::optional<VocabKind> kind;
  const nlohmann::json* entries = &doc;
  if (doc.is_object()) {
    auto k = doc.find("kind");
    if (k == doc.end() || !k->is_string() || !(kind = parse_vocab_kind(k->get<std::string>()))) {
      fail(ErrorCode::kInvalidArgument, "vocabulary JSON: missing or unknown 'kind'");
    }
    auto e = doc.find("entries");
    if (e == doc.end()) fail(ErrorCode::kInvalidArgument, "vocabulary JSON: missing 'entries'");
    entries = &*e;
  }
  if (!entries->is_array()) fail(ErrorCode::kInvalidArgument, "vocabulary JSON: entries must be an array");
  std::vector<std::string> pieces;
  bool all_single = true;
  for (const auto& e : *entries) {
    if (!e.is_string()) fail(ErrorCode::kInvalidArgument, "vocabulary JSON: entries must be strings");
    pieces.push_back(e.get<std::string>());
    all_single = all_single && utf8_to_u32(pieces.back()).size() == 1;
  }
  if (pieces.empty()) fail(ErrorCode::kEmptyVocab, "vocabulary JSON: no entries");
  if (!kind) kind = all_single ? VocabKind::kChar : VocabKind::kGreedyMerge;
  return ToyVocab(*kind, std::move(pieces));
}

void save_vocab(const ToyVocab& vocab, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out << vocab_to_json(vocab) << '\n';
  if (!out) fail(ErrorCode::kIo, "write failure on '" + path + "'");
}

ToyVocab load_vocab(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open vocabulary '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return vocab_from_json(buf.str());
  } catch (const Error& e) {
    throw Error(e.code(), std::string(e.what()) + " (in '" + path + "')");
  }
}

}  // namespace vocagno
