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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "fuzz.hpp"
#include "vocagno/error.hpp"
#include "vocagno/toy_tokenizers.hpp"
#include "vocagno/unicode.hpp"

namespace vocagno {
namespace {

std::vector<std::pair<int64_t, int64_t>> spans(const TokenizedSequence& s) {
  std::vector<std::pair<int64_t, int64_t>> out;
  for (const auto& t : s.tokens) out.emplace_back(t.st, t.ed);
  return out;
}

using Spans = std::vector<std::pair<int64_t, int64_t>>;

TEST(GreedyMerge, MergesMostFrequentPair) {
  const ToyVocab v = train_greedy_merge({"aaaa"}, 2, 0);
  EXPECT_EQ(v.entries(), (std::vector<std::string>{"a", "aa"}));
  EXPECT_EQ(v.kind(), VocabKind::kGreedyMerge);
}

TEST(GreedyMerge, SizeEqualToCharCountMeansNoMerges) {
  const std::vector<std::string> texts = {"hello world", "héllo"};
  const size_t chars = train_char(texts).size();
  EXPECT_EQ(train_greedy_merge(texts, chars, 3).entries(), train_char(texts).entries());
}

TEST(GreedyMerge, Deterministic) {
  testing::Rng rng(5);
  std::vector<std::string> texts;
  for (int i = 0; i < 20; ++i) texts.push_back(testing::random_sentence(rng, 12));
  const size_t chars = train_char(texts).size();
  EXPECT_EQ(train_greedy_merge(texts, chars + 30, 1), train_greedy_merge(texts, chars + 30, 1));
  EXPECT_EQ(train_greedy_merge(texts, chars + 30, 1).size(), chars + 30);
}

TEST(GreedyMerge, TiesGoToLexicographicallySmallestPair) {
  // "ab" and "cd" both occur twice; "ab" < "cd".
  const ToyVocab v = train_greedy_merge({"abcd", "abcd"}, 5, 0);
  EXPECT_EQ(v.entries(), (std::vector<std::string>{"a", "ab", "b", "c", "d"}));
}

TEST(GreedyMerge, Errors) {
  EXPECT_THROW(train_greedy_merge({"", ""}, 3, 0), Error);
  try {
    train_greedy_merge({}, 3, 0);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyCorpus);
  }
  try {
    train_greedy_merge({"abc"}, 2, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(Encode, CharVocab) {
  const ToyVocab v = train_char({"ab"});
  EXPECT_EQ(spans(encode(v, "ab")), (Spans{{0, 1}, {1, 2}}));
}

TEST(Encode, GreedyLongestMatch) {
  const ToyVocab v(VocabKind::kGreedyMerge, {"a", "aa"});
  const auto s = encode(v, "aaa");
  EXPECT_EQ(spans(s), (Spans{{0, 2}, {2, 3}}));
  EXPECT_EQ(s.tokens[0].token_id, *v.find(U"aa"));
  EXPECT_EQ(s.tokens[1].token_id, *v.find(U"a"));
}

TEST(Encode, WhitespaceLeavesGaps) {
  const ToyVocab v = train_whitespace({"a b"});
  EXPECT_EQ(spans(encode(v, "a b")), (Spans{{0, 1}, {2, 3}}));
}

TEST(Encode, EmptyText) {
  const ToyVocab v = train_char({"ab"});
  const auto s = encode(v, "");
  EXPECT_TRUE(s.tokens.empty());
  EXPECT_EQ(s.text_len, 0);
}

TEST(Encode, UnknownCharactersMapToUnk) {
  const ToyVocab v = train_char({"ab"});
  const auto s = encode(v, "abz");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.tokens[2].token_id, v.unk_id());
  EXPECT_EQ(v.model_vocab_size(), 3u);
}

TEST(Encode, OffsetsCountScalarValues) {
  const ToyVocab v = train_char({"日本語"});
  const auto s = encode(v, "日本語");
  EXPECT_EQ(s.text_len, 3);
  EXPECT_EQ(spans(s), (Spans{{0, 1}, {1, 2}, {2, 3}}));
}

TEST(Encode, TilingAndSurfacePropertyFuzzed) {
  testing::Rng rng(99);
  for (int round = 0; round < 100; ++round) {
    std::vector<std::string> texts;
    for (int i = 0; i < 5; ++i) texts.push_back(testing::random_sentence(rng, 1 + i * 3));
    for (VocabKind kind : {VocabKind::kChar, VocabKind::kGreedyMerge, VocabKind::kWhitespace}) {
      const ToyVocab v = testing::train_kind(kind, texts, rng);
      for (const auto& text : texts) {
        const std::u32string u = utf8_to_u32(text);
        const auto s = encode(v, text);
        EXPECT_FALSE(validate_sequence(s).has_value());
        std::string joined;
        for (const auto& t : s.tokens) {
          joined += surface(u, t);
          EXPECT_NE(t.token_id, v.unk_id());
        }
        if (kind == VocabKind::kWhitespace) {
          std::string no_space;
          for (char32_t c : u) {
            if (!is_space(c)) no_space += u32_to_utf8(std::u32string(1, c));
          }
          EXPECT_EQ(joined, no_space);
        } else {
          EXPECT_EQ(joined, text);
          int64_t pos = 0;
          for (const auto& t : s.tokens) {
            EXPECT_EQ(t.st, pos);
            pos = t.ed;
          }
          EXPECT_EQ(pos, s.text_len);
        }
      }
    }
  }
}

TEST(Encode, CharVocabIsInjectiveOnEqualLengthTexts) {
  const ToyVocab v = train_char({"abc"});
  const auto a = encode(v, "abca");
  const auto b = encode(v, "abcb");
  EXPECT_NE(a, b);
}

TEST(VocabOverlap, SetArithmetic) {
  EXPECT_DOUBLE_EQ(vocab_overlap(std::set<std::string>{"a", "b"}, {"a", "b"}), 1.0);
  EXPECT_DOUBLE_EQ(vocab_overlap(std::set<std::string>{"a"}, {"b"}), 0.0);
  EXPECT_DOUBLE_EQ(vocab_overlap(std::set<std::string>{"a", "b"}, {"b", "c"}), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(vocab_overlap(std::set<std::string>{"a", "b"}, {"b", "c", "d"},
                                 OverlapDenominator::kMin),
                   0.5);
  try {
    vocab_overlap(std::set<std::string>{}, {"a"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyVocab);
  }
}

TEST(VocabOverlap, OnVocabularies) {
  const ToyVocab a(VocabKind::kChar, {"a", "b"});
  const ToyVocab b(VocabKind::kGreedyMerge, {"b", "c", "bc"});
  EXPECT_DOUBLE_EQ(vocab_overlap(a, b), 0.25);
}

TEST(ToyVocab, RejectsBadEntries) {
  EXPECT_THROW(ToyVocab(VocabKind::kChar, {"a", "a"}), Error);
  EXPECT_THROW(ToyVocab(VocabKind::kChar, {"ab"}), Error);
  EXPECT_THROW(ToyVocab(VocabKind::kWhitespace, {"a b"}), Error);
  EXPECT_THROW(ToyVocab(VocabKind::kGreedyMerge, {""}), Error);
}

TEST(VocabJson, RoundTripAndBareArray) {
  const ToyVocab v(VocabKind::kGreedyMerge, {"b", "a", "ab", "é"});
  EXPECT_EQ(vocab_from_json(vocab_to_json(v)), v);
  EXPECT_EQ(vocab_from_json(R"(["a","b"])").kind(), VocabKind::kChar);
  EXPECT_EQ(vocab_from_json(R"(["a","ab"])").kind(), VocabKind::kGreedyMerge);
  EXPECT_THROW(vocab_from_json("{oops"), Error);
}

TEST(VocabJson, LoadErrorNamesFile) {
  const auto path = std::filesystem::temp_directory_path() / "vocagno_bad_vocab.json";
  {
    std::ofstream out(path);
    out << "not json";
  }
  try {
    load_vocab(path.string());
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find(path.string()), std::string::npos) << e.what();
  }
}

TEST(Unicode, RejectsInvalidUtf8) {
  EXPECT_THROW(utf8_to_u32("\xff"), Error);
  EXPECT_THROW(utf8_to_u32("\xc3"), Error);
  EXPECT_THROW(utf8_to_u32("\xed\xa0\x80"), Error);  // surrogate
  EXPECT_THROW(utf8_to_u32("\xc0\x80"), Error);      // overlong
  EXPECT_EQ(utf8_to_u32("aé日😀"), U"aé日😀");
  EXPECT_EQ(u32_to_utf8(U"aé日😀"), "aé日😀");
}

}  // namespace
}  // namespace vocagno
