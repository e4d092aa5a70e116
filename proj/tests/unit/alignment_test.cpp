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

#include "fuzz.hpp"
#include "vocagno/alignment.hpp"
#include "vocagno/error.hpp"

namespace vocagno {
namespace {

TokenizedSequence seq_of(std::vector<std::pair<int64_t, int64_t>> spans, int64_t text_len,
                         Role role = Role::kStudent) {
  TokenizedSequence s;
  s.role = role;
  s.text_len = text_len;
  for (auto [st, ed] : spans) s.tokens.push_back({0, st, ed, st == ed});
  return s;
}

// Brute force over characters: a teacher token is relevant to a student
// token when their half-open intervals intersect, or when it is a zero-width
// teacher token strictly inside the student span. Coverage is checked one
// character at a time.
AlignmentMap brute_force(const TokenizedSequence& s, const TokenizedSequence& t) {
  AlignmentMap out;
  for (const auto& a : s.tokens) {
    if (a.ed == a.st) {
      out.entries.push_back(AlignmentEntry::unmapped());
      continue;
    }
    int64_t lo = -1, hi = -1;
    for (size_t x = 0; x < t.size(); ++x) {
      const auto& b = t.tokens[x];
      const bool hit = b.ed > a.st && b.st < a.ed;
      if (!hit) continue;
      if (lo < 0) lo = static_cast<int64_t>(x);
      hi = static_cast<int64_t>(x);
    }
    if (lo < 0) {
      out.entries.push_back(AlignmentEntry::unmapped());
      continue;
    }
    bool full = true;
    for (int64_t c = a.st; c < a.ed && full; ++c) {
      bool covered = false;
      for (int64_t x = lo; x <= hi; ++x) {
        covered |= t.tokens[x].st <= c && c < t.tokens[x].ed;
      }
      full = covered;
    }
    out.entries.push_back(AlignmentEntry::range(lo, hi, full));
  }
  return out;
}

TEST(Align, IdenticalTokenizations) {
  const auto s = seq_of({{0, 2}, {2, 3}, {3, 7}}, 7);
  const auto m = align(s, s);
  for (size_t i = 0; i < m.size(); ++i) {
    EXPECT_EQ(m[i], AlignmentEntry::range(i, i, true));
  }
}

TEST(Align, WorkedExample) {
  const auto s = seq_of({{0, 2}, {2, 3}, {3, 5}}, 5);
  const auto t = seq_of({{0, 1}, {1, 2}, {2, 5}}, 5, Role::kTeacher);
  const AlignmentMap expected{{AlignmentEntry::range(0, 1, true), AlignmentEntry::range(2, 2, true),
                               AlignmentEntry::range(2, 2, true)}};
  EXPECT_EQ(align(s, t), expected);
  EXPECT_EQ(align_oracle(s, t), expected);
  EXPECT_EQ(brute_force(s, t), expected);
}

TEST(Align, NoOverlapIsUnmapped) {
  const auto s = seq_of({{0, 2}}, 5);
  const auto t = seq_of({{3, 5}}, 5, Role::kTeacher);
  EXPECT_EQ(align(s, t)[0], AlignmentEntry::unmapped());
}

TEST(Align, ZeroWidthStudentIsUnmapped) {
  const auto s = seq_of({{0, 0}, {0, 3}, {3, 3}}, 3);
  const auto t = seq_of({{0, 3}}, 3, Role::kTeacher);
  const auto m = align(s, t);
  EXPECT_FALSE(m[0].mapped);
  EXPECT_TRUE(m[1].mapped);
  EXPECT_FALSE(m[2].mapped);
}

TEST(Align, PartialOverlapIsRangeWithoutFullCoverage) {
  const auto s = seq_of({{0, 4}}, 6);
  const auto t = seq_of({{0, 1}, {2, 6}}, 6, Role::kTeacher);
  EXPECT_EQ(align(s, t)[0], AlignmentEntry::range(0, 1, false));
}

TEST(Align, EmptySequences) {
  const auto s = seq_of({{0, 1}, {1, 2}}, 2);
  const auto empty = seq_of({}, 2, Role::kTeacher);
  for (const auto& e : align(s, empty).entries) EXPECT_FALSE(e.mapped);
  for (const auto& e : align_oracle(s, empty).entries) EXPECT_FALSE(e.mapped);
  EXPECT_EQ(align(seq_of({}, 2), s).size(), 0u);
  EXPECT_EQ(align_oracle(seq_of({}, 2), s).size(), 0u);
}

TEST(Align, DocMismatch) {
  auto s = seq_of({{0, 1}}, 2);
  auto t = seq_of({{0, 1}}, 3, Role::kTeacher);
  try {
    align(s, t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDocMismatch);
  }
  EXPECT_THROW(align_oracle(s, t), Error);
  t.text_len = 2;
  s.doc_id = "a";
  t.doc_id = "b";
  EXPECT_THROW(align(s, t), Error);
}

TEST(Align, FuzzedAgainstBruteForceWithInvariants) {
  testing::Rng rng(2024);
  for (int round = 0; round < 400; ++round) {
    const int64_t len = rng.uniform_int(0, 60);
    const auto s = testing::random_spans(rng, len, 5, 0.2, 0.1, Role::kStudent);
    const auto t = testing::random_spans(rng, len, 7, rng.coin() ? 0.0 : 0.3, 0.1, Role::kTeacher);
    const auto m = align(s, t);
    ASSERT_EQ(m, brute_force(s, t)) << "round " << round;
    ASSERT_EQ(m, align_oracle(s, t)) << "round " << round;
    // Monotone ranges.
    int64_t last_j = -1, last_k = -1;
    for (size_t i = 0; i < m.size(); ++i) {
      if (!m[i].mapped) continue;
      EXPECT_LE(m[i].j, m[i].k);
      EXPECT_GE(m[i].j, last_j);
      EXPECT_GE(m[i].k, last_k);
      last_j = m[i].j;
      last_k = m[i].k;
      // Minimality: dropping an end token that overlaps in characters loses
      // that overlap, and both ends actually overlap the student span.
      const auto& a = s.tokens[i];
      const auto& lo = t.tokens[m[i].j];
      const auto& hi = t.tokens[m[i].k];
      EXPECT_TRUE(lo.ed > a.st && lo.st < a.ed);
      EXPECT_TRUE(hi.ed > a.st && hi.st < a.ed);
    }
  }
}

TEST(Align, TilingTeacherGivesFullCoverage) {
  testing::Rng rng(7);
  for (int round = 0; round < 100; ++round) {
    const int64_t len = rng.uniform_int(1, 80);
    const auto s = testing::random_spans(rng, len, 5, 0.3, 0.1, Role::kStudent);
    const auto t = testing::random_spans(rng, len, 6, 0.0, 0.0, Role::kTeacher);
    const auto m = align(s, t);
    size_t real = 0;
    for (size_t i = 0; i < m.size(); ++i) {
      if (s.tokens[i].zero_width) continue;
      ++real;
      EXPECT_TRUE(m[i].mapped && m[i].full_coverage);
    }
    if (real > 0) EXPECT_EQ(map_ios(m, s, t), 1.0);
  }
}

TEST(ChunkAlign, OneChunkSpansEverything) {
  const auto s = seq_of({{0, 2}, {2, 5}, {6, 9}}, 10);
  const auto t = seq_of({{1, 4}, {4, 10}}, 10, Role::kTeacher);
  const auto pairs = chunk_align(s, t, 1);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].student, (CharSpan{0, 9}));
  EXPECT_EQ(pairs[0].teacher, (CharSpan{1, 10}));
  const auto m = mean_overlap(pairs);
  EXPECT_DOUBLE_EQ(m.iou, 8.0 / 10.0);
  EXPECT_DOUBLE_EQ(m.ios, 8.0 / 9.0);
}

TEST(ChunkAlign, RemainderFirst) {
  const auto s = seq_of({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}}, 5);
  const auto pairs = chunk_align(s, s, 2);
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0].student, (CharSpan{0, 3}));
  EXPECT_EQ(pairs[1].student, (CharSpan{3, 5}));
  EXPECT_EQ(pairs[1].index, 1u);
}

TEST(ChunkAlign, PerTokenChunksOnIdenticalTokenizations) {
  const auto s = seq_of({{0, 1}, {1, 3}, {3, 4}}, 4);
  const auto pairs = chunk_align(s, s, 3);
  for (const auto& p : pairs) EXPECT_DOUBLE_EQ(overlap_metrics(p.student, p.teacher).iou, 1.0);
}

TEST(ChunkAlign, MoreChunksThanTokensGiveEmptySpans) {
  const auto s = seq_of({{0, 1}, {1, 2}}, 2);
  const auto pairs = chunk_align(s, s, 4);
  ASSERT_EQ(pairs.size(), 4u);
  EXPECT_TRUE(pairs[2].student.empty());
  EXPECT_TRUE(pairs[3].teacher.empty());
  EXPECT_THROW(chunk_align(s, s, 0), Error);
}

TEST(OverlapMetrics, IntervalArithmetic) {
  auto m = overlap_metrics({0, 10}, {5, 15});
  EXPECT_DOUBLE_EQ(m.iou, 5.0 / 15.0);
  EXPECT_DOUBLE_EQ(m.ios, 0.5);
  m = overlap_metrics({3, 8}, {3, 8});
  EXPECT_EQ(m.iou, 1.0);
  EXPECT_EQ(m.ios, 1.0);
  m = overlap_metrics({0, 3}, {3, 8});
  EXPECT_EQ(m.iou, 0.0);
  EXPECT_EQ(m.ios, 0.0);
  m = overlap_metrics({0, 0}, {0, 0});
  EXPECT_EQ(m.iou, 0.0);
  EXPECT_EQ(m.ios, 0.0);
}

TEST(OverlapMetrics, IosDominatesIouFuzzed) {
  testing::Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const int64_t a = rng.uniform_int(0, 20), b = rng.uniform_int(0, 20);
    const int64_t c = rng.uniform_int(0, 20), d = rng.uniform_int(0, 20);
    const auto m = overlap_metrics({std::min(a, b), std::max(a, b)}, {std::min(c, d), std::max(c, d)});
    EXPECT_GE(m.ios, m.iou);
    EXPECT_GE(m.iou, 0.0);
    EXPECT_LE(m.ios, 1.0);
  }
}

TEST(MapIos, AllUnmappedIsZero) {
  const auto s = seq_of({{0, 2}}, 5);
  const auto t = seq_of({{3, 5}}, 5, Role::kTeacher);
  EXPECT_EQ(map_ios(align(s, t), s, t), 0.0);
}

TEST(MapIos, HalfCovered) {
  // Student [0,8); teacher covers [0,2) and [6,8): 4 of 8 characters.
  const auto s = seq_of({{0, 8}}, 8);
  const auto t = seq_of({{0, 2}, {6, 8}}, 8, Role::kTeacher);
  const auto m = align(s, t);
  int64_t covered = 0;
  for (int64_t c = 0; c < 8; ++c) covered += (c < 2 || c >= 6) ? 1 : 0;
  EXPECT_EQ(map_ios(m, s, t), static_cast<double>(covered) / 8.0);
  EXPECT_EQ(map_ios(m, s, t), 0.5);
}

TEST(TokenLevelOverlap, UnionOfMappedSpans) {
  // Student [0,4) mapped to teacher [0,2) u [2,6): union [0,6), IoU 4/6, IoS 1.
  const auto s = seq_of({{0, 4}, {4, 4}}, 6);
  const auto t = seq_of({{0, 2}, {2, 6}}, 6, Role::kTeacher);
  const auto m = token_level_overlap(align(s, t), s, t);
  EXPECT_DOUBLE_EQ(m.iou, 4.0 / 6.0);
  EXPECT_DOUBLE_EQ(m.ios, 1.0);
}

}  // namespace
}  // namespace vocagno
