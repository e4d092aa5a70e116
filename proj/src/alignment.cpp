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

#include "vocagno/alignment.hpp"

#include <algorithm>

#include "vocagno/error.hpp"

namespace vocagno {

namespace {

void check_same_document(const TokenizedSequence& student,
                         const TokenizedSequence& teacher) {
  if (student.doc_id != teacher.doc_id || student.text_len != teacher.text_len) {
    fail(ErrorCode::kDocMismatch,
         "student doc '" + student.doc_id + "' (len " + std::to_string(student.text_len) +
             ") vs teacher doc '" + teacher.doc_id + "' (len " +
             std::to_string(teacher.text_len) + ")");
  }
}

// Walks teacher spans j..k in order and checks that they leave no hole in
// [st, ed).
bool covers(const std::vector<TokenSpan>& teacher, int64_t j, int64_t k,
            int64_t st, int64_t ed) {
  int64_t cursor = st;
  for (int64_t t = j; t <= k && cursor < ed; ++t) {
    const TokenSpan& span = teacher[t];
    if (span.st > cursor) return false;
    cursor = std::max(cursor, span.ed);
  }
  return cursor >= ed;
}

}  // namespace

AlignmentMap align(const TokenizedSequence& student,
                   const TokenizedSequence& teacher) {
  check_same_document(student, teacher);
  const auto& tspans = teacher.tokens;
  AlignmentMap map;
  map.entries.reserve(student.tokens.size());
  for (const TokenSpan& s : student.tokens) {
    if (s.st == s.ed) {
      map.entries.push_back(AlignmentEntry::unmapped());
      continue;
    }
    // First teacher token with ed > st(student).
    auto low = std::upper_bound(tspans.begin(), tspans.end(), s.st,
                                [](int64_t v, const TokenSpan& t) { return v < t.ed; });
    // One past the last teacher token with st < ed(student).
    auto high = std::lower_bound(tspans.begin(), tspans.end(), s.ed,
                                 [](const TokenSpan& t, int64_t v) { return t.st < v; });
    const int64_t j = low - tspans.begin();
    const int64_t k = (high - tspans.begin()) - 1;
    if (j > k) {
      map.entries.push_back(AlignmentEntry::unmapped());
      continue;
    }
    map.entries.push_back(AlignmentEntry::range(j, k, covers(tspans, j, k, s.st, s.ed)));
  }
  return map;
}

AlignmentMap align_oracle(const TokenizedSequence& student,
                          const TokenizedSequence& teacher) {
  check_same_document(student, teacher);
  AlignmentMap map;
  const int64_t m = static_cast<int64_t>(teacher.tokens.size());
  for (const TokenSpan& s : student.tokens) {
    if (s.length() == 0) {
      map.entries.push_back(AlignmentEntry::unmapped());
      continue;
    }
    int64_t lo = -1;
    int64_t hi = -1;
    for (int64_t t = 0; t < m; ++t) {
      const TokenSpan& ts = teacher.tokens[t];
      if (ts.ed > s.st && ts.st < s.ed) {
        if (lo < 0) lo = t;
        hi = t;
      }
    }
    if (lo < 0) {
      map.entries.push_back(AlignmentEntry::unmapped());
      continue;
    }
    std::vector<bool> hit(static_cast<size_t>(s.length()), false);
    for (int64_t t = lo; t <= hi; ++t) {
      const TokenSpan& ts = teacher.tokens[t];
      for (int64_t c = std::max(ts.st, s.st); c < std::min(ts.ed, s.ed); ++c) {
        hit[c - s.st] = true;
      }
    }
    const bool full = std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
    map.entries.push_back(AlignmentEntry::range(lo, hi, full));
  }
  return map;
}

namespace {

std::vector<CharSpan> chunk_spans(const TokenizedSequence& seq, size_t num_chunks) {
  std::vector<CharSpan> spans;
  spans.reserve(num_chunks);
  const size_t n = seq.tokens.size();
  const size_t base = n / num_chunks;
  const size_t extra = n % num_chunks;
  size_t begin = 0;
  for (size_t c = 0; c < num_chunks; ++c) {
    const size_t size = base + (c < extra ? 1 : 0);
    if (size == 0) {
      spans.push_back({0, 0});
    } else {
      spans.push_back({seq.tokens[begin].st, seq.tokens[begin + size - 1].ed});
    }
    begin += size;
  }
  return spans;
}

}  // namespace

std::vector<ChunkPair> chunk_align(const TokenizedSequence& student,
                                   const TokenizedSequence& teacher,
                                   size_t num_chunks) {
  if (num_chunks == 0) fail(ErrorCode::kInvalidArgument, "num_chunks must be >= 1");
  const auto s = chunk_spans(student, num_chunks);
  const auto t = chunk_spans(teacher, num_chunks);
  std::vector<ChunkPair> pairs;
  pairs.reserve(num_chunks);
  for (size_t c = 0; c < num_chunks; ++c) pairs.push_back({s[c], t[c], c});
  return pairs;
}

OverlapMetrics overlap_metrics(CharSpan student, CharSpan teacher) {
  const int64_t inter =
      std::max<int64_t>(0, std::min(student.ed, teacher.ed) - std::max(student.st, teacher.st));
  const int64_t uni = student.length() + teacher.length() - inter;
  OverlapMetrics m;
  m.iou = uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
  m.ios = student.length() > 0
              ? static_cast<double>(inter) / static_cast<double>(student.length())
              : 0.0;
  return m;
}

OverlapMetrics mean_overlap(const std::vector<ChunkPair>& pairs) {
  OverlapMetrics mean;
  if (pairs.empty()) return mean;
  for (const ChunkPair& p : pairs) {
    const OverlapMetrics m = overlap_metrics(p.student, p.teacher);
    mean.iou += m.iou;
    mean.ios += m.ios;
  }
  mean.iou /= static_cast<double>(pairs.size());
  mean.ios /= static_cast<double>(pairs.size());
  return mean;
}

namespace {

void check_map(const AlignmentMap& map, const TokenizedSequence& student,
               const TokenizedSequence& teacher) {
  if (map.size() != student.size()) {
    fail(ErrorCode::kLengthMismatch, "alignment map has " + std::to_string(map.size()) +
                                         " entries for " + std::to_string(student.size()) +
                                         " student tokens");
  }
  for (const AlignmentEntry& e : map.entries) {
    if (e.mapped && (e.j < 0 || e.k < e.j ||
                     e.k >= static_cast<int64_t>(teacher.tokens.size()))) {
      fail(ErrorCode::kIndexOutOfRange, "alignment entry outside teacher sequence");
    }
  }
}

// Characters of [st, ed) inside the union of teacher spans j..k. Teacher
// spans never overlap, so clipped lengths add up.
int64_t covered_chars(const std::vector<TokenSpan>& teacher, const AlignmentEntry& e,
                      int64_t st, int64_t ed) {
  int64_t covered = 0;
  for (int64_t t = e.j; t <= e.k; ++t) {
    covered += std::max<int64_t>(0, std::min(ed, teacher[t].ed) - std::max(st, teacher[t].st));
  }
  return covered;
}

}  // namespace

OverlapMetrics token_level_overlap(const AlignmentMap& map,
                                   const TokenizedSequence& student,
                                   const TokenizedSequence& teacher) {
  check_map(map, student, teacher);
  OverlapMetrics mean;
  size_t counted = 0;
  for (size_t i = 0; i < student.size(); ++i) {
    const TokenSpan& s = student.tokens[i];
    if (s.length() == 0) continue;
    ++counted;
    const AlignmentEntry& e = map[i];
    if (!e.mapped) continue;
    int64_t teacher_chars = 0;
    for (int64_t t = e.j; t <= e.k; ++t) teacher_chars += teacher.tokens[t].length();
    const int64_t inter = covered_chars(teacher.tokens, e, s.st, s.ed);
    mean.iou += static_cast<double>(inter) / static_cast<double>(s.length() + teacher_chars - inter);
    mean.ios += static_cast<double>(inter) / static_cast<double>(s.length());
  }
  if (counted > 0) {
    mean.iou /= static_cast<double>(counted);
    mean.ios /= static_cast<double>(counted);
  }
  return mean;
}

double map_ios(const AlignmentMap& map, const TokenizedSequence& student,
               const TokenizedSequence& teacher) {
  check_map(map, student, teacher);
  int64_t total = 0;
  int64_t covered = 0;
  for (size_t i = 0; i < student.size(); ++i) {
    const TokenSpan& s = student.tokens[i];
    if (s.length() == 0) continue;
    total += s.length();
    if (map[i].mapped) covered += covered_chars(teacher.tokens, map[i], s.st, s.ed);
  }
  return total > 0 ? static_cast<double>(covered) / static_cast<double>(total) : 0.0;
}

}  // namespace vocagno
