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

#ifndef VOCAGNO_ALIGNMENT_HPP_
#define VOCAGNO_ALIGNMENT_HPP_

#include <cstdint>
#include <vector>

#include "vocagno/corpus_io.hpp"

namespace vocagno {

// Verdict for one student token: either Unmapped, or the minimal inclusive
// teacher index range [j, k] whose spans overlap the student span.
struct AlignmentEntry {
  bool mapped = false;
  int64_t j = 0;
  int64_t k = 0;
  // True iff every character of the student span lies inside some teacher
  // span in [j, k]. Always false for Unmapped entries.
  bool full_coverage = false;

  static AlignmentEntry unmapped() { return {}; }
  static AlignmentEntry range(int64_t j, int64_t k, bool full) {
    return {true, j, k, full};
  }
  friend bool operator==(const AlignmentEntry&, const AlignmentEntry&) = default;
};

struct AlignmentMap {
  std::vector<AlignmentEntry> entries;

  size_t size() const { return entries.size(); }
  const AlignmentEntry& operator[](size_t i) const { return entries[i]; }
  friend bool operator==(const AlignmentMap&, const AlignmentMap&) = default;
};

// Token-level lexical alignment. For each student token, two binary searches
// over the teacher spans find the first teacher token ending after the
// student start and the last teacher token starting before the student end.
// O(N log M). Zero-width student tokens are Unmapped.
// Throws kDocMismatch when the sequences describe different documents.
AlignmentMap align(const TokenizedSequence& student,
                   const TokenizedSequence& teacher);

// Reference implementation with the same contract as align(), computed by an
// exhaustive scan over every (student, teacher) pair and per-character
// coverage marking. O(N*M); only meant as a test oracle.
AlignmentMap align_oracle(const TokenizedSequence& student,
                          const TokenizedSequence& teacher);

struct CharSpan {
  int64_t st = 0;
  int64_t ed = 0;

  int64_t length() const { return ed > st ? ed - st : 0; }
  bool empty() const { return ed <= st; }
  friend bool operator==(const CharSpan&, const CharSpan&) = default;
};

struct ChunkPair {
  CharSpan student;
  CharSpan teacher;
  size_t index = 0;
};

// Splits both sequences into `num_chunks` contiguous token groups whose sizes
// differ by at most one (the first `size % num_chunks` groups get the extra
// token) and pairs them positionally. An empty group has an empty span.
std::vector<ChunkPair> chunk_align(const TokenizedSequence& student,
                                   const TokenizedSequence& teacher,
                                   size_t num_chunks);

struct OverlapMetrics {
  double iou = 0.0;
  double ios = 0.0;
};

// Character IoU and intersection-over-student of two half-open intervals.
OverlapMetrics overlap_metrics(CharSpan student, CharSpan teacher);
OverlapMetrics mean_overlap(const std::vector<ChunkPair>& pairs);

// Mean per-token IoU/IoS of an alignment, over non-zero-width student tokens.
// A token's teacher side is the union of its mapped teacher spans; Unmapped
// tokens score zero.
OverlapMetrics token_level_overlap(const AlignmentMap& map,
                                   const TokenizedSequence& student,
                                   const TokenizedSequence& teacher);

// Fraction of student characters (non-zero-width tokens) covered by the
// teacher spans each token is mapped to. 0 when there are no such characters.
double map_ios(const AlignmentMap& map, const TokenizedSequence& student,
               const TokenizedSequence& teacher);

}  // namespace vocagno

#endif  // VOCAGNO_ALIGNMENT_HPP_
