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

#ifndef VOCAGNO_CORPUS_IO_HPP_
#define VOCAGNO_CORPUS_IO_HPP_

#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vocagno {

enum class Role { kStudent, kTeacher };

// One token and its half-open character interval [st, ed) in the source
// document. Offsets count Unicode scalar values, not bytes.
struct TokenSpan {
  int64_t token_id = 0;
  int64_t st = 0;
  int64_t ed = 0;
  bool zero_width = false;

  int64_t length() const { return ed - st; }
  friend bool operator==(const TokenSpan&, const TokenSpan&) = default;
};

struct TokenizedSequence {
  Role role = Role::kStudent;
  std::vector<TokenSpan> tokens;
  std::string doc_id;
  int64_t text_len = 0;

  size_t size() const { return tokens.size(); }
  friend bool operator==(const TokenizedSequence&,
                         const TokenizedSequence&) = default;
};

// Per-token losses, one per token of the associated sequence.
using LossVector = std::vector<double>;

enum class ViolationKind {
  kNegativeId,
  kNegativeStart,
  kStartAfterEnd,
  kEndPastText,
  kUnflaggedZeroWidth,
  kFlaggedNonZeroWidth,
  kOutOfOrder,
  kOverlap,
};

std::string_view violation_name(ViolationKind kind);

struct Violation {
  size_t token_index = 0;
  ViolationKind kind = ViolationKind::kOverlap;
  std::string detail;
};

// Returns the first violated sequence invariant, or nullopt when the
// sequence is well formed. Gaps between spans are legal; overlaps are not.
std::optional<Violation> validate_sequence(const TokenizedSequence& seq);

struct CorpusRecord {
  std::string doc_id;
  int64_t text_len = 0;
  TokenizedSequence student;
  TokenizedSequence teacher;
  std::optional<LossVector> student_losses;
  std::optional<LossVector> teacher_losses;

  friend bool operator==(const CorpusRecord&, const CorpusRecord&) = default;
};

// Parses one JSONL line. `line_number` is 1-based and only used in errors.
// Throws Error with kMalformedLine, kOffsetViolation or kLossLengthMismatch.
CorpusRecord parse_record(const std::string& line, size_t line_number);
std::string serialize_record(const CorpusRecord& record);

// Streams validated records in file order. Blank lines are skipped.
class CorpusReader {
 public:
  explicit CorpusReader(const std::string& path);

  std::optional<CorpusRecord> next();
  size_t line_number() const { return line_number_; }

 private:
  std::string path_;
  std::ifstream in_;
  size_t line_number_ = 0;
};

std::vector<CorpusRecord> read_corpus(const std::string& path);
void write_corpus(const std::string& path,
                  const std::vector<CorpusRecord>& records);

struct AlignmentMap;
struct TokenWeights;

std::string serialize_mask(const std::string& doc_id,
                           const AlignmentMap& mapping,
                           const TokenWeights& weights);

// Writes one line per record: {"doc_id", "mapping", "weights"} with null for
// Unmapped entries. Output is byte-stable for identical inputs.
class MaskWriter {
 public:
  explicit MaskWriter(const std::string& path);

  void write(const std::string& doc_id, const AlignmentMap& mapping,
             const TokenWeights& weights);
  void close();

 private:
  std::string path_;
  std::ofstream out_;
};

struct MaskRecord {
  std::string doc_id;
  std::reference_wrapper<const AlignmentMap> mapping;
  std::reference_wrapper<const TokenWeights> weights;
};

void write_masks(const std::string& path, std::span<const MaskRecord> records);

// Parsed form of one mask line, used when a precomputed mapping is reused.
struct ParsedMask {
  std::string doc_id;
  std::vector<std::optional<std::pair<int64_t, int64_t>>> mapping;
  std::vector<uint8_t> weights;
};

ParsedMask parse_mask(const std::string& line, size_t line_number);
std::vector<ParsedMask> read_masks(const std::string& path);

}  // namespace vocagno

#endif  // VOCAGNO_CORPUS_IO_HPP_
