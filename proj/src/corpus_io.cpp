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

#include "vocagno/corpus_io.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "vocagno/alignment.hpp"
#include "vocagno/error.hpp"
#include "vocagno/guidance.hpp"

namespace vocagno {

using nlohmann::json;

std::string_view violation_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kNegativeId: return "negative token id";
    case ViolationKind::kNegativeStart: return "negative start offset";
    case ViolationKind::kStartAfterEnd: return "start after end";
    case ViolationKind::kEndPastText: return "end past text length";
    case ViolationKind::kUnflaggedZeroWidth: return "zero-width span not flagged zw";
    case ViolationKind::kFlaggedNonZeroWidth: return "zw flag on non-empty span";
    case ViolationKind::kOutOfOrder: return "tokens out of order";
    case ViolationKind::kOverlap: return "overlapping spans";
  }
  return "unknown";
}

std::optional<Violation> validate_sequence(const TokenizedSequence& seq) {
  auto violation = [](size_t i, ViolationKind kind, std::string detail) {
    return std::optional<Violation>(Violation{i, kind, std::move(detail)});
  };
  const TokenSpan* prev = nullptr;
  const TokenSpan* prev_wide = nullptr;
  for (size_t i = 0; i < seq.tokens.size(); ++i) {
    const TokenSpan& t = seq.tokens[i];
    const std::string span =
        "[" + std::to_string(t.st) + "," + std::to_string(t.ed) + ")";
    if (t.token_id < 0) return violation(i, ViolationKind::kNegativeId, span);
    if (t.st < 0) return violation(i, ViolationKind::kNegativeStart, span);
    if (t.st > t.ed) return violation(i, ViolationKind::kStartAfterEnd, span);
    if (t.ed > seq.text_len) {
      return violation(i, ViolationKind::kEndPastText,
                       span + " text_len=" + std::to_string(seq.text_len));
    }
    if (t.st == t.ed && !t.zero_width) {
      return violation(i, ViolationKind::kUnflaggedZeroWidth, span);
    }
    if (t.st != t.ed && t.zero_width) {
      return violation(i, ViolationKind::kFlaggedNonZeroWidth, span);
    }
    if (prev != nullptr && (t.st < prev->st || t.ed < prev->ed)) {
      return violation(i, ViolationKind::kOutOfOrder, span);
    }
    if (!t.zero_width) {
      if (prev_wide != nullptr && prev_wide->ed > t.st) {
        return violation(i, ViolationKind::kOverlap, span);
      }
      prev_wide = &t;
    }
    prev = &t;
  }
  return std::nullopt;
}

namespace {

[[noreturn]] void malformed(size_t line, const std::string& cause) {
  fail(ErrorCode::kMalformedLine, "line " + std::to_string(line) + ": " + cause);
}

int64_t require_int(const json& obj, const char* key, size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) malformed(line, std::string("missing '") + key + "'");
  if (!it->is_number_integer()) {
    malformed(line, std::string("'") + key + "' must be an integer");
  }
  return it->get<int64_t>();
}

TokenizedSequence parse_sequence(const json& side, Role role,
                                 const std::string& doc_id, int64_t text_len,
                                 size_t line, std::optional<LossVector>* losses) {
  const char* name = role == Role::kStudent ? "student" : "teacher";
  if (!side.is_object()) malformed(line, std::string("'") + name + "' must be an object");
  auto tokens_it = side.find("tokens");
  if (tokens_it == side.end() || !tokens_it->is_array()) {
    malformed(line, std::string("'") + name + ".tokens' must be an array");
  }
  TokenizedSequence seq;
  seq.role = role;
  seq.doc_id = doc_id;
  seq.text_len = text_len;
  seq.tokens.reserve(tokens_it->size());
  for (const json& tok : *tokens_it) {
    if (!tok.is_object()) malformed(line, std::string(name) + " token must be an object");
    TokenSpan span;
    span.token_id = require_int(tok, "id", line);
    span.st = require_int(tok, "st", line);
    span.ed = require_int(tok, "ed", line);
    if (auto zw = tok.find("zw"); zw != tok.end()) {
      if (!zw->is_boolean()) malformed(line, "'zw' must be a boolean");
      span.zero_width = zw->get<bool>();
    }
    seq.tokens.push_back(span);
  }
  if (auto violation = validate_sequence(seq)) {
    fail(ErrorCode::kOffsetViolation,
         "line " + std::to_string(line) + ": doc '" + doc_id + "' " + name +
             " token " + std::to_string(violation->token_index) + ": " +
             std::string(violation_name(violation->kind)) + " " +
             violation->detail);
  }
  if (auto loss_it = side.find("losses"); loss_it != side.end() && !loss_it->is_null()) {
    if (!loss_it->is_array()) malformed(line, std::string("'") + name + ".losses' must be an array");
    LossVector values;
    values.reserve(loss_it->size());
    for (const json& v : *loss_it) {
      if (!v.is_number()) malformed(line, std::string(name) + " loss must be a number");
      const double x = v.get<double>();
      if (!std::isfinite(x) || x < 0.0) {
        malformed(line, std::string(name) + " loss must be finite and >= 0");
      }
      values.push_back(x);
    }
    if (values.size() != seq.tokens.size()) {
      fail(ErrorCode::kLossLengthMismatch,
           "line " + std::to_string(line) + ": doc '" + doc_id + "' " + name +
               " has " + std::to_string(seq.tokens.size()) + " tokens but " +
               std::to_string(values.size()) + " losses");
    }
    *losses = std::move(values);
  }
  return seq;
}

json sequence_to_json(const TokenizedSequence& seq,
                      const std::optional<LossVector>& losses) {
  json tokens = json::array();
  for (const TokenSpan& t : seq.tokens) {
    json tok = {{"id", t.token_id}, {"st", t.st}, {"ed", t.ed}};
    if (t.zero_width) tok["zw"] = true;
    tokens.push_back(std::move(tok));
  }
  json side = {{"tokens", std::move(tokens)}};
  if (losses) side["losses"] = *losses;
  return side;
}

}  // namespace

CorpusRecord parse_record(const std::string& line, size_t line_number) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error& e) {
    malformed(line_number, e.what());
  }
  if (!doc.is_object()) malformed(line_number, "record must be a JSON object");
  auto id_it = doc.find("doc_id");
  if (id_it == doc.end() || !id_it->is_string()) {
    malformed(line_number, "'doc_id' must be a string");
  }
  CorpusRecord record;
  record.doc_id = id_it->get<std::string>();
  record.text_len = require_int(doc, "text_len", line_number);
  if (record.text_len < 0) malformed(line_number, "'text_len' must be >= 0");
  for (Role role : {Role::kStudent, Role::kTeacher}) {
    const char* name = role == Role::kStudent ? "student" : "teacher";
    auto it = doc.find(name);
    if (it == doc.end()) malformed(line_number, std::string("missing '") + name + "'");
    auto& seq = role == Role::kStudent ? record.student : record.teacher;
    auto& losses = role == Role::kStudent ? record.student_losses : record.teacher_losses;
    seq = parse_sequence(*it, role, record.doc_id, record.text_len, line_number, &losses);
  }
  return record;
}

std::string serialize_record(const CorpusRecord& record) {
  json doc = {
      {"doc_id", record.doc_id},
      {"text_len", record.text_len},
      {"student", sequence_to_json(record.student, record.student_losses)},
      {"teacher", sequence_to_json(record.teacher, record.teacher_losses)},
  };
  return doc.dump();
}

CorpusReader::CorpusReader(const std::string& path) : path_(path), in_(path) {
  if (!in_) fail(ErrorCode::kIo, "cannot open '" + path + "'");
}

std::optional<CorpusRecord> CorpusReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_number_;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    return parse_record(line, line_number_);
  }
  if (in_.bad()) fail(ErrorCode::kIo, "read failure on '" + path_ + "'");
  return std::nullopt;
}

std::vector<CorpusRecord> read_corpus(const std::string& path) {
  CorpusReader reader(path);
  std::vector<CorpusRecord> records;
  while (auto record = reader.next()) records.push_back(std::move(*record));
  return records;
}

void write_corpus(const std::string& path,
                  const std::vector<CorpusRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  for (const CorpusRecord& r : records) out << serialize_record(r) << '\n';
  out.flush();
  if (!out) fail(ErrorCode::kIo, "write failure on '" + path + "'");
}

std::string serialize_mask(const std::string& doc_id,
                           const AlignmentMap& mapping,
                           const TokenWeights& weights) {
  if (weights.size() != mapping.size()) {
    fail(ErrorCode::kLengthMismatch,
         "doc '" + doc_id + "': " + std::to_string(weights.size()) +
             " weights for " + std::to_string(mapping.size()) + " entries");
  }
  json map = json::array();
  for (const AlignmentEntry& e : mapping.entries) {
    if (e.mapped) {
      map.push_back(json::array({e.j, e.k}));
    } else {
      map.push_back(nullptr);
    }
  }
  json w = json::array();
  for (uint8_t v : weights.w) w.push_back(static_cast<int>(v));
  json doc = {{"doc_id", doc_id}, {"mapping", std::move(map)}, {"weights", std::move(w)}};
  return doc.dump();
}

MaskWriter::MaskWriter(const std::string& path)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
}

void MaskWriter::write(const std::string& doc_id, const AlignmentMap& mapping,
                       const TokenWeights& weights) {
  out_ << serialize_mask(doc_id, mapping, weights) << '\n';
  if (!out_) fail(ErrorCode::kIo, "write failure on '" + path_ + "'");
}

void MaskWriter::close() {
  out_.flush();
  if (!out_) fail(ErrorCode::kIo, "write failure on '" + path_ + "'");
  out_.close();
}

void write_masks(const std::string& path, std::span<const MaskRecord> records) {
  MaskWriter writer(path);
  for (const MaskRecord& r : records) writer.write(r.doc_id, r.mapping, r.weights);
  writer.close();
}

ParsedMask parse_mask(const std::string& line, size_t line_number) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error& e) {
    malformed(line_number, e.what());
  }
  if (!doc.is_object()) malformed(line_number, "mask record must be a JSON object");
  ParsedMask mask;
  auto id_it = doc.find("doc_id");
  if (id_it == doc.end() || !id_it->is_string()) malformed(line_number, "'doc_id' must be a string");
  mask.doc_id = id_it->get<std::string>();
  auto map_it = doc.find("mapping");
  if (map_it == doc.end() || !map_it->is_array()) malformed(line_number, "'mapping' must be an array");
  for (const json& e : *map_it) {
    if (e.is_null()) {
      mask.mapping.emplace_back(std::nullopt);
    } else if (e.is_array() && e.size() == 2 && e[0].is_number_integer() &&
               e[1].is_number_integer()) {
      mask.mapping.emplace_back(std::make_pair(e[0].get<int64_t>(), e[1].get<int64_t>()));
    } else {
      malformed(line_number, "mapping entry must be [j,k] or null");
    }
  }
  auto w_it = doc.find("weights");
  if (w_it == doc.end() || !w_it->is_array()) malformed(line_number, "'weights' must be an array");
  for (const json& v : *w_it) {
    if (!v.is_number_integer() || (v.get<int>() != 0 && v.get<int>() != 1)) {
      malformed(line_number, "weights must be 0 or 1");
    }
    mask.weights.push_back(static_cast<uint8_t>(v.get<int>()));
  }
  if (mask.weights.size() != mask.mapping.size()) {
    fail(ErrorCode::kLengthMismatch, "line " + std::to_string(line_number) +
                                         ": weights and mapping lengths differ");
  }
  return mask;
}

std::vector<ParsedMask> read_masks(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "'");
  std::vector<ParsedMask> masks;
  std::string line;
  size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    masks.push_back(parse_mask(line, n));
  }
  return masks;
}

}  // namespace vocagno
