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

#include "vocagno/vocagno.h"

#include <cstring>
#include <new>
#include <string>

#include <nlohmann/json.hpp>

#include "vocagno/alignment.hpp"
#include "vocagno/corpus_io.hpp"
#include "vocagno/error.hpp"
#include "vocagno/guidance.hpp"
#include "vocagno/tinylm.hpp"
#include "vocagno/toy_tokenizers.hpp"
#include "vocagno/workflows.hpp"

struct vocagno_vocab {
  vocagno::ToyVocab vocab;
};

struct vocagno_alignment {
  vocagno::AlignmentMap map;
};

struct vocagno_model {
  vocagno::TinyLMParams params;
};

namespace {

thread_local std::string g_last_error;

vocagno_status to_status(vocagno::ErrorCode code) {
  using vocagno::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return VOCAGNO_ERR_INVALID_ARGUMENT;
    case ErrorCode::kMalformedLine: return VOCAGNO_ERR_MALFORMED_LINE;
    case ErrorCode::kOffsetViolation: return VOCAGNO_ERR_OFFSET_VIOLATION;
    case ErrorCode::kLossLengthMismatch: return VOCAGNO_ERR_LOSS_LENGTH_MISMATCH;
    case ErrorCode::kLengthMismatch: return VOCAGNO_ERR_LENGTH_MISMATCH;
    case ErrorCode::kDocMismatch: return VOCAGNO_ERR_DOC_MISMATCH;
    case ErrorCode::kIndexOutOfRange: return VOCAGNO_ERR_INDEX_OUT_OF_RANGE;
    case ErrorCode::kEmptyScope: return VOCAGNO_ERR_EMPTY_SCOPE;
    case ErrorCode::kNoSelectedTokens: return VOCAGNO_ERR_NO_SELECTED_TOKENS;
    case ErrorCode::kEmptyCorpus: return VOCAGNO_ERR_EMPTY_CORPUS;
    case ErrorCode::kEmptyVocab: return VOCAGNO_ERR_EMPTY_VOCAB;
    case ErrorCode::kIdOutOfRange: return VOCAGNO_ERR_ID_OUT_OF_RANGE;
    case ErrorCode::kVocabMismatch: return VOCAGNO_ERR_VOCAB_MISMATCH;
    case ErrorCode::kIo: return VOCAGNO_ERR_IO;
    case ErrorCode::kInternal: return VOCAGNO_ERR_INTERNAL;
  }
  return VOCAGNO_ERR_INTERNAL;
}

vocagno_status set_error(vocagno_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs fn, translating exceptions into a status and the thread's last error.
template <typename F>
vocagno_status guarded(F&& fn) {
  try {
    fn();
    return VOCAGNO_OK;
  } catch (const vocagno::Error& e) {
    return set_error(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(VOCAGNO_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(VOCAGNO_ERR_INTERNAL, std::string("Internal: ") + e.what());
  } catch (...) {
    return set_error(VOCAGNO_ERR_INTERNAL, "Internal: unknown exception");
  }
}

#define VOCAGNO_REQUIRE(cond, what)                                          \
  do {                                                                       \
    if (!(cond)) return set_error(VOCAGNO_ERR_INVALID_ARGUMENT,              \
                                  std::string("InvalidArgument: ") + (what)); \
  } while (0)

std::string opt_str(const char* s) { return s ? std::string(s) : std::string(); }

vocagno::GuidanceConfig to_config(const vocagno_guidance_config& c) {
  vocagno::GuidanceConfig g;
  switch (c.phi) {
    case VOCAGNO_PHI_MEAN: g.phi = vocagno::Phi::kMean; break;
    case VOCAGNO_PHI_MAX: g.phi = vocagno::Phi::kMax; break;
    case VOCAGNO_PHI_SUM: g.phi = vocagno::Phi::kSum; break;
    default: vocagno::fail(vocagno::ErrorCode::kInvalidArgument, "unknown phi");
  }
  switch (c.unmapped) {
    case VOCAGNO_UNMAPPED_INCLUDE: g.unmapped = vocagno::UnmappedStrategy::kInclude; break;
    case VOCAGNO_UNMAPPED_EXCLUDE: g.unmapped = vocagno::UnmappedStrategy::kExclude; break;
    case VOCAGNO_UNMAPPED_MEAN_FILL: g.unmapped = vocagno::UnmappedStrategy::kMeanFill; break;
    default: vocagno::fail(vocagno::ErrorCode::kInvalidArgument, "unknown unmapped strategy");
  }
  switch (c.scope) {
    case VOCAGNO_SCOPE_SEQUENCE: g.scope = vocagno::Scope::kPerSequence; break;
    case VOCAGNO_SCOPE_BATCH: g.scope = vocagno::Scope::kPerBatch; break;
    default: vocagno::fail(vocagno::ErrorCode::kInvalidArgument, "unknown scope");
  }
  switch (c.order) {
    case VOCAGNO_KEEP_LARGEST: g.order = vocagno::RankOrder::kLargestFirst; break;
    case VOCAGNO_KEEP_SMALLEST: g.order = vocagno::RankOrder::kSmallestFirst; break;
    default: vocagno::fail(vocagno::ErrorCode::kInvalidArgument, "unknown rank order");
  }
  g.keep_ratio = c.keep_ratio;
  g.validate();
  return g;
}

vocagno::VocabKind to_kind(vocagno_vocab_kind kind) {
  switch (kind) {
    case VOCAGNO_VOCAB_CHAR: return vocagno::VocabKind::kChar;
    case VOCAGNO_VOCAB_WHITESPACE: return vocagno::VocabKind::kWhitespace;
    case VOCAGNO_VOCAB_GREEDY_MERGE: return vocagno::VocabKind::kGreedyMerge;
  }
  vocagno::fail(vocagno::ErrorCode::kInvalidArgument, "unknown vocabulary kind");
}

vocagno::TokenizedSequence to_sequence(const vocagno_span* spans, size_t n, int64_t text_len,
                                       vocagno::Role role) {
  vocagno::TokenizedSequence seq;
  seq.role = role;
  seq.text_len = text_len;
  seq.tokens.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    seq.tokens.push_back({0, spans[i].st, spans[i].ed, spans[i].zero_width != 0});
  }
  if (auto v = vocagno::validate_sequence(seq)) {
    vocagno::fail(vocagno::ErrorCode::kOffsetViolation,
                  std::string(role == vocagno::Role::kStudent ? "student" : "teacher") +
                      " span " + std::to_string(v->token_index) + ": " +
                      std::string(vocagno::violation_name(v->kind)) + " " + v->detail);
  }
  return seq;
}

}  // namespace

extern "C" {

const char* vocagno_version(void) { return VOCAGNO_VERSION; }

const char* vocagno_status_name(vocagno_status status) {
  switch (status) {
    case VOCAGNO_OK: return "Ok";
    case VOCAGNO_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case VOCAGNO_ERR_MALFORMED_LINE: return "MalformedLine";
    case VOCAGNO_ERR_OFFSET_VIOLATION: return "OffsetViolation";
    case VOCAGNO_ERR_LOSS_LENGTH_MISMATCH: return "LossLengthMismatch";
    case VOCAGNO_ERR_LENGTH_MISMATCH: return "LengthMismatch";
    case VOCAGNO_ERR_DOC_MISMATCH: return "DocMismatch";
    case VOCAGNO_ERR_INDEX_OUT_OF_RANGE: return "IndexOutOfRange";
    case VOCAGNO_ERR_EMPTY_SCOPE: return "EmptyScope";
    case VOCAGNO_ERR_NO_SELECTED_TOKENS: return "NoSelectedTokens";
    case VOCAGNO_ERR_EMPTY_CORPUS: return "EmptyCorpus";
    case VOCAGNO_ERR_EMPTY_VOCAB: return "EmptyVocab";
    case VOCAGNO_ERR_ID_OUT_OF_RANGE: return "IdOutOfRange";
    case VOCAGNO_ERR_VOCAB_MISMATCH: return "VocabMismatch";
    case VOCAGNO_ERR_IO: return "Io";
    case VOCAGNO_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

const char* vocagno_last_error(void) { return g_last_error.c_str(); }

int vocagno_exit_code(vocagno_status status) {
  if (status == VOCAGNO_OK) return 0;
  return status == VOCAGNO_ERR_INTERNAL ? 2 : 1;
}

vocagno_status vocagno_vocab_train(vocagno_vocab_kind kind, const char* const* texts,
                                   size_t n_texts, size_t target_size, uint64_t seed,
                                   vocagno_vocab** out) {
  VOCAGNO_REQUIRE(out != nullptr, "out is NULL");
  VOCAGNO_REQUIRE(texts != nullptr || n_texts == 0, "texts is NULL");
  return guarded([&] {
    std::vector<std::string> docs;
    docs.reserve(n_texts);
    for (size_t i = 0; i < n_texts; ++i) docs.emplace_back(texts[i] ? texts[i] : "");
    const auto k = to_kind(kind);
    auto vocab = k == vocagno::VocabKind::kChar         ? vocagno::train_char(docs)
                 : k == vocagno::VocabKind::kWhitespace ? vocagno::train_whitespace(docs)
                                                        : vocagno::train_greedy_merge(docs, target_size, seed);
    *out = new vocagno_vocab{std::move(vocab)};
  });
}

vocagno_status vocagno_vocab_train_file(vocagno_vocab_kind kind, const char* text_in,
                                        size_t target_size, uint64_t seed, const char* out_path) {
  VOCAGNO_REQUIRE(text_in && out_path, "path is NULL");
  return guarded([&] { vocagno::train_vocab_file(to_kind(kind), text_in, target_size, seed, out_path); });
}

vocagno_status vocagno_vocab_load(const char* path, vocagno_vocab** out) {
  VOCAGNO_REQUIRE(path && out, "argument is NULL");
  return guarded([&] { *out = new vocagno_vocab{vocagno::load_vocab(path)}; });
}

vocagno_status vocagno_vocab_save(const vocagno_vocab* vocab, const char* path) {
  VOCAGNO_REQUIRE(vocab && path, "argument is NULL");
  return guarded([&] { vocagno::save_vocab(vocab->vocab, path); });
}

size_t vocagno_vocab_size(const vocagno_vocab* vocab) { return vocab ? vocab->vocab.size() : 0; }

vocagno_vocab_kind vocagno_vocab_get_kind(const vocagno_vocab* vocab) {
  switch (vocab->vocab.kind()) {
    case vocagno::VocabKind::kChar: return VOCAGNO_VOCAB_CHAR;
    case vocagno::VocabKind::kWhitespace: return VOCAGNO_VOCAB_WHITESPACE;
    case vocagno::VocabKind::kGreedyMerge: return VOCAGNO_VOCAB_GREEDY_MERGE;
  }
  return VOCAGNO_VOCAB_CHAR;
}

vocagno_status vocagno_vocab_overlap(const vocagno_vocab* a, const vocagno_vocab* b,
                                     int use_min_denominator, double* out) {
  VOCAGNO_REQUIRE(a && b && out, "argument is NULL");
  return guarded([&] {
    *out = vocagno::vocab_overlap(a->vocab, b->vocab,
                                  use_min_denominator ? vocagno::OverlapDenominator::kMin
                                                      : vocagno::OverlapDenominator::kUnion);
  });
}

void vocagno_vocab_free(vocagno_vocab* vocab) { delete vocab; }

vocagno_status vocagno_align_offsets(const vocagno_span* student, size_t n_student,
                                     const vocagno_span* teacher, size_t n_teacher,
                                     int64_t text_len, vocagno_alignment** out) {
  VOCAGNO_REQUIRE(out != nullptr, "out is NULL");
  VOCAGNO_REQUIRE(student || n_student == 0, "student spans are NULL");
  VOCAGNO_REQUIRE(teacher || n_teacher == 0, "teacher spans are NULL");
  return guarded([&] {
    int64_t len = text_len;
    if (len < 0) {
      len = 0;
      for (size_t i = 0; i < n_student; ++i) len = std::max(len, student[i].ed);
      for (size_t i = 0; i < n_teacher; ++i) len = std::max(len, teacher[i].ed);
    }
    const auto s = to_sequence(student, n_student, len, vocagno::Role::kStudent);
    const auto t = to_sequence(teacher, n_teacher, len, vocagno::Role::kTeacher);
    *out = new vocagno_alignment{vocagno::align(s, t)};
  });
}

vocagno_status vocagno_alignment_from_ranges(const int64_t* ranges, size_t n,
                                             vocagno_alignment** out) {
  VOCAGNO_REQUIRE(out != nullptr, "out is NULL");
  VOCAGNO_REQUIRE(ranges || n == 0, "ranges is NULL");
  return guarded([&] {
    vocagno::AlignmentMap map;
    map.entries.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      const int64_t j = ranges[2 * i];
      const int64_t k = ranges[2 * i + 1];
      if (j == -1 && k == -1) {
        map.entries.push_back(vocagno::AlignmentEntry::unmapped());
      } else if (j >= 0 && k >= j) {
        map.entries.push_back(vocagno::AlignmentEntry::range(j, k, false));
      } else {
        vocagno::fail(vocagno::ErrorCode::kInvalidArgument,
                      "range " + std::to_string(i) + " is neither (-1,-1) nor 0 <= j <= k");
      }
    }
    *out = new vocagno_alignment{std::move(map)};
  });
}

size_t vocagno_alignment_size(const vocagno_alignment* map) { return map ? map->map.size() : 0; }

vocagno_status vocagno_alignment_entry(const vocagno_alignment* map, size_t i, int* mapped,
                                       int64_t* j, int64_t* k, int* full_coverage) {
  VOCAGNO_REQUIRE(map != nullptr, "map is NULL");
  if (i >= map->map.size()) {
    return set_error(VOCAGNO_ERR_INDEX_OUT_OF_RANGE, "IndexOutOfRange: entry " + std::to_string(i));
  }
  const auto& e = map->map[i];
  if (mapped) *mapped = e.mapped ? 1 : 0;
  if (j) *j = e.mapped ? e.j : -1;
  if (k) *k = e.mapped ? e.k : -1;
  if (full_coverage) *full_coverage = e.full_coverage ? 1 : 0;
  return VOCAGNO_OK;
}

vocagno_status vocagno_alignment_export(const vocagno_alignment* map, int64_t* ranges_out) {
  VOCAGNO_REQUIRE(map != nullptr, "map is NULL");
  VOCAGNO_REQUIRE(ranges_out || map->map.size() == 0, "ranges_out is NULL");
  for (size_t i = 0; i < map->map.size(); ++i) {
    const auto& e = map->map[i];
    ranges_out[2 * i] = e.mapped ? e.j : -1;
    ranges_out[2 * i + 1] = e.mapped ? e.k : -1;
  }
  return VOCAGNO_OK;
}

vocagno_status vocagno_alignment_mapping_json(const vocagno_alignment* map, char* buffer,
                                              size_t capacity, size_t* needed) {
  VOCAGNO_REQUIRE(map != nullptr, "map is NULL");
  return guarded([&] {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : map->map.entries) {
      if (e.mapped) {
        arr.push_back(nlohmann::json::array({e.j, e.k}));
      } else {
        arr.push_back(nullptr);
      }
    }
    const std::string text = arr.dump();
    if (needed) *needed = text.size();
    if (buffer && capacity > 0) {
      const size_t n = std::min(capacity - 1, text.size());
      std::memcpy(buffer, text.data(), n);
      buffer[n] = '\0';
    }
  });
}

void vocagno_alignment_free(vocagno_alignment* map) { delete map; }

void vocagno_guidance_config_default(vocagno_guidance_config* config) {
  if (!config) return;
  config->phi = VOCAGNO_PHI_MAX;
  config->unmapped = VOCAGNO_UNMAPPED_INCLUDE;
  config->keep_ratio = 0.4;
  config->scope = VOCAGNO_SCOPE_SEQUENCE;
  config->order = VOCAGNO_KEEP_LARGEST;
}

vocagno_status vocagno_select(const double* student_losses, size_t n_student,
                              const double* teacher_losses, size_t n_teacher,
                              const vocagno_alignment* map, const vocagno_guidance_config* config,
                              uint8_t* weights_out) {
  VOCAGNO_REQUIRE(map && config, "argument is NULL");
  VOCAGNO_REQUIRE(student_losses || n_student == 0, "student_losses is NULL");
  VOCAGNO_REQUIRE(teacher_losses || n_teacher == 0, "teacher_losses is NULL");
  VOCAGNO_REQUIRE(weights_out || n_student == 0, "weights_out is NULL");
  return guarded([&] {
    const vocagno::GuidanceConfig g = to_config(*config);
    std::vector<vocagno::GuidedSequence> batch = {vocagno::make_guided(
        map->map, std::span<const double>(student_losses, n_student),
        std::span<const double>(teacher_losses, n_teacher), g.phi)};
    const auto weights = vocagno::select_tokens(batch, g);
    std::copy(weights[0].w.begin(), weights[0].w.end(), weights_out);
  });
}

vocagno_status vocagno_model_load(const char* path, vocagno_model** out) {
  VOCAGNO_REQUIRE(path && out, "argument is NULL");
  return guarded([&] { *out = new vocagno_model{vocagno::load_params(path)}; });
}

size_t vocagno_model_vocab_size(const vocagno_model* model) {
  return model ? model->params.dims.vocab_size : 0;
}

vocagno_status vocagno_model_nll(const vocagno_model* model, const int64_t* ids, size_t n,
                                 double* losses_out) {
  VOCAGNO_REQUIRE(model != nullptr, "model is NULL");
  VOCAGNO_REQUIRE((ids && losses_out) || n == 0, "buffer is NULL");
  return guarded([&] {
    const auto r = vocagno::forward_nll(model->params, std::span<const int64_t>(ids, n));
    std::copy(r.losses.begin(), r.losses.end(), losses_out);
  });
}

void vocagno_model_free(vocagno_model* model) { delete model; }

vocagno_status vocagno_tokenize_file(const vocagno_vocab* student, const vocagno_vocab* teacher,
                                     const char* text_in, const char* out_path) {
  VOCAGNO_REQUIRE(student && teacher && text_in && out_path, "argument is NULL");
  return guarded([&] { vocagno::tokenize_file(student->vocab, teacher->vocab, text_in, out_path); });
}

vocagno_status vocagno_score_file(const char* corpus_in, const char* out_path,
                                  const vocagno_model* student, const vocagno_model* teacher) {
  VOCAGNO_REQUIRE(corpus_in && out_path, "path is NULL");
  return guarded([&] {
    vocagno::score_file(corpus_in, out_path, student ? &student->params : nullptr,
                        teacher ? &teacher->params : nullptr);
  });
}

vocagno_status vocagno_align_file(const char* corpus_in, const char* out_path, size_t jobs) {
  VOCAGNO_REQUIRE(corpus_in && out_path, "path is NULL");
  return guarded([&] { vocagno::align_file(corpus_in, out_path, jobs); });
}

vocagno_status vocagno_select_file(const char* corpus_in, const char* out_path,
                                   const vocagno_guidance_config* config, size_t batch_docs,
                                   const char* mapping_in, size_t jobs,
                                   vocagno_select_summary* summary) {
  VOCAGNO_REQUIRE(corpus_in && out_path && config, "argument is NULL");
  return guarded([&] {
    vocagno::SelectOptions options;
    options.guidance = to_config(*config);
    options.batch_docs = batch_docs;
    options.mapping_in = opt_str(mapping_in);
    options.jobs = jobs;
    const auto s = vocagno::select_file(corpus_in, out_path, options);
    if (summary) *summary = {s.documents, s.tokens, s.selected};
  });
}

vocagno_status vocagno_metrics_file(const char* corpus_in, const size_t* chunks, size_t n_chunks,
                                    const char* out_csv, size_t jobs) {
  VOCAGNO_REQUIRE(corpus_in && out_csv, "path is NULL");
  VOCAGNO_REQUIRE(chunks || n_chunks == 0, "chunks is NULL");
  return guarded([&] {
    vocagno::metrics_file(corpus_in, std::vector<size_t>(chunks, chunks + n_chunks), out_csv, jobs);
  });
}

vocagno_status vocagno_render_report(const char* metrics_csv, const char* svg_out,
                                     const char* table_out) {
  VOCAGNO_REQUIRE(metrics_csv && svg_out && table_out, "path is NULL");
  return guarded([&] { vocagno::render_report(metrics_csv, svg_out, table_out); });
}

void vocagno_train_options_default(vocagno_train_options* o) {
  if (!o) return;
  *o = vocagno_train_options{};
  o->objective = VOCAGNO_OBJECTIVE_PLAIN;
  vocagno_guidance_config_default(&o->guidance);
  o->guidance.scope = VOCAGNO_SCOPE_BATCH;
  o->normalize = VOCAGNO_NORMALIZE_BY_SELECTED;
  o->lambda = -1.0;
  o->lr = 0.5;
  o->steps = 200;
  o->batch_size = 0;
  o->teacher_steps = 300;
  o->teacher_lr = 0.5;
  o->teacher_merge_extra = 24;
  o->embed_dim = 8;
  o->hidden_dim = 32;
  o->context = 3;
  o->seed = 0;
}

vocagno_status vocagno_train_toy(const vocagno_train_options* o, vocagno_train_summary* summary) {
  VOCAGNO_REQUIRE(o != nullptr, "options is NULL");
  VOCAGNO_REQUIRE(o->text_in != nullptr, "text_in is NULL");
  return guarded([&] {
    vocagno::TrainToyOptions t;
    t.text_in = o->text_in;
    t.student_vocab = opt_str(o->student_vocab);
    t.teacher_vocab = opt_str(o->teacher_vocab);
    t.teacher_model = opt_str(o->teacher_model);
    t.teacher_merge_extra = o->teacher_merge_extra;
    switch (o->objective) {
      case VOCAGNO_OBJECTIVE_PLAIN: t.objective.kind = vocagno::ObjectiveKind::kPlain; break;
      case VOCAGNO_OBJECTIVE_SELECTIVE: t.objective.kind = vocagno::ObjectiveKind::kSelective; break;
      case VOCAGNO_OBJECTIVE_KLD: t.objective.kind = vocagno::ObjectiveKind::kKld; break;
      case VOCAGNO_OBJECTIVE_ULD: t.objective.kind = vocagno::ObjectiveKind::kUld; break;
      default: vocagno::fail(vocagno::ErrorCode::kInvalidArgument, "unknown objective");
    }
    t.objective.guidance = to_config(o->guidance);
    t.objective.normalize = o->normalize == VOCAGNO_NORMALIZE_BY_ALL ? vocagno::Normalize::kByAll
                                                                     : vocagno::Normalize::kBySelected;
    t.objective.lambda = o->lambda >= 0.0 ? o->lambda
                         : o->objective == VOCAGNO_OBJECTIVE_KLD ? 1.0
                                                                 : 0.5;
    t.train.lr = o->lr;
    t.train.steps = o->steps;
    t.train.batch_size = o->batch_size;
    t.teacher_steps = o->teacher_steps;
    t.teacher_lr = o->teacher_lr;
    t.dims.embed_dim = o->embed_dim;
    t.dims.hidden_dim = o->hidden_dim;
    t.dims.context = o->context;
    t.seed = o->seed;
    t.history_out = opt_str(o->history_out);
    t.save_student = opt_str(o->save_student);
    t.save_teacher = opt_str(o->save_teacher);
    const auto s = vocagno::train_toy(t);
    if (summary) *summary = {s.steps, s.initial_objective, s.final_objective, s.final_mean_nll};
  });
}

}  // extern "C"
