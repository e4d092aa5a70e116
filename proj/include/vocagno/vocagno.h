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

/* C interface to the vocagno library.
 *
 * Every fallible call returns a vocagno_status; on failure the message is
 * available from vocagno_last_error() on the calling thread until the next
 * failing call. Handles are opaque and owned by the caller once returned;
 * release them with the matching *_free function. Offsets count Unicode
 * scalar values and spans are half-open [st, ed).
 */
#ifndef VOCAGNO_H_
#define VOCAGNO_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(VOCAGNO_BUILDING_DLL)
#define VOCAGNO_API __declspec(dllexport)
#else
#define VOCAGNO_API __declspec(dllimport)
#endif
#else
#define VOCAGNO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vocagno_status {
  VOCAGNO_OK = 0,
  VOCAGNO_ERR_INVALID_ARGUMENT = 1,
  VOCAGNO_ERR_MALFORMED_LINE = 2,
  VOCAGNO_ERR_OFFSET_VIOLATION = 3,
  VOCAGNO_ERR_LOSS_LENGTH_MISMATCH = 4,
  VOCAGNO_ERR_LENGTH_MISMATCH = 5,
  VOCAGNO_ERR_DOC_MISMATCH = 6,
  VOCAGNO_ERR_INDEX_OUT_OF_RANGE = 7,
  VOCAGNO_ERR_EMPTY_SCOPE = 8,
  VOCAGNO_ERR_NO_SELECTED_TOKENS = 9,
  VOCAGNO_ERR_EMPTY_CORPUS = 10,
  VOCAGNO_ERR_EMPTY_VOCAB = 11,
  VOCAGNO_ERR_ID_OUT_OF_RANGE = 12,
  VOCAGNO_ERR_VOCAB_MISMATCH = 13,
  VOCAGNO_ERR_IO = 14,
  VOCAGNO_ERR_INTERNAL = 15
} vocagno_status;

VOCAGNO_API const char* vocagno_version(void);
VOCAGNO_API const char* vocagno_status_name(vocagno_status status);
VOCAGNO_API const char* vocagno_last_error(void);
/* Process exit code for a status: 0 ok, 2 internal error, 1 otherwise. */
VOCAGNO_API int vocagno_exit_code(vocagno_status status);

/* ---- vocabularies ---------------------------------------------------- */

typedef struct vocagno_vocab vocagno_vocab;

typedef enum vocagno_vocab_kind {
  VOCAGNO_VOCAB_CHAR = 0,
  VOCAGNO_VOCAB_WHITESPACE = 1,
  VOCAGNO_VOCAB_GREEDY_MERGE = 2
} vocagno_vocab_kind;

/* target_size and seed are only used by VOCAGNO_VOCAB_GREEDY_MERGE. */
VOCAGNO_API vocagno_status vocagno_vocab_train(vocagno_vocab_kind kind,
                                               const char* const* texts, size_t n_texts,
                                               size_t target_size, uint64_t seed,
                                               vocagno_vocab** out);
VOCAGNO_API vocagno_status vocagno_vocab_train_file(vocagno_vocab_kind kind,
                                                    const char* text_in, size_t target_size,
                                                    uint64_t seed, const char* out_path);
VOCAGNO_API vocagno_status vocagno_vocab_load(const char* path, vocagno_vocab** out);
VOCAGNO_API vocagno_status vocagno_vocab_save(const vocagno_vocab* vocab, const char* path);
VOCAGNO_API size_t vocagno_vocab_size(const vocagno_vocab* vocab);
VOCAGNO_API vocagno_vocab_kind vocagno_vocab_get_kind(const vocagno_vocab* vocab);
/* Intersection over union of the token strings, or over the smaller
 * vocabulary when use_min_denominator is non-zero. */
VOCAGNO_API vocagno_status vocagno_vocab_overlap(const vocagno_vocab* a, const vocagno_vocab* b,
                                                 int use_min_denominator, double* out);
VOCAGNO_API void vocagno_vocab_free(vocagno_vocab* vocab);

/* ---- offset-level alignment ------------------------------------------ */

typedef struct vocagno_span {
  int64_t st;
  int64_t ed;
  int32_t zero_width;
} vocagno_span;

typedef struct vocagno_alignment vocagno_alignment;

/* Validates both span lists, then aligns them. A negative text_len means
 * "the largest end offset of either list". */
VOCAGNO_API vocagno_status vocagno_align_offsets(const vocagno_span* student, size_t n_student,
                                                 const vocagno_span* teacher, size_t n_teacher,
                                                 int64_t text_len, vocagno_alignment** out);
/* Builds an alignment from 2*n integers (j, k) per entry; (-1, -1) is
 * Unmapped. Coverage flags are reported as 0. */
VOCAGNO_API vocagno_status vocagno_alignment_from_ranges(const int64_t* ranges, size_t n,
                                                         vocagno_alignment** out);
VOCAGNO_API size_t vocagno_alignment_size(const vocagno_alignment* map);
/* mapped/full_coverage receive 0 or 1; j and k are -1 when Unmapped. */
VOCAGNO_API vocagno_status vocagno_alignment_entry(const vocagno_alignment* map, size_t i,
                                                   int* mapped, int64_t* j, int64_t* k,
                                                   int* full_coverage);
/* Writes 2*size integers as in vocagno_alignment_from_ranges. */
VOCAGNO_API vocagno_status vocagno_alignment_export(const vocagno_alignment* map,
                                                    int64_t* ranges_out);
/* JSON text of the mapping field of the mask format, e.g. [[0,1],null].
 * Writes at most `capacity` bytes including the terminator and stores the
 * full length (without terminator) in *needed. */
VOCAGNO_API vocagno_status vocagno_alignment_mapping_json(const vocagno_alignment* map,
                                                          char* buffer, size_t capacity,
                                                          size_t* needed);
VOCAGNO_API void vocagno_alignment_free(vocagno_alignment* map);

/* ---- guidance ------------------------------------------------------- */

typedef enum vocagno_phi { VOCAGNO_PHI_MEAN = 0, VOCAGNO_PHI_MAX = 1, VOCAGNO_PHI_SUM = 2 } vocagno_phi;

typedef enum vocagno_unmapped {
  VOCAGNO_UNMAPPED_INCLUDE = 0,
  VOCAGNO_UNMAPPED_EXCLUDE = 1,
  VOCAGNO_UNMAPPED_MEAN_FILL = 2
} vocagno_unmapped;

typedef enum vocagno_scope { VOCAGNO_SCOPE_SEQUENCE = 0, VOCAGNO_SCOPE_BATCH = 1 } vocagno_scope;

typedef enum vocagno_rank_order {
  VOCAGNO_KEEP_LARGEST = 0,
  VOCAGNO_KEEP_SMALLEST = 1
} vocagno_rank_order;

typedef struct vocagno_guidance_config {
  vocagno_phi phi;
  vocagno_unmapped unmapped;
  double keep_ratio;
  vocagno_scope scope;
  vocagno_rank_order order;
} vocagno_guidance_config;

/* max, include, 0.4, sequence scope, keep largest excess loss. */
VOCAGNO_API void vocagno_guidance_config_default(vocagno_guidance_config* config);

/* Token selection for one sequence: aggregates the teacher losses over the
 * mapping, ranks the excess loss and writes n_student weights (0/1). */
VOCAGNO_API vocagno_status vocagno_select(const double* student_losses, size_t n_student,
                                          const double* teacher_losses, size_t n_teacher,
                                          const vocagno_alignment* map,
                                          const vocagno_guidance_config* config,
                                          uint8_t* weights_out);

/* ---- models --------------------------------------------------------- */

typedef struct vocagno_model vocagno_model;

VOCAGNO_API vocagno_status vocagno_model_load(const char* path, vocagno_model** out);
VOCAGNO_API size_t vocagno_model_vocab_size(const vocagno_model* model);
/* Per-token losses of a token id sequence; writes n values. */
VOCAGNO_API vocagno_status vocagno_model_nll(const vocagno_model* model, const int64_t* ids,
                                             size_t n, double* losses_out);
VOCAGNO_API void vocagno_model_free(vocagno_model* model);

/* ---- file workflows ------------------------------------------------- */

VOCAGNO_API vocagno_status vocagno_tokenize_file(const vocagno_vocab* student,
                                                 const vocagno_vocab* teacher,
                                                 const char* text_in, const char* out_path);
/* Either model may be NULL, but not both. */
VOCAGNO_API vocagno_status vocagno_score_file(const char* corpus_in, const char* out_path,
                                              const vocagno_model* student,
                                              const vocagno_model* teacher);
VOCAGNO_API vocagno_status vocagno_align_file(const char* corpus_in, const char* out_path,
                                              size_t jobs);

typedef struct vocagno_select_summary {
  size_t documents;
  size_t tokens;
  size_t selected;
} vocagno_select_summary;

/* mapping_in may be NULL; summary may be NULL. */
VOCAGNO_API vocagno_status vocagno_select_file(const char* corpus_in, const char* out_path,
                                               const vocagno_guidance_config* config,
                                               size_t batch_docs, const char* mapping_in,
                                               size_t jobs, vocagno_select_summary* summary);
VOCAGNO_API vocagno_status vocagno_metrics_file(const char* corpus_in, const size_t* chunks,
                                                size_t n_chunks, const char* out_csv,
                                                size_t jobs);
VOCAGNO_API vocagno_status vocagno_render_report(const char* metrics_csv, const char* svg_out,
                                                 const char* table_out);

/* ---- toy training --------------------------------------------------- */

typedef enum vocagno_objective {
  VOCAGNO_OBJECTIVE_PLAIN = 0,
  VOCAGNO_OBJECTIVE_SELECTIVE = 1,
  VOCAGNO_OBJECTIVE_KLD = 2,
  VOCAGNO_OBJECTIVE_ULD = 3
} vocagno_objective;

typedef enum vocagno_normalize {
  VOCAGNO_NORMALIZE_BY_SELECTED = 0,
  VOCAGNO_NORMALIZE_BY_ALL = 1
} vocagno_normalize;

/* String fields may be NULL or empty for "not set". A negative lambda
 * selects the objective default: 1.0 for KLD, 0.5 for ULD. */
typedef struct vocagno_train_options {
  const char* text_in;
  const char* student_vocab;
  const char* teacher_vocab;
  const char* teacher_model;
  vocagno_objective objective;
  vocagno_guidance_config guidance;
  vocagno_normalize normalize;
  double lambda;
  double lr;
  size_t steps;
  size_t batch_size;
  size_t teacher_steps;
  double teacher_lr;
  size_t teacher_merge_extra;
  size_t embed_dim;
  size_t hidden_dim;
  size_t context;
  uint64_t seed;
  const char* history_out;
  const char* save_student;
  const char* save_teacher;
} vocagno_train_options;

typedef struct vocagno_train_summary {
  size_t steps;
  double initial_objective;
  double final_objective;
  double final_mean_nll;
} vocagno_train_summary;

VOCAGNO_API void vocagno_train_options_default(vocagno_train_options* options);
VOCAGNO_API vocagno_status vocagno_train_toy(const vocagno_train_options* options,
                                             vocagno_train_summary* summary);

#ifdef __cplusplus
}
#endif

#endif /* VOCAGNO_H_ */
