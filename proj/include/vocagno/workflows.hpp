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

#ifndef VOCAGNO_WORKFLOWS_HPP_
#define VOCAGNO_WORKFLOWS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vocagno/guidance.hpp"
#include "vocagno/tinylm.hpp"
#include "vocagno/toy_tokenizers.hpp"

namespace vocagno {

// Batch workflows over files. Each one streams its input, maps documents in
// parallel over at most `jobs` workers and writes results in input order, so
// outputs do not depend on the worker count.

// Plain text, one document per line; blank lines are skipped and document
// ids are "doc-<n>" in order of appearance.
std::vector<std::string> read_text_documents(const std::string& path);

// target_size 0 asks greedy_merge for the character count plus 24.
void train_vocab_file(VocabKind kind, const std::string& text_in, size_t target_size,
                      uint64_t seed, const std::string& out);

void tokenize_file(const ToyVocab& student, const ToyVocab& teacher,
                   const std::string& text_in, const std::string& out);

// Attaches per-token losses from the given models to every record.
void score_file(const std::string& corpus_in, const std::string& out,
                const TinyLMParams* student_model, const TinyLMParams* teacher_model);

// Writes the mask schema with all-ones weights.
void align_file(const std::string& corpus_in, const std::string& out, size_t jobs);

struct SelectOptions {
  GuidanceConfig guidance;
  // Documents per kPerBatch scope, in file order.
  size_t batch_docs = 8;
  // Optional mask file from align_file whose mappings are reused.
  std::string mapping_in;
  size_t jobs = 1;
};

struct SelectSummary {
  size_t documents = 0;
  size_t tokens = 0;
  size_t selected = 0;
};

SelectSummary select_file(const std::string& corpus_in, const std::string& out,
                          const SelectOptions& options);

// CSV rows doc_id,num_chunks,mean_iou,mean_ios for every chunk count plus a
// "tokenlevel" row per document.
void metrics_file(const std::string& corpus_in, const std::vector<size_t>& chunks,
                  const std::string& out_csv, size_t jobs);

struct TrainToyOptions {
  std::string text_in;
  std::string student_vocab;  // empty: char vocabulary of the text
  std::string teacher_vocab;  // empty: greedy-merge (char count + extra), or the student's for KLD
  size_t teacher_merge_extra = 24;
  std::string teacher_model;  // empty: train a teacher first
  Objective objective;
  TrainConfig train;
  size_t teacher_steps = 300;
  double teacher_lr = 0.5;
  TinyLMDims dims;            // vocab_size is derived from the vocabulary
  uint64_t seed = 0;
  std::string history_out;
  std::string save_student;
  std::string save_teacher;
};

struct TrainToySummary {
  size_t steps = 0;
  double initial_objective = 0.0;
  double final_objective = 0.0;
  double final_mean_nll = 0.0;
};

TrainToySummary train_toy(const TrainToyOptions& options);

// Renders a metrics CSV as a text table of corpus means and an SVG chart of
// mean IoU / IoS against the number of chunks.
void render_report(const std::string& metrics_csv, const std::string& svg_out,
                   const std::string& table_out);

}  // namespace vocagno

#endif  // VOCAGNO_WORKFLOWS_HPP_
