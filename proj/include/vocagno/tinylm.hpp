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

#ifndef VOCAGNO_TINYLM_HPP_
#define VOCAGNO_TINYLM_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "vocagno/alignment.hpp"
#include "vocagno/corpus_io.hpp"
#include "vocagno/guidance.hpp"
#include "vocagno/toy_tokenizers.hpp"

namespace vocagno {

struct TinyLMDims {
  size_t vocab_size = 0;
  size_t embed_dim = 8;
  size_t hidden_dim = 32;
  size_t context = 3;
};

// Fixed-window causal LM: the embeddings of the previous `context` tokens
// (zero vectors before the start of the sequence) feed one tanh hidden layer
// and a softmax over the vocabulary.
struct TinyLMParams {
  TinyLMDims dims;
  uint64_t rng_seed = 0;
  Eigen::MatrixXd embedding;  // vocab x embed
  Eigen::MatrixXd w_hidden;   // hidden x (context * embed)
  Eigen::VectorXd b_hidden;
  Eigen::MatrixXd w_out;      // vocab x hidden
  Eigen::VectorXd b_out;

  // Uniform(-scale, scale) weights from a portable generator, zero biases.
  static TinyLMParams init(const TinyLMDims& dims, uint64_t seed, double scale = 0.3);
  // Same shapes, every entry zero.
  static TinyLMParams zeros(const TinyLMDims& dims);

  // Flat view over all weights in a fixed order (embedding, w_hidden,
  // b_hidden, w_out, b_out; matrices row-major).
  size_t parameter_count() const;
  double& parameter(size_t index);
  double parameter(size_t index) const;

  void validate() const;
  bool all_finite() const;
};

bool operator==(const TinyLMParams& a, const TinyLMParams& b);

std::string params_to_json(const TinyLMParams& params);
TinyLMParams params_from_json(std::string_view json_text);
void save_params(const TinyLMParams& params, const std::string& path);
TinyLMParams load_params(const std::string& path);

struct ForwardResult {
  LossVector losses;
  // Next-token distribution used at each position.
  std::vector<std::vector<double>> probs;
};

// losses[i] = -log P(ids[i] | previous `context` ids). Throws kIdOutOfRange.
ForwardResult forward_nll(const TinyLMParams& params, std::span<const int64_t> ids);

enum class ObjectiveKind { kPlain, kSelective, kKld, kUld };

std::optional<ObjectiveKind> parse_objective(std::string_view name);
std::string_view to_string(ObjectiveKind kind);

struct Objective {
  ObjectiveKind kind = ObjectiveKind::kPlain;
  GuidanceConfig guidance;
  Normalize normalize = Normalize::kBySelected;
  double lambda = 0.5;
};

// A training document plus whatever teacher signal its objective needs.
struct TrainingDoc {
  std::vector<int64_t> ids;
  // Selective: aggregated teacher loss per student token (absent = Unmapped).
  std::vector<MaybeLoss> teacher_agg;
  // KLD: teacher distribution per student position.
  // ULD: teacher distribution per teacher position.
  std::vector<std::vector<double>> teacher_probs;
  // ULD: student-to-teacher alignment.
  AlignmentMap alignment;
};

struct Evaluation {
  double objective = 0.0;
  double mean_nll = 0.0;
  double distill = 0.0;
  std::vector<TokenWeights> weights;
  TinyLMParams gradient;
};

// Objective value and its exact gradient.
//   Plain / Selective: sum_i w_i * nll_i / (selected count or token count),
//     with w from select_tokens on the current losses (w = 1 for Plain).
//   KLD: mean nll + lambda * mean_i KL(p_i^S || p_i^T).
//   ULD: mean nll + lambda * mean_i avg_{l in map[i]} WD(p_i^S, p_l^T).
// `fixed_weights` freezes the Selective mask. Throws kNoSelectedTokens.
Evaluation evaluate(const TinyLMParams& params, std::span<const TrainingDoc> batch,
                    const Objective& objective,
                    const std::vector<TokenWeights>* fixed_weights = nullptr,
                    bool with_gradient = true);

TinyLMParams grad(const TinyLMParams& params, std::span<const TrainingDoc> batch,
                  const Objective& objective);

struct TrainConfig {
  double lr = 0.5;
  size_t steps = 200;
  // Documents per step, taken cyclically in corpus order; 0 means all.
  size_t batch_size = 0;
  Objective objective;
};

struct TrainStep {
  size_t step = 0;
  double objective = 0.0;
  double mean_nll = 0.0;
  double distill = 0.0;
  double selected_fraction = 1.0;
};

struct TrainResult {
  TinyLMParams params;
  std::vector<TrainStep> history;
};

struct TeacherModel {
  const TinyLMParams& params;
  const ToyVocab& vocab;
};

// Tokenizes the texts under the student vocabulary and attaches the teacher
// signal: Selective runs the teacher on its own tokenization and pipes the
// losses through align + aggregate; KLD requires the same vocabulary and
// throws kVocabMismatch otherwise.
std::vector<TrainingDoc> prepare_docs(const std::vector<std::string>& texts,
                                      const ToyVocab& student_vocab,
                                      const Objective& objective,
                                      const std::optional<TeacherModel>& teacher);

// Plain gradient descent; history[s] is measured before update s.
TrainResult train_prepared(TinyLMParams params, std::span<const TrainingDoc> docs,
                           const TrainConfig& config);

TrainResult train(TinyLMParams params, const std::vector<std::string>& texts,
                  const ToyVocab& student_vocab, const TrainConfig& config,
                  const std::optional<TeacherModel>& teacher = std::nullopt);

}  // namespace vocagno

#endif  // VOCAGNO_TINYLM_HPP_
