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

#ifndef VOCAGNO_GUIDANCE_HPP_
#define VOCAGNO_GUIDANCE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vocagno/alignment.hpp"
#include "vocagno/corpus_io.hpp"

namespace vocagno {

enum class Phi { kMean, kMax, kSum };
enum class UnmappedStrategy { kInclude, kExclude, kMeanFill };
enum class Scope { kPerSequence, kPerBatch };
// Which end of the excess-loss ranking is kept.
enum class RankOrder { kLargestFirst, kSmallestFirst };
enum class Normalize { kBySelected, kByAll };

struct GuidanceConfig {
  Phi phi = Phi::kMax;
  UnmappedStrategy unmapped = UnmappedStrategy::kInclude;
  double keep_ratio = 0.4;
  Scope scope = Scope::kPerBatch;
  RankOrder order = RankOrder::kLargestFirst;

  // Throws kInvalidArgument unless keep_ratio is in (0, 1].
  void validate() const;
};

std::optional<Phi> parse_phi(std::string_view name);
std::optional<UnmappedStrategy> parse_unmapped(std::string_view name);
std::optional<Scope> parse_scope(std::string_view name);
std::optional<RankOrder> parse_rank_order(std::string_view name);
std::string_view to_string(Phi phi);
std::string_view to_string(UnmappedStrategy strategy);
std::string_view to_string(Scope scope);
std::string_view to_string(RankOrder order);

using MaybeLoss = std::optional<double>;

struct TokenWeights {
  std::vector<uint8_t> w;
  size_t selected_count = 0;

  size_t size() const { return w.size(); }
  friend bool operator==(const TokenWeights&, const TokenWeights&) = default;
};

// Aggregated teacher loss per student token; nullopt for Unmapped tokens.
// Throws kIndexOutOfRange when the map points past the loss vector.
std::vector<MaybeLoss> aggregate_teacher_loss(const AlignmentMap& map,
                                              std::span<const double> teacher_losses,
                                              Phi phi);

// delta[i] = student[i] - teacher_agg[i]; absent entries stay absent.
std::vector<MaybeLoss> excess_loss(std::span<const double> student_losses,
                                   std::span<const MaybeLoss> teacher_agg);

// Inputs of one sequence to token selection. A token is Unmapped exactly
// when its teacher_agg entry is absent.
struct GuidedSequence {
  std::vector<double> student_losses;
  std::vector<MaybeLoss> teacher_agg;
};

GuidedSequence make_guided(const AlignmentMap& map,
                           std::span<const double> student_losses,
                           std::span<const double> teacher_losses, Phi phi);

// Number of tokens kept out of `competing` at the given ratio: the ceiling of
// keep_ratio * competing, guarded against floating-point overshoot.
size_t keep_count(double keep_ratio, size_t competing);

// Binary token weights per sequence. Under kPerBatch all sequences compete in
// one ranking; under kPerSequence each ranks alone. Ties in the excess loss
// go to the earlier (sequence, token) position.
// Throws kEmptyScope when a scope has no competing tokens and the strategy is
// not kInclude.
std::vector<TokenWeights> select_tokens(std::span<const GuidedSequence> batch,
                                        const GuidanceConfig& config);

// Selective loss: sum of w_i * L_i divided by the selected count or by N.
double reweighted_loss(std::span<const double> student_losses,
                       const TokenWeights& weights, Normalize normalize);

}  // namespace vocagno

#endif  // VOCAGNO_GUIDANCE_HPP_
