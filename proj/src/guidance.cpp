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

#include "vocagno/guidance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vocagno/error.hpp"

namespace vocagno {

void GuidanceConfig::validate() const {
  if (!(keep_ratio > 0.0 && keep_ratio <= 1.0)) {
    fail(ErrorCode::kInvalidArgument,
         "keep_ratio must be in (0, 1], got " + std::to_string(keep_ratio));
  }
}

std::optional<Phi> parse_phi(std::string_view name) {
  if (name == "mean") return Phi::kMean;
  if (name == "max") return Phi::kMax;
  if (name == "sum") return Phi::kSum;
  return std::nullopt;
}

std::optional<UnmappedStrategy> parse_unmapped(std::string_view name) {
  if (name == "include") return UnmappedStrategy::kInclude;
  if (name == "exclude") return UnmappedStrategy::kExclude;
  if (name == "mean" || name == "meanfill") return UnmappedStrategy::kMeanFill;
  return std::nullopt;
}

std::optional<Scope> parse_scope(std::string_view name) {
  if (name == "sequence") return Scope::kPerSequence;
  if (name == "batch") return Scope::kPerBatch;
  return std::nullopt;
}

std::optional<RankOrder> parse_rank_order(std::string_view name) {
  if (name == "largest") return RankOrder::kLargestFirst;
  if (name == "smallest") return RankOrder::kSmallestFirst;
  return std::nullopt;
}

std::string_view to_string(Phi phi) {
  switch (phi) {
    case Phi::kMean: return "mean";
    case Phi::kMax: return "max";
    case Phi::kSum: return "sum";
  }
  return "unknown";
}

std::string_view to_string(UnmappedStrategy strategy) {
  switch (strategy) {
    case UnmappedStrategy::kInclude: return "include";
    case UnmappedStrategy::kExclude: return "exclude";
    case UnmappedStrategy::kMeanFill: return "mean";
  }
  return "unknown";
}

std::string_view to_string(Scope scope) {
  return scope == Scope::kPerSequence ? "sequence" : "batch";
}

std::string_view to_string(RankOrder order) {
  return order == RankOrder::kLargestFirst ? "largest" : "smallest";
}

std::vector<MaybeLoss> aggregate_teacher_loss(const AlignmentMap& map,
                                              std::span<const double> teacher_losses,
                                              Phi phi) {
  std::vector<MaybeLoss> out;
  out.reserve(map.size());
  const auto m = static_cast<int64_t>(teacher_losses.size());
  for (const AlignmentEntry& e : map.entries) {
    if (!e.mapped) {
      out.emplace_back(std::nullopt);
      continue;
    }
    if (e.j < 0 || e.k < e.j || e.k >= m) {
      fail(ErrorCode::kIndexOutOfRange,
           "range [" + std::to_string(e.j) + "," + std::to_string(e.k) +
               "] outside " + std::to_string(m) + " teacher losses");
    }
    const auto first = teacher_losses.begin() + e.j;
    const auto last = teacher_losses.begin() + e.k + 1;
    double v = 0.0;
    switch (phi) {
      case Phi::kMean:
        v = std::accumulate(first, last, 0.0) / static_cast<double>(e.k - e.j + 1);
        break;
      case Phi::kMax:
        v = *std::max_element(first, last);
        break;
      case Phi::kSum:
        v = std::accumulate(first, last, 0.0);
        break;
    }
    out.emplace_back(v);
  }
  return out;
}

std::vector<MaybeLoss> excess_loss(std::span<const double> student_losses,
                                   std::span<const MaybeLoss> teacher_agg) {
  if (student_losses.size() != teacher_agg.size()) {
    fail(ErrorCode::kLengthMismatch,
         std::to_string(student_losses.size()) + " student losses vs " +
             std::to_string(teacher_agg.size()) + " teacher aggregates");
  }
  std::vector<MaybeLoss> delta(student_losses.size());
  for (size_t i = 0; i < delta.size(); ++i) {
    if (teacher_agg[i]) delta[i] = student_losses[i] - *teacher_agg[i];
  }
  return delta;
}

GuidedSequence make_guided(const AlignmentMap& map,
                           std::span<const double> student_losses,
                           std::span<const double> teacher_losses, Phi phi) {
  if (student_losses.size() != map.size()) {
    fail(ErrorCode::kLengthMismatch,
         std::to_string(student_losses.size()) + " student losses for " +
             std::to_string(map.size()) + " alignment entries");
  }
  GuidedSequence g;
  g.student_losses.assign(student_losses.begin(), student_losses.end());
  g.teacher_agg = aggregate_teacher_loss(map, teacher_losses, phi);
  return g;
}

size_t keep_count(double keep_ratio, size_t competing) {
  if (competing == 0) return 0;
  // 0.7 * 10 evaluates to 7.000000000000001; shrink by a relative 1e-12 so
  // exact products do not round up to the next integer.
  const double scaled = keep_ratio * static_cast<double>(competing) * (1.0 - 1e-12);
  const auto k = static_cast<size_t>(std::ceil(scaled));
  return std::min(k, competing);
}

namespace {

struct Candidate {
  double delta;
  size_t seq;
  size_t token;
};

// Ranks the candidates of one scope and writes the weights.
void select_scope(std::span<const GuidedSequence> batch, size_t seq_begin, size_t seq_end,
                  const GuidanceConfig& config, std::vector<TokenWeights>& out) {
  double teacher_sum = 0.0;
  size_t teacher_count = 0;
  if (config.unmapped == UnmappedStrategy::kMeanFill) {
    for (size_t s = seq_begin; s < seq_end; ++s) {
      for (const MaybeLoss& t : batch[s].teacher_agg) {
        if (t) {
          teacher_sum += *t;
          ++teacher_count;
        }
      }
    }
  }

  std::vector<Candidate> candidates;
  for (size_t s = seq_begin; s < seq_end; ++s) {
    const GuidedSequence& g = batch[s];
    TokenWeights& w = out[s];
    w.w.assign(g.student_losses.size(), 0);
    for (size_t i = 0; i < g.student_losses.size(); ++i) {
      if (g.teacher_agg[i]) {
        candidates.push_back({g.student_losses[i] - *g.teacher_agg[i], s, i});
        continue;
      }
      switch (config.unmapped) {
        case UnmappedStrategy::kInclude:
          w.w[i] = 1;
          break;
        case UnmappedStrategy::kExclude:
          break;
        case UnmappedStrategy::kMeanFill:
          if (teacher_count > 0) {
            const double fill = teacher_sum / static_cast<double>(teacher_count);
            candidates.push_back({g.student_losses[i] - fill, s, i});
          }
          break;
      }
    }
  }

  if (candidates.empty() && config.unmapped != UnmappedStrategy::kInclude) {
    fail(ErrorCode::kEmptyScope, "no competing tokens in selection scope starting at sequence " +
                                      std::to_string(seq_begin));
  }

  const size_t k = keep_count(config.keep_ratio, candidates.size());
  const bool largest = config.order == RankOrder::kLargestFirst;
  auto better = [largest](const Candidate& a, const Candidate& b) {
    if (a.delta != b.delta) return largest ? a.delta > b.delta : a.delta < b.delta;
    if (a.seq != b.seq) return a.seq < b.seq;
    return a.token < b.token;
  };
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k),
                    candidates.end(), better);
  for (size_t c = 0; c < k; ++c) out[candidates[c].seq].w[candidates[c].token] = 1;
}

}  // namespace

std::vector<TokenWeights> select_tokens(std::span<const GuidedSequence> batch,
                                        const GuidanceConfig& config) {
  config.validate();
  for (const GuidedSequence& g : batch) {
    if (g.student_losses.size() != g.teacher_agg.size()) {
      fail(ErrorCode::kLengthMismatch, "student losses and teacher aggregates differ in length");
    }
    for (size_t i = 0; i < g.student_losses.size(); ++i) {
      if (!std::isfinite(g.student_losses[i]) ||
          (g.teacher_agg[i] && !std::isfinite(*g.teacher_agg[i]))) {
        fail(ErrorCode::kInvalidArgument, "non-finite loss at token " + std::to_string(i));
      }
    }
  }
  std::vector<TokenWeights> out(batch.size());
  if (config.scope == Scope::kPerBatch) {
    if (!batch.empty()) select_scope(batch, 0, batch.size(), config, out);
  } else {
    for (size_t s = 0; s < batch.size(); ++s) select_scope(batch, s, s + 1, config, out);
  }
  for (TokenWeights& w : out) {
    w.selected_count = static_cast<size_t>(std::count(w.w.begin(), w.w.end(), uint8_t{1}));
  }
  return out;
}

double reweighted_loss(std::span<const double> student_losses, const TokenWeights& weights,
                       Normalize normalize) {
  if (student_losses.size() != weights.size()) {
    fail(ErrorCode::kLengthMismatch, "losses and weights differ in length");
  }
  double sum = 0.0;
  for (size_t i = 0; i < student_losses.size(); ++i) {
    if (weights.w[i]) sum += student_losses[i];
  }
  if (normalize == Normalize::kBySelected) {
    if (weights.selected_count == 0) fail(ErrorCode::kNoSelectedTokens, "no token selected");
    return sum / static_cast<double>(weights.selected_count);
  }
  if (student_losses.empty()) fail(ErrorCode::kNoSelectedTokens, "empty loss vector");
  return sum / static_cast<double>(student_losses.size());
}

}  // namespace vocagno
