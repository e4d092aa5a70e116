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

#ifndef VOCAGNO_BASELINE_LOSSES_HPP_
#define VOCAGNO_BASELINE_LOSSES_HPP_

#include <span>
#include <vector>

namespace vocagno {

// A probability vector: non-negative entries summing to 1 within 1e-9.
class ProbVector {
 public:
  // Throws kInvalidArgument when the invariant does not hold.
  explicit ProbVector(std::vector<double> p);

  std::span<const double> values() const { return p_; }
  size_t size() const { return p_.size(); }
  double operator[](size_t i) const { return p_[i]; }

 private:
  std::vector<double> p_;
};

bool is_probability_vector(std::span<const double> p, double tolerance = 1e-9);

struct BaselineLossConfig {
  double lambda = 0.5;
};

// KL(p || q) = sum p_i log(p_i / q_i), with 0 log 0 = 0. Returns +infinity
// when some q_i = 0 < p_i. Throws kLengthMismatch on different sizes.
double kl_divergence(std::span<const double> p, std::span<const double> q);
double kl_divergence(const ProbVector& p, const ProbVector& q);

// Sorts both vectors in descending order, zero-pads the shorter one and sums
// the absolute differences. Invariant to permutations of either argument, so
// the two sides may come from different vocabularies.
double uld_wasserstein(std::span<const double> p, std::span<const double> q);
double uld_wasserstein(const ProbVector& p, const ProbVector& q);

// d/dp_m of uld_wasserstein(p, q) for fixed q: the sign of the difference at
// the rank p_m occupies once sorted. Ties in p are ranked by index.
std::vector<double> uld_wasserstein_grad(std::span<const double> p,
                                         std::span<const double> q);

inline double combined_loss(double nll, double distill_term, double lambda) {
  return nll + lambda * distill_term;
}

}  // namespace vocagno

#endif  // VOCAGNO_BASELINE_LOSSES_HPP_
