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

#include "vocagno/baseline_losses.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "vocagno/error.hpp"

namespace vocagno {

bool is_probability_vector(std::span<const double> p, double tolerance) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tolerance;
}

ProbVector::ProbVector(std::vector<double> p) : p_(std::move(p)) {
  if (!is_probability_vector(p_)) {
    fail(ErrorCode::kInvalidArgument, "not a probability vector");
  }
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    fail(ErrorCode::kLengthMismatch, "KL divergence needs equal-size distributions, got " +
                                         std::to_string(p.size()) + " and " +
                                         std::to_string(q.size()));
  }
  double kl = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
    kl += p[i] * std::log(p[i] / q[i]);
  }
  // Rounding can leave a tiny negative value for p == q up to the last bit.
  return std::max(kl, 0.0);
}

double kl_divergence(const ProbVector& p, const ProbVector& q) {
  return kl_divergence(p.values(), q.values());
}

namespace {

std::vector<double> sorted_padded(std::span<const double> v, size_t n) {
  std::vector<double> out(v.begin(), v.end());
  out.resize(n, 0.0);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace

double uld_wasserstein(std::span<const double> p, std::span<const double> q) {
  const size_t n = std::max(p.size(), q.size());
  const auto ps = sorted_padded(p, n);
  const auto qs = sorted_padded(q, n);
  double d = 0.0;
  for (size_t i = 0; i < n; ++i) d += std::abs(ps[i] - qs[i]);
  return d;
}

double uld_wasserstein(const ProbVector& p, const ProbVector& q) {
  return uld_wasserstein(p.values(), q.values());
}

std::vector<double> uld_wasserstein_grad(std::span<const double> p,
                                         std::span<const double> q) {
  const size_t n = std::max(p.size(), q.size());
  const auto qs = sorted_padded(q, n);
  std::vector<size_t> order(p.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return p[a] > p[b]; });
  std::vector<double> grad(p.size(), 0.0);
  for (size_t rank = 0; rank < order.size(); ++rank) {
    const double diff = p[order[rank]] - qs[rank];
    grad[order[rank]] = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
  }
  return grad;
}

}  // namespace vocagno
