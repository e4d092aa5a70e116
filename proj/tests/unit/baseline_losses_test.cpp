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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "fuzz.hpp"
#include "vocagno/baseline_losses.hpp"
#include "vocagno/error.hpp"

namespace vocagno {
namespace {

using V = std::vector<double>;

TEST(Kl, Examples) {
  const V p = {0.2, 0.3, 0.5};
  EXPECT_EQ(kl_divergence(p, p), 0.0);
  EXPECT_NEAR(kl_divergence(V{1, 0}, V{0.5, 0.5}), std::log(2.0), 1e-15);
  EXPECT_EQ(kl_divergence(V{0.5, 0.5}, V{1, 0}), std::numeric_limits<double>::infinity());
  // 0 log 0 terms vanish even where q is 0.
  EXPECT_NEAR(kl_divergence(V{1, 0}, V{1, 0}), 0.0, 0.0);
  try {
    kl_divergence(V{1}, V{0.5, 0.5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
}

TEST(Kl, HandComputed) {
  // 0.25 log(0.25/0.5) + 0.75 log(0.75/0.5)
  const double expected = 0.25 * std::log(0.5) + 0.75 * std::log(1.5);
  EXPECT_NEAR(kl_divergence(V{0.25, 0.75}, V{0.5, 0.5}), expected, 1e-15);
}

TEST(Kl, GibbsInequalityFuzzed) {
  testing::Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    const size_t n = static_cast<size_t>(rng.uniform_int(1, 30));
    const V p = testing::random_simplex(rng, n);
    const V q = testing::random_simplex(rng, n, 0.0);
    EXPECT_GE(kl_divergence(p, q), 0.0);
    EXPECT_EQ(kl_divergence(p, p), 0.0);
  }
}

TEST(Uld, Examples) {
  EXPECT_EQ(uld_wasserstein(V{1, 0}, V{0, 1}), 0.0);
  EXPECT_DOUBLE_EQ(uld_wasserstein(V{0.5, 0.5}, V{1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(uld_wasserstein(V{1}, V{0.5, 0.5}), 1.0);
  EXPECT_DOUBLE_EQ(uld_wasserstein(V{0.5, 0.5}, V{1}), 1.0);
}

TEST(Uld, GradientMatchesFiniteDifferences) {
  testing::Rng rng(12);
  for (int round = 0; round < 200; ++round) {
    const V p = testing::random_simplex(rng, static_cast<size_t>(rng.uniform_int(1, 12)), 0.0);
    const V q = testing::random_simplex(rng, static_cast<size_t>(rng.uniform_int(1, 12)), 0.0);
    const V g = uld_wasserstein_grad(p, q);
    ASSERT_EQ(g.size(), p.size());
    for (size_t m = 0; m < p.size(); ++m) {
      const double h = 1e-9;
      V hi = p, lo = p;
      hi[m] += h;
      lo[m] -= h;
      const double fd = (uld_wasserstein(hi, q) - uld_wasserstein(lo, q)) / (2 * h);
      EXPECT_NEAR(g[m], fd, 1e-5) << "round " << round << " m " << m;
    }
  }
}

TEST(Combined, Arithmetic) {
  EXPECT_EQ(combined_loss(1.5, 7.0, 0.0), 1.5);
  EXPECT_EQ(combined_loss(1.0, 2.0, 0.5), 2.0);
  EXPECT_EQ(combined_loss(1.0, 2.0, 1.0), 3.0);
  EXPECT_EQ(BaselineLossConfig{}.lambda, 0.5);
}

TEST(ProbVector, Validation) {
  EXPECT_NO_THROW(ProbVector(V{0.25, 0.75}));
  EXPECT_THROW(ProbVector(V{0.5, 0.6}), Error);
  EXPECT_THROW(ProbVector(V{-0.1, 1.1}), Error);
  EXPECT_THROW(ProbVector(V{std::nan(""), 1.0}), Error);
  EXPECT_TRUE(is_probability_vector(V{1.0}));
  EXPECT_FALSE(is_probability_vector(V{}));
  const ProbVector a(V{1, 0}), b(V{0.5, 0.5});
  EXPECT_NEAR(kl_divergence(a, b), std::log(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(uld_wasserstein(a, b), 1.0);
}

}  // namespace
}  // namespace vocagno
