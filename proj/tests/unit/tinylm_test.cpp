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

#include <cmath>
#include <cstdio>
#include <numeric>

#include "gradcheck.hpp"
#include "vocagno/error.hpp"
#include "vocagno/tinylm.hpp"

#ifndef VOCAGNO_FIXTURE_TEXT
#error "VOCAGNO_FIXTURE_TEXT must point at tests/data/fixture.txt"
#endif

namespace vocagno {
namespace {

const std::vector<std::string>& fixture() {
  static const auto docs = testing::first_docs(VOCAGNO_FIXTURE_TEXT, 3);
  return docs;
}

Objective objective(ObjectiveKind kind, double keep = 0.4) {
  Objective o;
  o.kind = kind;
  o.guidance.keep_ratio = keep;
  o.lambda = kind == ObjectiveKind::kKld ? 1.0 : 0.5;
  return o;
}

std::vector<int64_t> ids_of(const ToyVocab& v, const std::string& text) {
  std::vector<int64_t> ids;
  for (const auto& t : encode(v, text).tokens) ids.push_back(t.token_id);
  return ids;
}

TEST(Forward, ZeroOutputLayerIsUniform) {
  TinyLMDims d;
  d.vocab_size = 7;
  TinyLMParams p = TinyLMParams::init(d, 1);
  p.w_out.setZero();
  p.b_out.setZero();
  const std::vector<int64_t> ids = {0, 3, 6, 2};
  const auto r = forward_nll(p, ids);
  ASSERT_EQ(r.losses.size(), 4u);
  for (double l : r.losses) EXPECT_NEAR(l, std::log(7.0), 1e-15);
}

TEST(Forward, ProbabilitiesNormalizedAndDeterministic) {
  TinyLMDims d;
  d.vocab_size = 11;
  const TinyLMParams p = TinyLMParams::init(d, 9, 2.0);
  const std::vector<int64_t> ids = {1, 2, 3, 10, 0, 5, 5, 5};
  const auto a = forward_nll(p, ids);
  const auto b = forward_nll(p, ids);
  EXPECT_EQ(a.losses, b.losses);
  for (size_t i = 0; i < ids.size(); ++i) {
    const double s = std::accumulate(a.probs[i].begin(), a.probs[i].end(), 0.0);
    EXPECT_NEAR(s, 1.0, 1e-9);
    EXPECT_NEAR(a.losses[i], -std::log(a.probs[i][ids[i]]), 1e-12);
  }
}

TEST(Forward, IdOutOfRange) {
  TinyLMDims d;
  d.vocab_size = 3;
  const TinyLMParams p = TinyLMParams::init(d, 0);
  const std::vector<int64_t> ids = {0, 3};
  try {
    forward_nll(p, ids);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIdOutOfRange);
  }
  const std::vector<int64_t> neg = {-1, 0};
  EXPECT_THROW(forward_nll(p, neg), Error);
}

TEST(Params, InitIsPortableAndSerializable) {
  TinyLMDims d;
  d.vocab_size = 5;
  const TinyLMParams a = TinyLMParams::init(d, 42);
  EXPECT_EQ(a, TinyLMParams::init(d, 42));
  EXPECT_FALSE(a == TinyLMParams::init(d, 43));
  EXPECT_EQ(params_from_json(params_to_json(a)), a);
  EXPECT_EQ(a.parameter_count(),
            5u * 8 + 32u * 24 + 32u + 5u * 32 + 5u);
  for (size_t i = 0; i < a.parameter_count(); ++i) {
    EXPECT_LE(std::abs(a.parameter(i)), 0.3);
  }
  // First flat parameter is embedding(0, 0); the last one is b_out(4).
  TinyLMParams b = a;
  b.parameter(0) = 7.0;
  EXPECT_EQ(b.embedding(0, 0), 7.0);
  b.parameter(b.parameter_count() - 1) = 9.0;
  EXPECT_EQ(b.b_out(4), 9.0);
  b.parameter(5u * 8 + 1) = 3.0;  // w_hidden row 0, column 1
  EXPECT_EQ(b.w_hidden(0, 1), 3.0);
  EXPECT_THROW(params_from_json(R"({"format":"vocagno.tinylm","version":99})"), Error);
}

TEST(Grad, FiniteDifferencesAllObjectives) {
  const auto& texts = fixture();
  for (auto kind : {ObjectiveKind::kPlain, ObjectiveKind::kSelective, ObjectiveKind::kKld,
                    ObjectiveKind::kUld}) {
    const auto setup = testing::make_setup(texts, kind == ObjectiveKind::kKld);
    const Objective obj = objective(kind);
    const auto docs = prepare_docs(texts, setup.student_vocab, obj,
                                   TeacherModel{setup.teacher, setup.teacher_vocab});
    const auto r = testing::gradient_check(setup.student, docs, obj);
    EXPECT_LT(r.max_rel_error, 1e-4)
        << to_string(kind) << " worst " << r.worst_index << " analytic " << r.worst_analytic
        << " numeric " << r.worst_numeric;
    EXPECT_EQ(r.unresolved, 0u) << to_string(kind);
    std::printf("%s: %zu parameters checked, %zu with a reduced step, max rel error %.3g\n",
                std::string(to_string(kind)).c_str(), r.checked, r.shrunk, r.max_rel_error);
  }
}

TEST(Grad, SelectiveAllOnesEqualsPlain) {
  const auto& texts = fixture();
  const auto setup = testing::make_setup(texts, false);
  const Objective sel = objective(ObjectiveKind::kSelective, 1.0);
  const auto docs = prepare_docs(texts, setup.student_vocab, sel,
                                 TeacherModel{setup.teacher, setup.teacher_vocab});
  const auto plain = evaluate(setup.student, docs, objective(ObjectiveKind::kPlain));
  const auto s = evaluate(setup.student, docs, sel);
  EXPECT_NEAR(s.objective, plain.objective, 1e-14);
  for (size_t i = 0; i < plain.gradient.parameter_count(); ++i) {
    ASSERT_NEAR(s.gradient.parameter(i), plain.gradient.parameter(i), 1e-14) << i;
  }
}

TEST(Grad, SelectiveSingleTokenEqualsThatPositionsLoss) {
  const auto& texts = fixture();
  const auto setup = testing::make_setup(texts, false);
  const Objective sel = objective(ObjectiveKind::kSelective);
  auto docs = prepare_docs(texts, setup.student_vocab, sel,
                           TeacherModel{setup.teacher, setup.teacher_vocab});
  docs.resize(1);
  const size_t t = 4;
  std::vector<TokenWeights> mask(1);
  mask[0].w.assign(docs[0].ids.size(), 0);
  mask[0].w[t] = 1;
  mask[0].selected_count = 1;
  const auto e = evaluate(setup.student, docs, sel, &mask);
  EXPECT_NEAR(e.objective, forward_nll(setup.student, docs[0].ids).losses[t], 1e-14);
  // Oracle: central differences of the single position's nll.
  TinyLMParams p = setup.student;
  const double h = 1e-5;
  for (size_t i = 0; i < p.parameter_count(); ++i) {
    const double orig = p.parameter(i);
    p.parameter(i) = orig + h;
    const double up = forward_nll(p, docs[0].ids).losses[t];
    p.parameter(i) = orig - h;
    const double down = forward_nll(p, docs[0].ids).losses[t];
    p.parameter(i) = orig;
    const double fd = (up - down) / (2 * h);
    ASSERT_NEAR(e.gradient.parameter(i), fd, 1e-4 * (std::abs(fd) + 1e-8) + 1e-9) << i;
  }
  mask[0].w[t] = 0;
  mask[0].selected_count = 0;
  try {
    evaluate(setup.student, docs, sel, &mask);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::kNoSelectedTokens);
  }
}

TEST(Train, PlainLearnsAlternatingText) {
  std::string text;
  for (int i = 0; i < 40; ++i) text += "ab";
  const ToyVocab v = train_char({text});
  TinyLMDims d;
  d.vocab_size = v.model_vocab_size();
  TrainConfig c;
  c.steps = 300;
  const auto r = train(TinyLMParams::init(d, 3), {text}, v, c);
  ASSERT_EQ(r.history.size(), 301u);
  EXPECT_LT(r.history.back().mean_nll, 0.1 * r.history.front().mean_nll);
  EXPECT_TRUE(r.params.all_finite());
  for (const auto& p : forward_nll(r.params, ids_of(v, text)).probs) {
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-9);
  }
}

TEST(Train, DeterministicHistories) {
  const auto& texts = fixture();
  const auto setup = testing::make_setup(texts, false);
  TrainConfig c;
  c.steps = 25;
  c.objective = objective(ObjectiveKind::kSelective);
  const TeacherModel teacher{setup.teacher, setup.teacher_vocab};
  const auto a = train(setup.student, texts, setup.student_vocab, c, teacher);
  const auto b = train(setup.student, texts, setup.student_vocab, c, teacher);
  ASSERT_EQ(a.history.size(), b.history.size());
  for (size_t i = 0; i < a.history.size(); ++i) {
    EXPECT_EQ(a.history[i].objective, b.history[i].objective);
  }
  EXPECT_EQ(a.params, b.params);
}

TEST(Train, SelectiveKeepAllIncludeMatchesPlain) {
  const auto& texts = fixture();
  const auto setup = testing::make_setup(texts, false);
  TrainConfig plain;
  plain.steps = 20;
  TrainConfig sel = plain;
  sel.objective = objective(ObjectiveKind::kSelective, 1.0);
  const auto a = train(setup.student, texts, setup.student_vocab, plain);
  const auto b = train(setup.student, texts, setup.student_vocab, sel,
                       TeacherModel{setup.teacher, setup.teacher_vocab});
  ASSERT_EQ(a.history.size(), b.history.size());
  for (size_t i = 0; i < a.history.size(); ++i) {
    EXPECT_NEAR(a.history[i].objective, b.history[i].objective, 1e-12) << i;
  }
}

TEST(Train, KldAgainstItselfStaysAtZero) {
  const auto& texts = fixture();
  const ToyVocab v = train_char(texts);
  const TinyLMParams p = TinyLMParams::init(testing::small_dims(v.model_vocab_size()), 2);
  TrainConfig c;
  c.steps = 30;
  c.lr = 1e-7;
  c.objective = objective(ObjectiveKind::kKld);
  c.objective.lambda = 1e6;
  const auto r = train(p, texts, v, c, TeacherModel{p, v});
  // Zero up to the rounding of two evaluations of the same softmax.
  for (const auto& s : r.history) EXPECT_LE(s.distill, 1e-12) << s.step;
}

TEST(Train, KldRejectsDifferentVocabulary) {
  const auto& texts = fixture();
  const auto setup = testing::make_setup(texts, false);
  try {
    prepare_docs(texts, setup.student_vocab, objective(ObjectiveKind::kKld),
                 TeacherModel{setup.teacher, setup.teacher_vocab});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kVocabMismatch);
  }
}

TEST(Train, UldRunsAcrossVocabularies) {
  const auto& texts = fixture();
  const auto setup = testing::make_setup(texts, false);
  TrainConfig c;
  c.steps = 30;
  c.objective = objective(ObjectiveKind::kUld);
  const auto r = train(setup.student, texts, setup.student_vocab, c,
                       TeacherModel{setup.teacher, setup.teacher_vocab});
  EXPECT_LT(r.history.back().objective, r.history.front().objective);
  EXPECT_GT(r.history.front().distill, 0.0);
}

TEST(Train, MiniBatchesCycle) {
  const auto& texts = fixture();
  const ToyVocab v = train_char(texts);
  TrainConfig c;
  c.steps = 10;
  c.batch_size = 2;
  const auto r = train(TinyLMParams::init(testing::small_dims(v.model_vocab_size()), 1), texts, v, c);
  EXPECT_EQ(r.history.size(), 11u);
  EXPECT_TRUE(r.params.all_finite());
}

TEST(Names, Objectives) {
  EXPECT_EQ(parse_objective("uld"), ObjectiveKind::kUld);
  EXPECT_EQ(to_string(ObjectiveKind::kSelective), "selective");
  EXPECT_FALSE(parse_objective("dpo").has_value());
}

}  // namespace
}  // namespace vocagno
