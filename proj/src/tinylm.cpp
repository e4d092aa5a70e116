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

#include "vocagno/tinylm.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vocagno/baseline_losses.hpp"
#include "vocagno/error.hpp"
#include "vocagno/unicode.hpp"

namespace vocagno {

namespace {

constexpr int kFormatVersion = 1;
constexpr const char* kFormatName = "vocagno.tinylm";

// Uniform double in [0, 1) from the top 53 bits; std::uniform_real_distribution
// is not specified bit-exactly across standard libraries.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void fill_uniform(Eigen::MatrixXd& m, std::mt19937_64& rng, double scale) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = (2.0 * unit_uniform(rng) - 1.0) * scale;
  }
}

template <typename F>
void for_each_tensor(TinyLMParams& p, F&& f) {
  f(p.embedding);
  f(p.w_hidden);
  f(p.b_hidden);
  f(p.w_out);
  f(p.b_out);
}

}  // namespace

TinyLMParams TinyLMParams::zeros(const TinyLMDims& dims) {
  if (dims.vocab_size == 0 || dims.embed_dim == 0 || dims.hidden_dim == 0 || dims.context == 0) {
    fail(ErrorCode::kInvalidArgument, "all TinyLM dimensions must be >= 1");
  }
  const auto v = static_cast<Eigen::Index>(dims.vocab_size);
  const auto d = static_cast<Eigen::Index>(dims.embed_dim);
  const auto h = static_cast<Eigen::Index>(dims.hidden_dim);
  const auto c = static_cast<Eigen::Index>(dims.context);
  TinyLMParams p;
  p.dims = dims;
  p.embedding = Eigen::MatrixXd::Zero(v, d);
  p.w_hidden = Eigen::MatrixXd::Zero(h, c * d);
  p.b_hidden = Eigen::VectorXd::Zero(h);
  p.w_out = Eigen::MatrixXd::Zero(v, h);
  p.b_out = Eigen::VectorXd::Zero(v);
  return p;
}

TinyLMParams TinyLMParams::init(const TinyLMDims& dims, uint64_t seed, double scale) {
  TinyLMParams p = zeros(dims);
  p.rng_seed = seed;
  std::mt19937_64 rng(seed);
  fill_uniform(p.embedding, rng, scale);
  fill_uniform(p.w_hidden, rng, scale);
  fill_uniform(p.w_out, rng, scale);
  return p;
}

size_t TinyLMParams::parameter_count() const {
  return static_cast<size_t>(embedding.size() + w_hidden.size() + b_hidden.size() +
                             w_out.size() + b_out.size());
}

double& TinyLMParams::parameter(size_t index) {
  size_t offset = index;
  double* found = nullptr;
  for_each_tensor(*this, [&](auto& t) {
    if (found) return;
    const auto size = static_cast<size_t>(t.size());
    if (offset < size) {
      const auto cols = static_cast<size_t>(t.cols());
      found = &t(static_cast<Eigen::Index>(offset / cols), static_cast<Eigen::Index>(offset % cols));
    } else {
      offset -= size;
    }
  });
  if (!found) fail(ErrorCode::kIndexOutOfRange, "parameter index " + std::to_string(index));
  return *found;
}

double TinyLMParams::parameter(size_t index) const {
  return const_cast<TinyLMParams&>(*this).parameter(index);
}

void TinyLMParams::validate() const {
  const auto v = static_cast<Eigen::Index>(dims.vocab_size);
  const auto d = static_cast<Eigen::Index>(dims.embed_dim);
  const auto h = static_cast<Eigen::Index>(dims.hidden_dim);
  const auto c = static_cast<Eigen::Index>(dims.context);
  if (v < 1 || d < 1 || h < 1 || c < 1) {
    fail(ErrorCode::kInvalidArgument, "all TinyLM dimensions must be >= 1");
  }
  if (embedding.rows() != v || embedding.cols() != d || w_hidden.rows() != h ||
      w_hidden.cols() != c * d || b_hidden.size() != h || w_out.rows() != v ||
      w_out.cols() != h || b_out.size() != v) {
    fail(ErrorCode::kInvalidArgument, "TinyLM tensor shapes do not match dimensions");
  }
  if (!all_finite()) fail(ErrorCode::kInvalidArgument, "TinyLM weights must be finite");
}

bool TinyLMParams::all_finite() const {
  return embedding.allFinite() && w_hidden.allFinite() && b_hidden.allFinite() &&
         w_out.allFinite() && b_out.allFinite();
}

bool operator==(const TinyLMParams& a, const TinyLMParams& b) {
  return a.dims.vocab_size == b.dims.vocab_size && a.dims.embed_dim == b.dims.embed_dim &&
         a.dims.hidden_dim == b.dims.hidden_dim && a.dims.context == b.dims.context &&
         a.rng_seed == b.rng_seed && a.embedding == b.embedding && a.w_hidden == b.w_hidden &&
         a.b_hidden == b.b_hidden && a.w_out == b.w_out && a.b_out == b.b_out;
}

namespace {

nlohmann::json flat(const Eigen::MatrixXd& m) {
  std::vector<double> v;
  v.reserve(static_cast<size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) v.push_back(m(r, c));
  }
  return v;
}

void unflat(const nlohmann::json& doc, const char* key, Eigen::MatrixXd& m) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_array() || it->size() != static_cast<size_t>(m.size())) {
    fail(ErrorCode::kInvalidArgument, std::string("params JSON: '") + key + "' has wrong size");
  }
  size_t i = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const auto& v = (*it)[i++];
      if (!v.is_number()) fail(ErrorCode::kInvalidArgument, "params JSON: non-numeric weight");
      m(r, c) = v.get<double>();
    }
  }
}

}  // namespace

std::string params_to_json(const TinyLMParams& p) {
  nlohmann::json doc = {
      {"format", kFormatName},
      {"version", kFormatVersion},
      {"vocab_size", p.dims.vocab_size},
      {"embed_dim", p.dims.embed_dim},
      {"hidden_dim", p.dims.hidden_dim},
      {"context", p.dims.context},
      {"rng_seed", p.rng_seed},
      {"embedding", flat(p.embedding)},
      {"w_hidden", flat(p.w_hidden)},
      {"b_hidden", flat(p.b_hidden)},
      {"w_out", flat(p.w_out)},
      {"b_out", flat(p.b_out)},
  };
  return doc.dump();
}

TinyLMParams params_from_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::kInvalidArgument, std::string("params JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != kFormatName) {
    fail(ErrorCode::kInvalidArgument, "params JSON: not a vocagno.tinylm document");
  }
  if (doc.value("version", 0) != kFormatVersion) {
    fail(ErrorCode::kInvalidArgument, "params JSON: unsupported version");
  }
  TinyLMDims dims;
  try {
    dims.vocab_size = doc.at("vocab_size").get<size_t>();
    dims.embed_dim = doc.at("embed_dim").get<size_t>();
    dims.hidden_dim = doc.at("hidden_dim").get<size_t>();
    dims.context = doc.at("context").get<size_t>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kInvalidArgument, std::string("params JSON: ") + e.what());
  }
  TinyLMParams p = TinyLMParams::zeros(dims);
  p.rng_seed = doc.value("rng_seed", uint64_t{0});
  Eigen::MatrixXd b_hidden(p.b_hidden.size(), 1), b_out(p.b_out.size(), 1);
  unflat(doc, "embedding", p.embedding);
  unflat(doc, "w_hidden", p.w_hidden);
  unflat(doc, "b_hidden", b_hidden);
  unflat(doc, "w_out", p.w_out);
  unflat(doc, "b_out", b_out);
  p.b_hidden = b_hidden.col(0);
  p.b_out = b_out.col(0);
  p.validate();
  return p;
}

void save_params(const TinyLMParams& params, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out << params_to_json(params) << '\n';
  if (!out) fail(ErrorCode::kIo, "write failure on '" + path + "'");
}

TinyLMParams load_params(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open model '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return params_from_json(buf.str());
}

namespace {

// Activations of one document, kept for the backward pass.
struct DocCache {
  Eigen::MatrixXd inputs;    // (context * embed) x n
  Eigen::MatrixXd hidden;    // hidden x n
  Eigen::MatrixXd log_probs; // vocab x n
  Eigen::VectorXd nll;       // n
};

void check_ids(const TinyLMParams& p, std::span<const int64_t> ids) {
  for (size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || static_cast<size_t>(ids[i]) >= p.dims.vocab_size) {
      fail(ErrorCode::kIdOutOfRange, "token id " + std::to_string(ids[i]) + " at position " +
                                         std::to_string(i) + " outside vocabulary of " +
                                         std::to_string(p.dims.vocab_size));
    }
  }
}

DocCache run_forward(const TinyLMParams& p, std::span<const int64_t> ids) {
  check_ids(p, ids);
  const auto n = static_cast<Eigen::Index>(ids.size());
  const auto d = static_cast<Eigen::Index>(p.dims.embed_dim);
  const auto c = static_cast<Eigen::Index>(p.dims.context);
  DocCache cache;
  cache.inputs = Eigen::MatrixXd::Zero(c * d, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index s = 0; s < c; ++s) {
      const Eigen::Index pos = i - c + s;
      if (pos < 0) continue;
      cache.inputs.block(s * d, i, d, 1) = p.embedding.row(ids[pos]).transpose();
    }
  }
  cache.hidden = ((p.w_hidden * cache.inputs).colwise() + p.b_hidden).array().tanh().matrix();
  Eigen::MatrixXd logits = (p.w_out * cache.hidden).colwise() + p.b_out;
  cache.log_probs.resize(logits.rows(), n);
  cache.nll.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mx = logits.col(i).maxCoeff();
    const double lse = mx + std::log((logits.col(i).array() - mx).exp().sum());
    cache.log_probs.col(i) = logits.col(i).array() - lse;
    cache.nll(i) = -cache.log_probs(ids[i], i);
  }
  return cache;
}

std::vector<double> column(const Eigen::MatrixXd& m, Eigen::Index i, bool exponentiate) {
  std::vector<double> out(static_cast<size_t>(m.rows()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) out[r] = exponentiate ? std::exp(m(r, i)) : m(r, i);
  return out;
}

}  // namespace

ForwardResult forward_nll(const TinyLMParams& params, std::span<const int64_t> ids) {
  params.validate();
  DocCache cache = run_forward(params, ids);
  ForwardResult result;
  result.losses.assign(cache.nll.data(), cache.nll.data() + cache.nll.size());
  result.probs.reserve(ids.size());
  for (Eigen::Index i = 0; i < cache.log_probs.cols(); ++i) {
    result.probs.push_back(column(cache.log_probs, i, true));
  }
  return result;
}

std::optional<ObjectiveKind> parse_objective(std::string_view name) {
  if (name == "plain") return ObjectiveKind::kPlain;
  if (name == "selective") return ObjectiveKind::kSelective;
  if (name == "kld") return ObjectiveKind::kKld;
  if (name == "uld") return ObjectiveKind::kUld;
  return std::nullopt;
}

std::string_view to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::kPlain: return "plain";
    case ObjectiveKind::kSelective: return "selective";
    case ObjectiveKind::kKld: return "kld";
    case ObjectiveKind::kUld: return "uld";
  }
  return "unknown";
}

Evaluation evaluate(const TinyLMParams& params, std::span<const TrainingDoc> batch,
                    const Objective& objective, const std::vector<TokenWeights>* fixed_weights,
                    bool with_gradient) {
  std::vector<DocCache> caches;
  caches.reserve(batch.size());
  size_t total = 0;
  for (const TrainingDoc& doc : batch) {
    caches.push_back(run_forward(params, doc.ids));
    total += doc.ids.size();
  }
  if (total == 0) fail(ErrorCode::kNoSelectedTokens, "batch has no tokens");

  Evaluation ev;
  double nll_sum = 0.0;
  for (const DocCache& c : caches) nll_sum += c.nll.sum();
  ev.mean_nll = nll_sum / static_cast<double>(total);

  const bool weighted =
      objective.kind == ObjectiveKind::kPlain || objective.kind == ObjectiveKind::kSelective;
  if (fixed_weights != nullptr) {
    if (fixed_weights->size() != batch.size()) {
      fail(ErrorCode::kLengthMismatch, "fixed weights do not match the batch");
    }
    ev.weights = *fixed_weights;
  } else if (objective.kind == ObjectiveKind::kSelective) {
    std::vector<GuidedSequence> guided(batch.size());
    for (size_t b = 0; b < batch.size(); ++b) {
      if (batch[b].teacher_agg.size() != batch[b].ids.size()) {
        fail(ErrorCode::kLengthMismatch, "teacher losses missing for selective objective");
      }
      guided[b].student_losses.assign(caches[b].nll.data(),
                                      caches[b].nll.data() + caches[b].nll.size());
      guided[b].teacher_agg = batch[b].teacher_agg;
    }
    ev.weights = select_tokens(guided, objective.guidance);
  } else {
    ev.weights.resize(batch.size());
    for (size_t b = 0; b < batch.size(); ++b) {
      ev.weights[b].w.assign(batch[b].ids.size(), 1);
      ev.weights[b].selected_count = batch[b].ids.size();
    }
  }

  double nll_denominator = static_cast<double>(total);
  if (weighted) {
    size_t selected = 0;
    for (size_t b = 0; b < batch.size(); ++b) {
      if (ev.weights[b].size() != batch[b].ids.size()) {
        fail(ErrorCode::kLengthMismatch, "weights do not match document length");
      }
      selected += ev.weights[b].selected_count;
    }
    if (objective.normalize == Normalize::kBySelected) {
      if (selected == 0) fail(ErrorCode::kNoSelectedTokens, "selective mask selects no token");
      nll_denominator = static_cast<double>(selected);
    }
  }

  if (with_gradient) ev.gradient = TinyLMParams::zeros(params.dims);
  const double lambda = objective.lambda;
  double weighted_nll = 0.0;
  double distill_sum = 0.0;
  const auto d = static_cast<Eigen::Index>(params.dims.embed_dim);
  const auto c = static_cast<Eigen::Index>(params.dims.context);

  for (size_t b = 0; b < batch.size(); ++b) {
    const TrainingDoc& doc = batch[b];
    const DocCache& cache = caches[b];
    const auto n = static_cast<Eigen::Index>(doc.ids.size());
    Eigen::MatrixXd dlogits;
    if (with_gradient) dlogits = Eigen::MatrixXd::Zero(cache.log_probs.rows(), n);

    if (objective.kind == ObjectiveKind::kKld && static_cast<Eigen::Index>(doc.teacher_probs.size()) != n) {
      fail(ErrorCode::kLengthMismatch, "KLD needs one teacher distribution per student position");
    }
    if (objective.kind == ObjectiveKind::kUld && static_cast<Eigen::Index>(doc.alignment.size()) != n) {
      fail(ErrorCode::kLengthMismatch, "ULD needs an alignment entry per student position");
    }

    for (Eigen::Index i = 0; i < n; ++i) {
      const double w = weighted ? static_cast<double>(ev.weights[b].w[i]) : 1.0;
      weighted_nll += w * cache.nll(i);
      Eigen::VectorXd probs;
      if (with_gradient || objective.kind == ObjectiveKind::kKld ||
          objective.kind == ObjectiveKind::kUld) {
        probs = cache.log_probs.col(i).array().exp();
      }
      if (with_gradient && w != 0.0) {
        Eigen::VectorXd g = probs;
        g(doc.ids[i]) -= 1.0;
        dlogits.col(i) += (w / nll_denominator) * g;
      }
      if (objective.kind == ObjectiveKind::kKld) {
        const std::vector<double>& q = doc.teacher_probs[i];
        if (q.size() != static_cast<size_t>(probs.size())) {
          fail(ErrorCode::kVocabMismatch, "teacher distribution size differs from student vocabulary");
        }
        const double kl = kl_divergence(std::span<const double>(probs.data(), probs.size()), q);
        distill_sum += kl;
        if (with_gradient) {
          Eigen::VectorXd g(probs.size());
          for (Eigen::Index v = 0; v < probs.size(); ++v) {
            g(v) = probs(v) * (cache.log_probs(v, i) - std::log(q[v]) - kl);
          }
          dlogits.col(i) += (lambda / static_cast<double>(total)) * g;
        }
      } else if (objective.kind == ObjectiveKind::kUld) {
        const AlignmentEntry& e = doc.alignment[i];
        if (!e.mapped) continue;
        if (e.j < 0 || e.k >= static_cast<int64_t>(doc.teacher_probs.size())) {
          fail(ErrorCode::kIndexOutOfRange, "ULD alignment outside teacher distributions");
        }
        const std::span<const double> p(probs.data(), static_cast<size_t>(probs.size()));
        const double count = static_cast<double>(e.k - e.j + 1);
        Eigen::VectorXd dp = Eigen::VectorXd::Zero(probs.size());
        for (int64_t l = e.j; l <= e.k; ++l) {
          distill_sum += uld_wasserstein(p, doc.teacher_probs[l]) / count;
          if (with_gradient) {
            const auto g = uld_wasserstein_grad(p, doc.teacher_probs[l]);
            for (Eigen::Index v = 0; v < probs.size(); ++v) dp(v) += g[v] / count;
          }
        }
        if (with_gradient) {
          // Softmax Jacobian: dz = p * (dp - <dp, p>).
          const Eigen::VectorXd dz = probs.array() * (dp.array() - dp.dot(probs));
          dlogits.col(i) += (lambda / static_cast<double>(total)) * dz;
        }
      }
    }

    if (!with_gradient) continue;
    TinyLMParams& g = ev.gradient;
    g.w_out.noalias() += dlogits * cache.hidden.transpose();
    g.b_out += dlogits.rowwise().sum();
    const Eigen::MatrixXd dhidden = params.w_out.transpose() * dlogits;
    const Eigen::MatrixXd dpre =
        (dhidden.array() * (1.0 - cache.hidden.array().square())).matrix();
    g.w_hidden.noalias() += dpre * cache.inputs.transpose();
    g.b_hidden += dpre.rowwise().sum();
    const Eigen::MatrixXd dinputs = params.w_hidden.transpose() * dpre;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index s = 0; s < c; ++s) {
        const Eigen::Index pos = i - c + s;
        if (pos < 0) continue;
        g.embedding.row(doc.ids[pos]) += dinputs.block(s * d, i, d, 1).transpose();
      }
    }
  }

  ev.distill = distill_sum / static_cast<double>(total);
  if (weighted) {
    ev.objective = weighted_nll / nll_denominator;
  } else {
    ev.objective = combined_loss(ev.mean_nll, ev.distill, lambda);
  }
  return ev;
}

TinyLMParams grad(const TinyLMParams& params, std::span<const TrainingDoc> batch,
                  const Objective& objective) {
  return evaluate(params, batch, objective).gradient;
}

std::vector<TrainingDoc> prepare_docs(const std::vector<std::string>& texts,
                                      const ToyVocab& student_vocab, const Objective& objective,
                                      const std::optional<TeacherModel>& teacher) {
  const bool needs_teacher = objective.kind != ObjectiveKind::kPlain;
  if (needs_teacher && !teacher) {
    fail(ErrorCode::kInvalidArgument,
         std::string(to_string(objective.kind)) + " objective needs a teacher model");
  }
  if (objective.kind == ObjectiveKind::kKld && !(teacher->vocab == student_vocab)) {
    fail(ErrorCode::kVocabMismatch,
         "KLD needs teacher and student to share one vocabulary (student " +
             std::to_string(student_vocab.size()) + " entries, teacher " +
             std::to_string(teacher->vocab.size()) + ")");
  }
  if (teacher && teacher->params.dims.vocab_size != teacher->vocab.model_vocab_size()) {
    fail(ErrorCode::kVocabMismatch, "teacher model size does not match its vocabulary");
  }
  std::vector<TrainingDoc> docs;
  docs.reserve(texts.size());
  for (size_t t = 0; t < texts.size(); ++t) {
    const std::u32string text = utf8_to_u32(texts[t]);
    const std::string doc_id = "doc-" + std::to_string(t);
    const TokenizedSequence student = encode(student_vocab, text, Role::kStudent, doc_id);
    TrainingDoc doc;
    doc.ids.reserve(student.size());
    for (const TokenSpan& s : student.tokens) doc.ids.push_back(s.token_id);
    if (doc.ids.empty()) continue;
    switch (objective.kind) {
      case ObjectiveKind::kPlain:
        break;
      case ObjectiveKind::kSelective: {
        const TokenizedSequence tseq = encode(teacher->vocab, text, Role::kTeacher, doc_id);
        std::vector<int64_t> tids;
        for (const TokenSpan& s : tseq.tokens) tids.push_back(s.token_id);
        const ForwardResult tf = forward_nll(teacher->params, tids);
        doc.teacher_agg =
            aggregate_teacher_loss(align(student, tseq), tf.losses, objective.guidance.phi);
        break;
      }
      case ObjectiveKind::kKld:
        doc.teacher_probs = forward_nll(teacher->params, doc.ids).probs;
        break;
      case ObjectiveKind::kUld: {
        const TokenizedSequence tseq = encode(teacher->vocab, text, Role::kTeacher, doc_id);
        std::vector<int64_t> tids;
        for (const TokenSpan& s : tseq.tokens) tids.push_back(s.token_id);
        doc.teacher_probs = forward_nll(teacher->params, tids).probs;
        doc.alignment = align(student, tseq);
        break;
      }
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

TrainResult train_prepared(TinyLMParams params, std::span<const TrainingDoc> docs,
                           const TrainConfig& config) {
  if (!(config.lr > 0.0) || !std::isfinite(config.lr)) {
    fail(ErrorCode::kInvalidArgument, "learning rate must be positive");
  }
  if (docs.empty()) fail(ErrorCode::kEmptyCorpus, "no training documents");
  params.validate();
  TrainResult result;
  const size_t n_docs = docs.size();
  const size_t batch = config.batch_size == 0 ? n_docs : std::min(config.batch_size, n_docs);
  std::vector<TrainingDoc> wrapped;
  auto batch_at = [&](size_t step) -> std::span<const TrainingDoc> {
    const size_t start = (step * batch) % n_docs;
    if (start + batch <= n_docs) return docs.subspan(start, batch);
    wrapped.clear();
    for (size_t b = 0; b < batch; ++b) wrapped.push_back(docs[(start + b) % n_docs]);
    return wrapped;
  };
  auto record = [&](size_t step, const Evaluation& ev, std::span<const TrainingDoc> b) {
    size_t selected = 0;
    size_t total = 0;
    for (size_t i = 0; i < b.size(); ++i) {
      selected += ev.weights[i].selected_count;
      total += b[i].ids.size();
    }
    result.history.push_back({step, ev.objective, ev.mean_nll, ev.distill,
                              static_cast<double>(selected) / static_cast<double>(total)});
  };
  for (size_t step = 0; step < config.steps; ++step) {
    const auto b = batch_at(step);
    Evaluation ev = evaluate(params, b, config.objective);
    record(step, ev, b);
    params.embedding -= config.lr * ev.gradient.embedding;
    params.w_hidden -= config.lr * ev.gradient.w_hidden;
    params.b_hidden -= config.lr * ev.gradient.b_hidden;
    params.w_out -= config.lr * ev.gradient.w_out;
    params.b_out -= config.lr * ev.gradient.b_out;
    if (!params.all_finite()) {
      fail(ErrorCode::kInternal, "training diverged at step " + std::to_string(step));
    }
  }
  const auto b = batch_at(config.steps);
  record(config.steps, evaluate(params, b, config.objective, nullptr, false), b);
  result.params = std::move(params);
  return result;
}

TrainResult train(TinyLMParams params, const std::vector<std::string>& texts,
                  const ToyVocab& student_vocab, const TrainConfig& config,
                  const std::optional<TeacherModel>& teacher) {
  if (params.dims.vocab_size != student_vocab.model_vocab_size()) {
    fail(ErrorCode::kVocabMismatch, "student model size does not match its vocabulary");
  }
  const auto docs = prepare_docs(texts, student_vocab, config.objective, teacher);
  return train_prepared(std::move(params), docs, config);
}

}  // namespace vocagno
