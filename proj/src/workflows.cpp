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

#include "vocagno/workflows.hpp"

#include <cstdio>
#include <exception>
#include <fstream>
#include <thread>

#include "vocagno/alignment.hpp"
#include "vocagno/corpus_io.hpp"
#include "vocagno/error.hpp"
#include "vocagno/unicode.hpp"

namespace vocagno {

namespace {

constexpr size_t kBlockRecords = 1024;

// Applies fn to every index in [0, n) on up to `jobs` threads. Results land at
// their own index; when several items fail, the lowest index's error wins.
template <typename Out, typename F>
std::vector<Out> parallel_map(size_t n, size_t jobs, F&& fn) {
  std::vector<Out> out(n);
  std::vector<std::exception_ptr> errors(n);
  const size_t workers = std::max<size_t>(1, std::min(jobs, n));
  auto run = [&](size_t w) {
    for (size_t i = w; i < n; i += workers) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (size_t w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (auto& t : threads) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<CorpusRecord> read_block(CorpusReader& reader, size_t max_records) {
  std::vector<CorpusRecord> block;
  while (block.size() < max_records) {
    auto r = reader.next();
    if (!r) break;
    block.push_back(std::move(*r));
  }
  return block;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) fail(ErrorCode::kIo, "write failure on '" + path + "'");
}

std::vector<int64_t> ids_of(const TokenizedSequence& seq) {
  std::vector<int64_t> ids;
  ids.reserve(seq.size());
  for (const TokenSpan& t : seq.tokens) ids.push_back(t.token_id);
  return ids;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::vector<std::string> read_text_documents(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "'");
  std::vector<std::string> docs;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    docs.push_back(line);
  }
  return docs;
}

namespace {
constexpr size_t kDefaultMergeExtra = 24;
}  // namespace

void train_vocab_file(VocabKind kind, const std::string& text_in, size_t target_size,
                      uint64_t seed, const std::string& out) {
  const auto texts = read_text_documents(text_in);
  switch (kind) {
    case VocabKind::kChar:
      save_vocab(train_char(texts), out);
      break;
    case VocabKind::kWhitespace:
      save_vocab(train_whitespace(texts), out);
      break;
    case VocabKind::kGreedyMerge:
      if (target_size == 0) target_size = train_char(texts).size() + kDefaultMergeExtra;
      save_vocab(train_greedy_merge(texts, target_size, seed), out);
      break;
  }
}

void tokenize_file(const ToyVocab& student, const ToyVocab& teacher,
                   const std::string& text_in, const std::string& out_path) {
  const auto texts = read_text_documents(text_in);
  std::ofstream out = open_out(out_path);
  for (size_t d = 0; d < texts.size(); ++d) {
    const std::u32string text = utf8_to_u32(texts[d]);
    CorpusRecord r;
    r.doc_id = "doc-" + std::to_string(d);
    r.text_len = static_cast<int64_t>(text.size());
    r.student = encode(student, text, Role::kStudent, r.doc_id);
    r.teacher = encode(teacher, text, Role::kTeacher, r.doc_id);
    for (const TokenizedSequence* seq : {&r.student, &r.teacher}) {
      if (validate_sequence(*seq)) {
        fail(ErrorCode::kInternal, "tokenizer produced an invalid sequence for " + r.doc_id);
      }
    }
    out << serialize_record(r) << '\n';
  }
  finish(out, out_path);
}

void score_file(const std::string& corpus_in, const std::string& out_path,
                const TinyLMParams* student_model, const TinyLMParams* teacher_model) {
  if (!student_model && !teacher_model) {
    fail(ErrorCode::kInvalidArgument, "score needs a student or a teacher model");
  }
  CorpusReader reader(corpus_in);
  std::ofstream out = open_out(out_path);
  while (auto r = reader.next()) {
    if (student_model) r->student_losses = forward_nll(*student_model, ids_of(r->student)).losses;
    if (teacher_model) r->teacher_losses = forward_nll(*teacher_model, ids_of(r->teacher)).losses;
    out << serialize_record(*r) << '\n';
  }
  finish(out, out_path);
}

void align_file(const std::string& corpus_in, const std::string& out_path, size_t jobs) {
  CorpusReader reader(corpus_in);
  std::ofstream out = open_out(out_path);
  while (true) {
    const auto block = read_block(reader, kBlockRecords);
    if (block.empty()) break;
    const auto lines = parallel_map<std::string>(block.size(), jobs, [&](size_t i) {
      const CorpusRecord& r = block[i];
      const AlignmentMap map = align(r.student, r.teacher);
      TokenWeights ones;
      ones.w.assign(map.size(), 1);
      ones.selected_count = map.size();
      return serialize_mask(r.doc_id, map, ones);
    });
    for (const auto& l : lines) out << l << '\n';
  }
  finish(out, out_path);
}

namespace {

AlignmentMap mapping_from_mask(const ParsedMask& mask, const CorpusRecord& r) {
  if (mask.doc_id != r.doc_id || mask.mapping.size() != r.student.size()) {
    fail(ErrorCode::kDocMismatch, "mapping record '" + mask.doc_id +
                                      "' does not match corpus record '" + r.doc_id + "'");
  }
  AlignmentMap map;
  map.entries.reserve(mask.mapping.size());
  const auto m = static_cast<int64_t>(r.teacher.size());
  for (const auto& e : mask.mapping) {
    if (!e) {
      map.entries.push_back(AlignmentEntry::unmapped());
      continue;
    }
    if (e->first < 0 || e->second < e->first || e->second >= m) {
      fail(ErrorCode::kIndexOutOfRange, "mapping entry outside teacher sequence in '" + r.doc_id + "'");
    }
    map.entries.push_back(AlignmentEntry::range(e->first, e->second, false));
  }
  return map;
}

}  // namespace

SelectSummary select_file(const std::string& corpus_in, const std::string& out_path,
                          const SelectOptions& options) {
  options.guidance.validate();
  const size_t batch_docs = options.guidance.scope == Scope::kPerBatch
                                ? std::max<size_t>(1, options.batch_docs)
                                : 1;
  std::vector<ParsedMask> masks;
  if (!options.mapping_in.empty()) masks = read_masks(options.mapping_in);

  CorpusReader reader(corpus_in);
  std::ofstream out = open_out(out_path);
  SelectSummary summary;
  size_t doc_index = 0;
  const size_t block_records = (kBlockRecords / batch_docs + 1) * batch_docs;
  while (true) {
    const auto block = read_block(reader, block_records);
    if (block.empty()) break;
    std::vector<AlignmentMap> maps(block.size());
    std::vector<GuidedSequence> guided(block.size());
    for (size_t i = 0; i < block.size(); ++i) {
      const CorpusRecord& r = block[i];
      if (!r.student_losses || !r.teacher_losses) {
        fail(ErrorCode::kInvalidArgument,
             "record '" + r.doc_id + "' needs student and teacher losses for select");
      }
    }
    const size_t first_doc = doc_index;
    parallel_map<int>(block.size(), options.jobs, [&](size_t i) {
      const CorpusRecord& r = block[i];
      if (masks.empty()) {
        maps[i] = align(r.student, r.teacher);
      } else {
        if (first_doc + i >= masks.size()) {
          fail(ErrorCode::kDocMismatch, "mapping file has fewer records than the corpus");
        }
        maps[i] = mapping_from_mask(masks[first_doc + i], r);
      }
      guided[i] = make_guided(maps[i], *r.student_losses, *r.teacher_losses,
                              options.guidance.phi);
      return 0;
    });
    const size_t n_batches = (block.size() + batch_docs - 1) / batch_docs;
    const auto weights = parallel_map<std::vector<TokenWeights>>(
        n_batches, options.jobs, [&](size_t b) {
          const size_t begin = b * batch_docs;
          const size_t end = std::min(block.size(), begin + batch_docs);
          return select_tokens(std::span<const GuidedSequence>(guided).subspan(begin, end - begin),
                               options.guidance);
        });
    for (size_t i = 0; i < block.size(); ++i) {
      const TokenWeights& w = weights[i / batch_docs][i % batch_docs];
      out << serialize_mask(block[i].doc_id, maps[i], w) << '\n';
      summary.tokens += w.size();
      summary.selected += w.selected_count;
    }
    summary.documents += block.size();
    doc_index += block.size();
  }
  if (!masks.empty() && masks.size() != doc_index) {
    fail(ErrorCode::kDocMismatch, "mapping file has more records than the corpus");
  }
  finish(out, out_path);
  return summary;
}

void metrics_file(const std::string& corpus_in, const std::vector<size_t>& chunks,
                  const std::string& out_path, size_t jobs) {
  for (size_t c : chunks) {
    if (c == 0) fail(ErrorCode::kInvalidArgument, "chunk counts must be >= 1");
  }
  CorpusReader reader(corpus_in);
  std::ofstream out = open_out(out_path);
  out << "doc_id,num_chunks,mean_iou,mean_ios\n";
  while (true) {
    const auto block = read_block(reader, kBlockRecords);
    if (block.empty()) break;
    const auto rows = parallel_map<std::string>(block.size(), jobs, [&](size_t i) {
      const CorpusRecord& r = block[i];
      std::string text;
      for (size_t c : chunks) {
        const OverlapMetrics m = mean_overlap(chunk_align(r.student, r.teacher, c));
        text += r.doc_id + "," + std::to_string(c) + "," + format_double(m.iou) + "," +
                format_double(m.ios) + "\n";
      }
      const OverlapMetrics t = token_level_overlap(align(r.student, r.teacher), r.student, r.teacher);
      text += r.doc_id + ",tokenlevel," + format_double(t.iou) + "," + format_double(t.ios) + "\n";
      return text;
    });
    for (const auto& row : rows) out << row;
  }
  finish(out, out_path);
}

TrainToySummary train_toy(const TrainToyOptions& options) {
  const auto texts = read_text_documents(options.text_in);
  if (texts.empty()) fail(ErrorCode::kEmptyCorpus, "no documents in '" + options.text_in + "'");
  const ToyVocab student_vocab =
      options.student_vocab.empty() ? train_char(texts) : load_vocab(options.student_vocab);
  const bool needs_teacher = options.objective.kind != ObjectiveKind::kPlain;

  std::optional<ToyVocab> teacher_vocab;
  std::optional<TinyLMParams> teacher_params;
  if (needs_teacher || !options.save_teacher.empty()) {
    if (!options.teacher_vocab.empty()) {
      teacher_vocab = load_vocab(options.teacher_vocab);
    } else if (options.objective.kind == ObjectiveKind::kKld) {
      teacher_vocab = student_vocab;
    } else {
      const size_t chars = train_char(texts).size();
      teacher_vocab = train_greedy_merge(texts, chars + options.teacher_merge_extra, options.seed);
    }
    if (!options.teacher_model.empty()) {
      teacher_params = load_params(options.teacher_model);
    } else {
      TinyLMDims tdims = options.dims;
      tdims.vocab_size = teacher_vocab->model_vocab_size();
      TrainConfig tconfig;
      tconfig.lr = options.teacher_lr;
      tconfig.steps = options.teacher_steps;
      tconfig.objective.kind = ObjectiveKind::kPlain;
      teacher_params = train(TinyLMParams::init(tdims, options.seed + 1), texts, *teacher_vocab,
                             tconfig)
                           .params;
    }
    if (!options.save_teacher.empty()) save_params(*teacher_params, options.save_teacher);
  }

  TinyLMDims dims = options.dims;
  dims.vocab_size = student_vocab.model_vocab_size();
  TrainConfig config = options.train;
  config.objective = options.objective;
  std::optional<TeacherModel> teacher;
  if (needs_teacher) teacher.emplace(TeacherModel{*teacher_params, *teacher_vocab});
  const TrainResult result =
      train(TinyLMParams::init(dims, options.seed), texts, student_vocab, config, teacher);

  if (!options.history_out.empty()) {
    std::ofstream out = open_out(options.history_out);
    out << "step,objective,mean_nll,distill,selected_fraction\n";
    char buf[256];
    for (const TrainStep& s : result.history) {
      std::snprintf(buf, sizeof(buf), "%zu,%.12g,%.12g,%.12g,%.6f\n", s.step, s.objective,
                    s.mean_nll, s.distill, s.selected_fraction);
      out << buf;
    }
    finish(out, options.history_out);
  }
  if (!options.save_student.empty()) save_params(result.params, options.save_student);

  TrainToySummary summary;
  summary.steps = config.steps;
  summary.initial_objective = result.history.front().objective;
  summary.final_objective = result.history.back().objective;
  summary.final_mean_nll = result.history.back().mean_nll;
  return summary;
}

}  // namespace vocagno
