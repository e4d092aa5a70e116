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

// vocagno: batch workflows over the C API. Every run writes a sidecar
// manifest holding the fully resolved configuration; `vocagno rerun` replays
// one.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "vocagno/vocagno.h"

namespace {

using nlohmann::json;

// Raised for bad flags or manifests; exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a library call fails; carries the library status.
struct ApiError : std::runtime_error {
  vocagno_status status;
  ApiError(vocagno_status s, const std::string& msg) : std::runtime_error(msg), status(s) {}
};

void check(vocagno_status s) {
  if (s != VOCAGNO_OK) throw ApiError(s, vocagno_last_error());
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(ptr); }
};
using VocabHandle = Handle<vocagno_vocab, vocagno_vocab_free>;
using ModelHandle = Handle<vocagno_model, vocagno_model_free>;

template <typename E>
E lookup(const std::map<std::string, E>& table, const std::string& key, const char* what) {
  auto it = table.find(key);
  if (it == table.end()) throw UsageError(std::string("unknown ") + what + " '" + key + "'");
  return it->second;
}

const std::map<std::string, vocagno_vocab_kind> kVocabKinds = {
    {"char", VOCAGNO_VOCAB_CHAR},
    {"whitespace", VOCAGNO_VOCAB_WHITESPACE},
    {"greedy_merge", VOCAGNO_VOCAB_GREEDY_MERGE},
    {"merge", VOCAGNO_VOCAB_GREEDY_MERGE}};
const std::map<std::string, vocagno_phi> kPhis = {
    {"mean", VOCAGNO_PHI_MEAN}, {"max", VOCAGNO_PHI_MAX}, {"sum", VOCAGNO_PHI_SUM}};
const std::map<std::string, vocagno_unmapped> kUnmapped = {
    {"include", VOCAGNO_UNMAPPED_INCLUDE},
    {"exclude", VOCAGNO_UNMAPPED_EXCLUDE},
    {"mean", VOCAGNO_UNMAPPED_MEAN_FILL}};
const std::map<std::string, vocagno_scope> kScopes = {
    {"sequence", VOCAGNO_SCOPE_SEQUENCE}, {"batch", VOCAGNO_SCOPE_BATCH}};
const std::map<std::string, vocagno_rank_order> kOrders = {
    {"largest", VOCAGNO_KEEP_LARGEST}, {"smallest", VOCAGNO_KEEP_SMALLEST}};
const std::map<std::string, vocagno_objective> kObjectives = {
    {"plain", VOCAGNO_OBJECTIVE_PLAIN},
    {"selective", VOCAGNO_OBJECTIVE_SELECTIVE},
    {"kld", VOCAGNO_OBJECTIVE_KLD},
    {"uld", VOCAGNO_OBJECTIVE_ULD}};
const std::map<std::string, vocagno_normalize> kNormalize = {
    {"selected", VOCAGNO_NORMALIZE_BY_SELECTED}, {"all", VOCAGNO_NORMALIZE_BY_ALL}};

template <typename E>
std::vector<std::string> keys(const std::map<std::string, E>& table) {
  std::vector<std::string> out;
  for (const auto& [k, v] : table) out.push_back(k);
  return out;
}

std::string abs_path(const std::string& p) {
  if (p.empty()) return p;
  return std::filesystem::absolute(p).lexically_normal().string();
}

const char* c_or_null(const json& cfg, const char* key) {
  const auto& v = cfg.at(key);
  if (v.is_null()) return nullptr;
  return v.get_ref<const std::string&>().c_str();
}

json path_or_null(const std::string& p) { return p.empty() ? json(nullptr) : json(abs_path(p)); }

// ---- resolved configurations ------------------------------------------
//
// A run is (subcommand, config, inputs, outputs, seed). Parsing fills these
// from flags; `rerun` reads them back from a manifest. Execution only ever
// sees the resolved form.

struct Run {
  std::string subcommand;
  json config = json::object();
  json inputs = json::object();
  json outputs = json::object();
  json seed = nullptr;
  std::string manifest_path;
};

vocagno_guidance_config guidance_from(const json& g) {
  vocagno_guidance_config c;
  vocagno_guidance_config_default(&c);
  c.phi = lookup(kPhis, g.at("phi").get<std::string>(), "phi");
  c.unmapped = lookup(kUnmapped, g.at("unmapped").get<std::string>(), "unmapped strategy");
  c.keep_ratio = g.at("keep").get<double>();
  c.scope = lookup(kScopes, g.at("scope").get<std::string>(), "scope");
  c.order = lookup(kOrders, g.at("order").get<std::string>(), "order");
  return c;
}

void exec_vocab(const Run& r) {
  check(vocagno_vocab_train_file(lookup(kVocabKinds, r.config.at("kind").get<std::string>(), "kind"),
                                 c_or_null(r.inputs, "text"), r.config.at("size").get<size_t>(),
                                 r.seed.get<uint64_t>(), c_or_null(r.outputs, "vocab")));
}

void exec_tokenize(const Run& r) {
  VocabHandle a, b;
  check(vocagno_vocab_load(c_or_null(r.inputs, "vocab_a"), &a.ptr));
  check(vocagno_vocab_load(c_or_null(r.inputs, "vocab_b"), &b.ptr));
  check(vocagno_tokenize_file(a.ptr, b.ptr, c_or_null(r.inputs, "text"),
                              c_or_null(r.outputs, "corpus")));
}

void exec_score(const Run& r) {
  ModelHandle s, t;
  if (const char* p = c_or_null(r.inputs, "student_model")) check(vocagno_model_load(p, &s.ptr));
  if (const char* p = c_or_null(r.inputs, "teacher_model")) check(vocagno_model_load(p, &t.ptr));
  check(vocagno_score_file(c_or_null(r.inputs, "corpus"), c_or_null(r.outputs, "corpus"), s.ptr,
                           t.ptr));
}

void exec_align(const Run& r) {
  check(vocagno_align_file(c_or_null(r.inputs, "corpus"), c_or_null(r.outputs, "masks"),
                           r.config.at("jobs").get<size_t>()));
}

void exec_metrics(const Run& r) {
  const auto chunks = r.config.at("chunks").get<std::vector<size_t>>();
  check(vocagno_metrics_file(c_or_null(r.inputs, "corpus"), chunks.data(), chunks.size(),
                             c_or_null(r.outputs, "csv"), r.config.at("jobs").get<size_t>()));
}

void exec_select(const Run& r) {
  const auto g = guidance_from(r.config.at("guidance"));
  vocagno_select_summary summary{};
  check(vocagno_select_file(c_or_null(r.inputs, "corpus"), c_or_null(r.outputs, "masks"), &g,
                            r.config.at("batch_docs").get<size_t>(), c_or_null(r.inputs, "mapping"),
                            r.config.at("jobs").get<size_t>(), &summary));
  std::fprintf(stderr, "select: %zu documents, %zu of %zu tokens selected\n", summary.documents,
               summary.selected, summary.tokens);
}

void exec_train_toy(const Run& r) {
  const json& c = r.config;
  vocagno_train_options o;
  vocagno_train_options_default(&o);
  o.text_in = c_or_null(r.inputs, "text");
  o.student_vocab = c_or_null(r.inputs, "student_vocab");
  o.teacher_vocab = c_or_null(r.inputs, "teacher_vocab");
  o.teacher_model = c_or_null(r.inputs, "teacher_model");
  o.objective = lookup(kObjectives, c.at("objective").get<std::string>(), "objective");
  o.guidance = guidance_from(c.at("guidance"));
  o.normalize = lookup(kNormalize, c.at("normalize").get<std::string>(), "normalization");
  o.lambda = c.at("lambda").get<double>();
  o.lr = c.at("lr").get<double>();
  o.steps = c.at("steps").get<size_t>();
  o.batch_size = c.at("batch_size").get<size_t>();
  o.teacher_steps = c.at("teacher_steps").get<size_t>();
  o.teacher_lr = c.at("teacher_lr").get<double>();
  o.teacher_merge_extra = c.at("teacher_merge_extra").get<size_t>();
  o.embed_dim = c.at("embed_dim").get<size_t>();
  o.hidden_dim = c.at("hidden_dim").get<size_t>();
  o.context = c.at("context").get<size_t>();
  o.seed = r.seed.get<uint64_t>();
  o.history_out = c_or_null(r.outputs, "history");
  o.save_student = c_or_null(r.outputs, "student_model");
  o.save_teacher = c_or_null(r.outputs, "teacher_model");
  vocagno_train_summary summary{};
  check(vocagno_train_toy(&o, &summary));
  std::fprintf(stderr, "train-toy: %zu steps, objective %.6f -> %.6f, mean nll %.6f\n",
               summary.steps, summary.initial_objective, summary.final_objective,
               summary.final_mean_nll);
}

void exec_report(const Run& r) {
  check(vocagno_render_report(c_or_null(r.inputs, "csv"), c_or_null(r.outputs, "svg"),
                              c_or_null(r.outputs, "table")));
}

const std::map<std::string, std::function<void(const Run&)>> kExecutors = {
    {"vocab", exec_vocab},     {"tokenize", exec_tokenize},   {"score", exec_score},
    {"align", exec_align},     {"metrics", exec_metrics},     {"select", exec_select},
    {"train-toy", exec_train_toy}, {"report", exec_report}};

// ---- manifests --------------------------------------------------------

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string default_manifest_path(const Run& r) {
  for (const auto& [name, value] : r.outputs.items()) {
    if (value.is_string()) return value.get<std::string>() + ".manifest.json";
  }
  throw UsageError(r.subcommand + ": no output path to attach a manifest to; pass --manifest");
}

void write_manifest(const Run& r, const std::string& started, double elapsed) {
  json m;
  m["format"] = "vocagno.manifest";
  m["subcommand"] = r.subcommand;
  m["config"] = r.config;
  m["inputs"] = r.inputs;
  m["outputs"] = r.outputs;
  m["seed"] = r.seed;
  m["tool_version"] = vocagno_version();
  m["wall_clock"] = {{"started_utc", started}, {"elapsed_seconds", elapsed}};
  const std::string path = r.manifest_path.empty() ? default_manifest_path(r) : r.manifest_path;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ApiError(VOCAGNO_ERR_IO, "Io: cannot write manifest " + path);
  out << m.dump(2) << '\n';
  if (!out.flush()) throw ApiError(VOCAGNO_ERR_IO, "Io: cannot write manifest " + path);
}

Run read_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ApiError(VOCAGNO_ERR_IO, "Io: cannot open manifest " + path);
  json m;
  try {
    in >> m;
    Run r;
    if (m.at("format").get<std::string>() != "vocagno.manifest") throw UsageError("bad format");
    r.subcommand = m.at("subcommand").get<std::string>();
    r.config = m.at("config");
    r.inputs = m.at("inputs");
    r.outputs = m.at("outputs");
    r.seed = m.at("seed");
    r.manifest_path = path;
    if (!kExecutors.count(r.subcommand)) throw UsageError("unknown subcommand " + r.subcommand);
    return r;
  } catch (const json::exception& e) {
    throw UsageError("invalid manifest " + path + ": " + e.what());
  } catch (const UsageError& e) {
    throw UsageError("invalid manifest " + path + ": " + e.what());
  }
}

void execute(const Run& r) {
  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  kExecutors.at(r.subcommand)(r);
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
  write_manifest(r, started, dt.count());
}

uint64_t resolve_seed(uint64_t flag_value) {
  const char* env = std::getenv("VOCAGNO_SEED");
  if (!env || !*env) return flag_value;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (errno != 0 || *end != '\0' || env[0] == '-') {
    throw UsageError(std::string("VOCAGNO_SEED is not an unsigned integer: '") + env + "'");
  }
  return v;
}

// ---- flags ------------------------------------------------------------

struct GuidanceFlags {
  std::string phi = "max";
  std::string unmapped = "include";
  double keep = 0.4;
  std::string scope;
  std::string order = "largest";

  void add(CLI::App* app, const std::string& default_scope) {
    scope = default_scope;
    app->add_option("--phi", phi, "teacher loss aggregation")
        ->check(CLI::IsMember(keys(kPhis)))->capture_default_str();
    app->add_option("--unmapped", unmapped, "strategy for student tokens with no teacher")
        ->check(CLI::IsMember(keys(kUnmapped)))->capture_default_str();
    app->add_option("--keep", keep, "fraction of competing tokens kept")
        ->check(CLI::Range(0.0, 1.0))->capture_default_str();
    app->add_option("--scope", scope, "ranking scope")
        ->check(CLI::IsMember(keys(kScopes)))->capture_default_str();
    app->add_option("--order", order, "which end of the excess-loss ranking is kept")
        ->check(CLI::IsMember(keys(kOrders)))->capture_default_str();
  }
  json to_json() const {
    return {{"phi", phi}, {"unmapped", unmapped}, {"keep", keep}, {"scope", scope}, {"order", order}};
  }
};

struct Flags {
  // shared
  size_t jobs = 1;
  std::string manifest;
  uint64_t seed = 0;
  // paths
  std::string text_in, out, corpus, vocab_a, vocab_b, student_model, teacher_model, mapping;
  std::string student_vocab, teacher_vocab, history, save_student, save_teacher;
  std::string csv, svg, table, rerun_manifest;
  // vocab
  std::string kind = "char";
  size_t size = 0;
  // metrics
  std::vector<size_t> chunks = {8, 16, 32, 64};
  // select / train-toy
  GuidanceFlags select_guidance, train_guidance;
  size_t batch_docs = 8;
  std::string objective = "selective";
  std::string normalize = "selected";
  double lambda = -1.0;
  double lr = 0.5;
  size_t steps = 200;
  size_t batch_size = 0;
  size_t teacher_steps = 300;
  double teacher_lr = 0.5;
  size_t teacher_extra = 24;
  size_t embed_dim = 8;
  size_t hidden_dim = 32;
  size_t context = 3;
};

void add_common(CLI::App* app, Flags& f, bool jobs) {
  app->add_option("--manifest", f.manifest, "manifest path (default: <output>.manifest.json)");
  if (jobs) {
    app->add_option("--jobs", f.jobs, "maximum worker threads")
        ->check(CLI::PositiveNumber)->capture_default_str();
  }
}

Run build_run(const std::string& name, const Flags& f) {
  Run r;
  r.subcommand = name;
  r.manifest_path = f.manifest;
  if (name == "vocab") {
    r.config = {{"kind", f.kind}, {"size", f.size}};
    r.inputs = {{"text", abs_path(f.text_in)}};
    r.outputs = {{"vocab", abs_path(f.out)}};
    r.seed = resolve_seed(f.seed);
  } else if (name == "tokenize") {
    r.inputs = {{"vocab_a", abs_path(f.vocab_a)}, {"vocab_b", abs_path(f.vocab_b)},
                {"text", abs_path(f.text_in)}};
    r.outputs = {{"corpus", abs_path(f.out)}};
  } else if (name == "score") {
    if (f.student_model.empty() && f.teacher_model.empty()) {
      throw UsageError("score: pass --student-model and/or --teacher-model");
    }
    r.inputs = {{"corpus", abs_path(f.corpus)}, {"student_model", path_or_null(f.student_model)},
                {"teacher_model", path_or_null(f.teacher_model)}};
    r.outputs = {{"corpus", abs_path(f.out)}};
  } else if (name == "align") {
    r.config = {{"jobs", f.jobs}};
    r.inputs = {{"corpus", abs_path(f.corpus)}};
    r.outputs = {{"masks", abs_path(f.out)}};
  } else if (name == "metrics") {
    r.config = {{"chunks", f.chunks}, {"jobs", f.jobs}};
    r.inputs = {{"corpus", abs_path(f.corpus)}};
    r.outputs = {{"csv", abs_path(f.out)}};
  } else if (name == "select") {
    r.config = {{"guidance", f.select_guidance.to_json()}, {"batch_docs", f.batch_docs},
                {"jobs", f.jobs}};
    r.inputs = {{"corpus", abs_path(f.corpus)}, {"mapping", path_or_null(f.mapping)}};
    r.outputs = {{"masks", abs_path(f.out)}};
  } else if (name == "train-toy") {
    if (f.history.empty() && f.save_student.empty()) {
      throw UsageError("train-toy: pass --history and/or --save-student");
    }
    const double lambda = f.lambda >= 0.0 ? f.lambda : (f.objective == "kld" ? 1.0 : 0.5);
    r.config = {{"objective", f.objective},
                {"guidance", f.train_guidance.to_json()},
                {"normalize", f.normalize},
                {"lambda", lambda},
                {"lr", f.lr},
                {"steps", f.steps},
                {"batch_size", f.batch_size},
                {"teacher_steps", f.teacher_steps},
                {"teacher_lr", f.teacher_lr},
                {"teacher_merge_extra", f.teacher_extra},
                {"embed_dim", f.embed_dim},
                {"hidden_dim", f.hidden_dim},
                {"context", f.context}};
    r.inputs = {{"text", abs_path(f.text_in)},
                {"student_vocab", path_or_null(f.student_vocab)},
                {"teacher_vocab", path_or_null(f.teacher_vocab)},
                {"teacher_model", path_or_null(f.teacher_model)}};
    r.outputs = {{"history", path_or_null(f.history)},
                 {"student_model", path_or_null(f.save_student)},
                 {"teacher_model",
                  f.teacher_model.empty() ? path_or_null(f.save_teacher) : json(nullptr)}};
    r.seed = resolve_seed(f.seed);
  } else if (name == "report") {
    r.inputs = {{"csv", abs_path(f.csv)}};
    r.outputs = {{"svg", abs_path(f.svg)}, {"table", abs_path(f.table)}};
  } else {
    throw UsageError("unknown subcommand " + name);
  }
  return r;
}

int run_main(int argc, char** argv) {
  CLI::App app{"Vocabulary-agnostic token alignment and teacher-guided token selection"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(vocagno_version()));
  Flags f;

  auto* vocab = app.add_subcommand("vocab", "train a toy vocabulary from text");
  vocab->add_option("--kind", f.kind, "vocabulary kind")
      ->check(CLI::IsMember(keys(kVocabKinds)))->capture_default_str();
  vocab->add_option("--text-in", f.text_in, "text, one document per line")->required();
  vocab->add_option("--size", f.size, "target size for greedy_merge (0: chars + 24)");
  vocab->add_option("--seed", f.seed, "seed (VOCAGNO_SEED overrides)")->capture_default_str();
  vocab->add_option("--out", f.out, "vocabulary JSON")->required();
  add_common(vocab, f, false);

  auto* tokenize = app.add_subcommand("tokenize", "tokenize text under two vocabularies");
  tokenize->add_option("--vocab-a", f.vocab_a, "student vocabulary")->required();
  tokenize->add_option("--vocab-b", f.vocab_b, "teacher vocabulary")->required();
  tokenize->add_option("--text-in", f.text_in, "text, one document per line")->required();
  tokenize->add_option("--out", f.out, "JSONL corpus")->required();
  add_common(tokenize, f, false);

  auto* score = app.add_subcommand("score", "attach per-token toy-model losses to a corpus");
  score->add_option("--corpus", f.corpus, "JSONL corpus")->required();
  score->add_option("--student-model", f.student_model, "student model JSON");
  score->add_option("--teacher-model", f.teacher_model, "teacher model JSON");
  score->add_option("--out", f.out, "JSONL corpus with losses")->required();
  add_common(score, f, false);

  auto* align = app.add_subcommand("align", "align student tokens to teacher tokens");
  align->add_option("--corpus", f.corpus, "JSONL corpus")->required();
  align->add_option("--out", f.out, "JSONL masks")->required();
  add_common(align, f, true);

  auto* metrics = app.add_subcommand("metrics", "IoU/IoS of chunking and token-level alignment");
  metrics->add_option("--corpus", f.corpus, "JSONL corpus")->required();
  metrics->add_option("--chunks", f.chunks, "comma-separated chunk counts")
      ->delimiter(',')->check(CLI::PositiveNumber)->capture_default_str();
  metrics->add_option("--out", f.out, "CSV")->required();
  add_common(metrics, f, true);

  auto* select = app.add_subcommand("select", "token selection masks from teacher losses");
  select->add_option("--corpus", f.corpus, "JSONL corpus with student and teacher losses")
      ->required();
  f.select_guidance.add(select, "sequence");
  select->add_option("--batch-docs", f.batch_docs, "documents per batch scope")
      ->check(CLI::PositiveNumber)->capture_default_str();
  select->add_option("--mapping", f.mapping, "reuse mappings from an align output");
  select->add_option("--out", f.out, "JSONL masks")->required();
  add_common(select, f, true);

  auto* train = app.add_subcommand("train-toy", "train the toy student under an objective");
  train->add_option("--text-in", f.text_in, "text, one document per line")->required();
  train->add_option("--objective", f.objective, "training objective")
      ->check(CLI::IsMember(keys(kObjectives)))->capture_default_str();
  train->add_option("--student-vocab", f.student_vocab, "student vocabulary (default: char)");
  train->add_option("--teacher-vocab", f.teacher_vocab,
                    "teacher vocabulary (default: greedy_merge)");
  train->add_option("--teacher-model", f.teacher_model, "pretrained teacher model");
  f.train_guidance.add(train, "batch");
  train->add_option("--normalize", f.normalize, "selective loss denominator")
      ->check(CLI::IsMember(keys(kNormalize)))->capture_default_str();
  train->add_option("--lambda", f.lambda, "distillation weight (default: 1 for kld, 0.5 for uld)");
  train->add_option("--lr", f.lr, "learning rate")->capture_default_str();
  train->add_option("--steps", f.steps, "gradient steps")->capture_default_str();
  train->add_option("--batch-size", f.batch_size, "documents per step (0: all)")
      ->capture_default_str();
  train->add_option("--teacher-steps", f.teacher_steps, "teacher training steps")
      ->capture_default_str();
  train->add_option("--teacher-lr", f.teacher_lr, "teacher learning rate")->capture_default_str();
  train->add_option("--teacher-extra", f.teacher_extra, "merges beyond the teacher char set")
      ->capture_default_str();
  train->add_option("--embed-dim", f.embed_dim)->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--hidden-dim", f.hidden_dim)->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--context", f.context)->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--seed", f.seed, "seed (VOCAGNO_SEED overrides)")->capture_default_str();
  train->add_option("--history", f.history, "per-step CSV");
  train->add_option("--save-student", f.save_student, "trained student model JSON");
  train->add_option("--save-teacher", f.save_teacher, "trained teacher model JSON");
  add_common(train, f, false);

  auto* report = app.add_subcommand("report", "render a metrics CSV as a chart and a table");
  report->add_option("--metrics", f.csv, "CSV from metrics")->required();
  report->add_option("--svg", f.svg, "SVG chart")->required();
  report->add_option("--table", f.table, "text table")->required();
  add_common(report, f, false);

  auto* rerun = app.add_subcommand("rerun", "replay a run from its manifest");
  rerun->add_option("manifest", f.rerun_manifest, "manifest JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  CLI::App* chosen = app.get_subcommands().front();
  if (chosen == rerun) {
    execute(read_manifest(f.rerun_manifest));
  } else {
    execute(build_run(chosen->get_name(), f));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_main(argc, argv);
  } catch (const ApiError& e) {
    std::cerr << "vocagno: " << e.what() << '\n';
    return vocagno_exit_code(e.status);
  } catch (const UsageError& e) {
    std::cerr << "vocagno: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "vocagno: internal error: " << e.what() << '\n';
    return 2;
  }
}
