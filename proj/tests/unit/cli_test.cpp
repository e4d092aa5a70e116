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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;

struct Result {
  int exit_code;
  std::string output;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / "vocagno_cli_test";
    fs::create_directories(dir_);
    unsetenv("VOCAGNO_SEED");
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  Result run(const std::string& args, const std::string& env = "") const {
    const std::string log = path("out.log");
    const std::string cmd = env + " \"" VOCAGNO_CLI_PATH "\" " + args + " >\"" + log + "\" 2>&1";
    const int rc = std::system(cmd.c_str());
    return {WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, slurp(log)};
  }
  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
  }
  fs::path dir_;
};

TEST_F(Cli, EmptyInputGivesEmptyOutput) {
  write("empty.txt", "");
  ASSERT_EQ(run("vocab --text-in " VOCAGNO_FIXTURE_TEXT " --out " + path("v.json")).exit_code, 0);
  const Result r = run("tokenize --vocab-a " + path("v.json") + " --vocab-b " + path("v.json") +
                       " --text-in " + path("empty.txt") + " --out " + path("e.jsonl"));
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_EQ(fs::file_size(path("e.jsonl")), 0u);
  EXPECT_TRUE(fs::exists(path("e.jsonl.manifest.json")));
}

TEST_F(Cli, InvalidVocabNamesTheFile) {
  write("bad.json", "{not json");
  const Result r = run("tokenize --vocab-a " + path("bad.json") + " --vocab-b " + path("bad.json") +
                       " --text-in " VOCAGNO_FIXTURE_TEXT " --out " + path("x.jsonl"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find(path("bad.json")), std::string::npos) << r.output;
}

TEST_F(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run("").exit_code, 1);
  EXPECT_EQ(run("frobnicate").exit_code, 1);
  EXPECT_EQ(run("select --corpus x --out y --keep 1.5").exit_code, 1);
  EXPECT_EQ(run("select --corpus x --out y --phi median").exit_code, 1);
  EXPECT_EQ(run("align --corpus " + path("missing.jsonl") + " --out " + path("a.jsonl")).exit_code, 1);
  EXPECT_EQ(run("--help").exit_code, 0);
  EXPECT_EQ(run("--version").exit_code, 0);
}

TEST_F(Cli, OffsetViolationExitsOne) {
  write("bad.jsonl",
        R"({"doc_id":"d","text_len":3,"student":{"tokens":[{"id":0,"st":0,"ed":2},{"id":0,"st":1,"ed":3}]},"teacher":{"tokens":[]}})"
        "\n");
  const Result r = run("align --corpus " + path("bad.jsonl") + " --out " + path("a.jsonl"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("OffsetViolation"), std::string::npos) << r.output;
}

TEST_F(Cli, SeedEnvironmentOverrideIsRecorded) {
  const Result r = run("vocab --kind merge --text-in " VOCAGNO_FIXTURE_TEXT " --seed 3 --out " +
                           path("m.json"),
                       "VOCAGNO_SEED=77");
  ASSERT_EQ(r.exit_code, 0) << r.output;
  nlohmann::json m;
  std::ifstream(path("m.json.manifest.json")) >> m;
  EXPECT_EQ(m.at("seed").get<uint64_t>(), 77u);
  EXPECT_EQ(m.at("subcommand"), "vocab");
  EXPECT_TRUE(m.at("wall_clock").contains("elapsed_seconds"));
  EXPECT_TRUE(m.contains("tool_version"));
  EXPECT_EQ(run("vocab --text-in " VOCAGNO_FIXTURE_TEXT " --out " + path("m.json"),
                "VOCAGNO_SEED=abc")
                .exit_code,
            1);
}

TEST_F(Cli, KldAcrossVocabulariesExitsOne) {
  ASSERT_EQ(run("vocab --kind char --text-in " VOCAGNO_FIXTURE_TEXT " --out " + path("s.json")).exit_code, 0);
  ASSERT_EQ(run("vocab --kind merge --text-in " VOCAGNO_FIXTURE_TEXT " --out " + path("t.json")).exit_code, 0);
  const Result r = run("train-toy --objective kld --steps 2 --teacher-steps 2 --text-in " VOCAGNO_FIXTURE_TEXT
                       " --student-vocab " + path("s.json") + " --teacher-vocab " + path("t.json") +
                       " --history " + path("h.csv"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("VocabMismatch"), std::string::npos) << r.output;
}

TEST_F(Cli, BadManifestExitsOne) {
  write("m.json", R"({"format":"something-else"})");
  EXPECT_EQ(run("rerun " + path("m.json")).exit_code, 1);
  EXPECT_EQ(run("rerun " + path("nope.json")).exit_code, 1);
}

}  // namespace
