// Copyright 2026 The textbleach Authors
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
//
// End-to-end checks of the command-line tool via subprocesses.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using testutil::run_command;

namespace {

std::string cli() { return std::string(TEXTBLEACH_CLI_PATH); }

// One small synthetic workspace shared by the pipeline tests.
const fs::path& workspace() {
    static fs::path dir = [] {
        fs::path d = testutil::scratch_dir("cli_ws");
        auto r = run_command(cli() + " synth --out=" + d.string() +
                             " --users=20 --tweets=10 --seed=42");
        REQUIRE(r.exit_code == 0);
        return d;
    }();
    return dir;
}

}  // namespace

TEST_CASE("version and help") {
    auto r = run_command(cli() + " --version");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("textbleach") != std::string::npos);
    CHECK(run_command(cli() + " --help").exit_code == 0);
    CHECK(run_command(cli() + " train --help").exit_code == 0);
}

TEST_CASE("bad invocations exit 1") {
    CHECK(run_command(cli()).exit_code == 1);  // subcommand required
    CHECK(run_command(cli() + " frobnicate").exit_code == 1);
    auto r = run_command(cli() + " train --no-such-flag");
    CHECK(r.exit_code == 1);
    CHECK(!r.err.empty());  // usage message
    // validation failures exit 1 too
    CHECK(run_command(cli() + " synth --out=/tmp/tb_cli_badusers --users=7")
              .exit_code == 1);
}

TEST_CASE("missing inputs exit 2") {
    auto r = run_command(cli() + " cv --corpus=/nonexistent/x.jsonl");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("error") != std::string::npos);
    CHECK(run_command(cli() +
                      " predict --model=/nonexistent/m --corpus=/nonexistent/"
                      "c.jsonl --out=/tmp/tb_cli_p.tsv")
              .exit_code == 2);
}

TEST_CASE("bleach filters stdin") {
    auto r = run_command("printf 'Hello there!\\n' | " + cli() +
                         " bleach --channels=shape,vowels");
    CHECK(r.exit_code == 0);
    CHECK(r.out ==
          "shape\tULL LLX\n"
          "vowels\tCVCCV CCVCVO\n");

    // frequency channel needs a table
    auto missing = run_command("printf 'hi\\n' | " + cli() +
                               " bleach --channels=freq");
    CHECK(missing.exit_code == 1);

    fs::path table = fs::temp_directory_path() / "tb_cli_freq.json";
    testutil::write_file(table, "{\"hi\": 120}\n");
    auto with = run_command("printf 'hi you\\n' | " + cli() +
                            " bleach --channels=freq --freq-table=" +
                            table.string());
    CHECK(with.exit_code == 0);
    CHECK(with.out == "freq\t3 0\n");
}

TEST_CASE("synth writes corpora plus manifest") {
    const fs::path& ws = workspace();
    for (const char* name : {"xa.jsonl", "xb.jsonl", "xc.jsonl"}) {
        CHECK(fs::exists(ws / name));
    }
    fs::path manifest = ws / "manifest.json";
    REQUIRE(fs::exists(manifest));
    nlohmann::json j = nlohmann::json::parse(testutil::read_file(manifest));
    CHECK(j["command"] == "synth");
    CHECK(j["seed"] == 42);
    CHECK(j["tool_version"].get<std::string>().find("textbleach") == 0);
    CHECK(j.contains("flags"));
    CHECK(j.contains("inputs"));
    CHECK(j.contains("started"));
    CHECK(j.contains("finished"));
}

TEST_CASE("train predict evaluate pipeline") {
    const fs::path& ws = workspace();
    fs::path model = ws / "xa.model";
    auto train = run_command(cli() + " train --mode=abstract --channels=all" +
                             " --ngrams=1:3 --corpus=" +
                             (ws / "xa.jsonl").string() +
                             " --out=" + model.string() + " --seed=42");
    CHECK(train.exit_code == 0);
    CHECK(fs::exists(model));
    CHECK(fs::exists(ws / "xa.model.manifest.json"));

    fs::path pred = ws / "xa.pred.tsv";
    auto predict = run_command(cli() + " predict --model=" + model.string() +
                               " --corpus=" + (ws / "xa.jsonl").string() +
                               " --out=" + pred.string());
    CHECK(predict.exit_code == 0);
    std::string tsv = testutil::read_file(pred);
    CHECK(tsv.rfind("user_id\tpredicted\n", 0) == 0);
    // one row per user (20) plus header
    CHECK(std::count(tsv.begin(), tsv.end(), '\n') == 21);

    auto evaluate = run_command(cli() + " evaluate --model=" + model.string() +
                                " --corpus=" + (ws / "xa.jsonl").string());
    CHECK(evaluate.exit_code == 0);
    CHECK(evaluate.out.rfind("experiment\tsource\ttarget\taccuracy\n", 0) ==
          0);
    CHECK(evaluate.out.find("evaluate\txa\txa\t") != std::string::npos);
}

TEST_CASE("cv results are byte identical across reruns") {
    const fs::path& ws = workspace();
    std::string cmd = cli() + " cv --corpus=" + (ws / "xa.jsonl").string() +
                      " --folds=4 --ngrams=1:2 --seed=7";
    auto r1 = run_command(cmd + " --out=" + (ws / "cv1.tsv").string());
    auto r2 = run_command(cmd + " --out=" + (ws / "cv2.tsv").string());
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r2.exit_code == 0);
    std::string t1 = testutil::read_file(ws / "cv1.tsv");
    CHECK(t1 == testutil::read_file(ws / "cv2.tsv"));
    CHECK(t1.rfind("experiment\tsource\ttarget\taccuracy\n", 0) == 0);
    CHECK(t1.find("cv-fold1\txa\txa\t") != std::string::npos);
    CHECK(t1.find("\ncv\txa\txa\t") != std::string::npos);

    // the seed matters
    auto r3 = run_command(cli() + " cv --corpus=" +
                          (ws / "xa.jsonl").string() +
                          " --folds=4 --ngrams=1:2 --seed=8 --out=" +
                          (ws / "cv3.tsv").string());
    REQUIRE(r3.exit_code == 0);
    // (fold shuffles differ; identical accuracies are possible but the
    // command itself must still succeed)
}

TEST_CASE("xlang writes pair rows and a summary") {
    const fs::path& ws = workspace();
    fs::path out = ws / "xlang.tsv";
    auto r = run_command(cli() + " xlang --setting=avg --train=" +
                         (ws / "xa.jsonl").string() + "," +
                         (ws / "xb.jsonl").string() +
                         " --test=" + (ws / "xc.jsonl").string() +
                         " --mode=abstract --ngrams=1:3 --seed=42 --out=" +
                         out.string());
    REQUIRE(r.exit_code == 0);
    std::string tsv = testutil::read_file(out);
    CHECK(tsv.find("xlang-avg-pair\txa\txc\t") != std::string::npos);
    CHECK(tsv.find("xlang-avg-pair\txb\txc\t") != std::string::npos);
    CHECK(tsv.find("xlang-avg\txa+xb\txc\t") != std::string::npos);
    CHECK(fs::exists(ws / "xlang.tsv.manifest.json"));

    // the target language may not appear among the sources
    auto leaky = run_command(cli() + " xlang --setting=avg --train=" +
                             (ws / "xa.jsonl").string() +
                             " --test=" + (ws / "xa.jsonl").string());
    CHECK(leaky.exit_code == 1);
}

TEST_CASE("kappa prints the statistic") {
    fs::path ratings = fs::temp_directory_path() / "tb_cli_ratings.tsv";
    testutil::write_file(ratings,
                         "item_id\trater_id\tlabel\n"
                         "i1\tr1\tF\n"
                         "i1\tr2\tF\n"
                         "i1\tr3\tM\n"
                         "i2\tr1\tM\n"
                         "i2\tr2\tM\n"
                         "i2\tr3\tF\n");
    auto r = run_command(cli() + " kappa --ratings=" + ratings.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out == "kappa\t-0.333333\n");
}

TEST_CASE("align fits a matrix between toy embedding files") {
    fs::path dir = testutil::scratch_dir("cli_align");
    auto synth = run_command(cli() + " synth --out=" + dir.string() +
                             " --users=10 --tweets=10 --seed=1 --emb-dim=4");
    REQUIRE(synth.exit_code == 0);
    REQUIRE(fs::exists(dir / "xa.vec"));
    fs::path out = dir / "xa_to_xb.mat";
    auto r = run_command(cli() + " align --src=" + (dir / "xa.vec").string() +
                         " --tgt=" + (dir / "xb.vec").string() +
                         " --out=" + out.string());
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(out));
    CHECK(r.out.find("aligned d=4") != std::string::npos);
    std::string matrix = testutil::read_file(out);
    CHECK(matrix.rfind("4\n", 0) == 0);
}

TEST_CASE("BLEACH_SEED provides the default seed") {
    const fs::path& ws = workspace();
    fs::path out = ws / "env_seed.model";
    auto r = run_command("BLEACH_SEED=7 " + cli() + " train --corpus=" +
                         (ws / "xb.jsonl").string() + " --ngrams=1:2" +
                         " --out=" + out.string());
    REQUIRE(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(
        testutil::read_file(ws / "env_seed.model.manifest.json"));
    CHECK(j["seed"] == 7);

    // an explicit flag wins over the environment
    auto r2 = run_command("BLEACH_SEED=7 " + cli() + " train --corpus=" +
                          (ws / "xb.jsonl").string() + " --ngrams=1:2" +
                          " --seed=9 --out=" + out.string());
    REQUIRE(r2.exit_code == 0);
    j = nlohmann::json::parse(
        testutil::read_file(ws / "env_seed.model.manifest.json"));
    CHECK(j["seed"] == 9);

    // garbage in the environment is a validation error
    CHECK(run_command("BLEACH_SEED=banana " + cli() + " train --corpus=" +
                      (ws / "xb.jsonl").string() + " --out=" + out.string())
              .exit_code == 1);
}

TEST_CASE("features subcommand aggregates saved models") {
    const fs::path& ws = workspace();
    std::string models;
    for (const char* code : {"xa", "xb"}) {
        fs::path model = ws / (std::string(code) + "_feat.model");
        auto r = run_command(cli() + " train --corpus=" +
                             (ws / (std::string(code) + ".jsonl")).string() +
                             " --ngrams=1:2 --seed=3 --out=" + model.string());
        REQUIRE(r.exit_code == 0);
        if (!models.empty()) models += ',';
        models += model.string();
    }
    fs::path out = ws / "features.tsv";
    auto r = run_command(cli() + " features --models=" + models +
                         " --k=5 --out=" + out.string());
    REQUIRE(r.exit_code == 0);
    std::string tsv = testutil::read_file(out);
    CHECK(tsv.rfind("gender\trank\tfeature\tscore\tmean_abs_weight\n", 0) ==
          0);
    CHECK(tsv.find("\nF\t1\t") != std::string::npos);
    CHECK(tsv.find("\nM\t1\t") != std::string::npos);
}
