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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <string>
#include <vector>

#include "textbleach/error.hpp"
#include "textbleach/eval.hpp"
#include "textbleach/rng.hpp"
#include "textbleach/synth.hpp"
#include "test_util.hpp"

using namespace textbleach;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config(std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.spec = FeatureSpec::abstract_defaults();
    cfg.spec.token_ngrams = {1, 3};
    cfg.tweets_per_user = 50;
    cfg.folds = 5;
    cfg.seed = seed;
    cfg.trainer.seed = seed;
    return cfg;
}

Corpus small_synth(const std::string& code, SynthProfile profile, int users,
                   std::uint64_t seed) {
    SynthConfig cfg;
    cfg.profile = profile;
    cfg.users = users;
    cfg.tweets = 20;
    cfg.seed = seed;
    return synth_corpus(synth_language(code), cfg);
}

std::vector<std::vector<int>> random_table(Rng& rng, int items, int cats,
                                           int raters) {
    std::vector<std::vector<int>> counts(items, std::vector<int>(cats, 0));
    for (int i = 0; i < items; ++i) {
        for (int r = 0; r < raters; ++r) {
            counts[i][static_cast<int>(rng.below(cats))]++;
        }
    }
    return counts;
}

}  // namespace

TEST_CASE("accuracy") {
    std::vector<Gender> pred = {Gender::F, Gender::M, Gender::F, Gender::F};
    std::vector<Gender> gold = {Gender::F, Gender::M, Gender::M, Gender::F};
    CHECK(accuracy(pred, gold) == 0.75);
    std::vector<Gender> shorter = {Gender::F};
    CHECK_THROWS_AS(accuracy(pred, shorter), ValidationError);
    std::vector<Gender> empty;
    CHECK_THROWS_AS(accuracy(empty, empty), ValidationError);
}

TEST_CASE("fleiss kappa hand cases") {
    // perfect agreement, chance < 1
    std::vector<std::vector<int>> perfect = {{3, 0}, {0, 3}};
    CHECK(fleiss_kappa(perfect, 3) == 1.0);

    // the classic small case: kappa = -1/3
    std::vector<std::vector<int>> mixed = {{2, 1}, {1, 2}};
    CHECK(std::abs(fleiss_kappa(mixed, 3) - (-1.0 / 3.0)) < 1e-12);

    // everyone picks one category everywhere: chance agreement is 1
    std::vector<std::vector<int>> unanimous_same = {{3, 0}, {3, 0}};
    bool degenerate = false;
    CHECK(fleiss_kappa(unanimous_same, 3, &degenerate) == 1.0);
    CHECK(degenerate);

    degenerate = true;
    fleiss_kappa(perfect, 3, &degenerate);
    CHECK_FALSE(degenerate);
}

TEST_CASE("fleiss kappa validates its table") {
    std::vector<std::vector<int>> ok = {{2, 1}, {1, 2}};
    CHECK_THROWS_AS(fleiss_kappa(ok, 1), ValidationError);     // raters < 2
    CHECK_THROWS_AS(fleiss_kappa(ok, 4), ValidationError);     // row sums
    std::vector<std::vector<int>> ragged = {{2, 1}, {3}};
    CHECK_THROWS_AS(fleiss_kappa(ragged, 3), ValidationError);
    std::vector<std::vector<int>> negative = {{4, -1}, {2, 1}};
    CHECK_THROWS_AS(fleiss_kappa(negative, 3), ValidationError);
    std::vector<std::vector<int>> empty;
    CHECK_THROWS_AS(fleiss_kappa(empty, 3), ValidationError);
    std::vector<std::vector<int>> one_cat = {{3}, {3}};
    CHECK_THROWS_AS(fleiss_kappa(one_cat, 3), ValidationError);
}

TEST_CASE("fleiss kappa is invariant under category relabeling") {
    Rng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const int items = 2 + static_cast<int>(rng.below(8));
        const int cats = 2 + static_cast<int>(rng.below(4));
        const int raters = 2 + static_cast<int>(rng.below(5));
        auto counts = random_table(rng, items, cats, raters);

        std::vector<int> perm(cats);
        std::iota(perm.begin(), perm.end(), 0);
        rng.shuffle(perm);
        std::vector<std::vector<int>> relabeled(items,
                                                std::vector<int>(cats, 0));
        for (int i = 0; i < items; ++i) {
            for (int c = 0; c < cats; ++c) {
                relabeled[i][perm[c]] = counts[i][c];
            }
        }

        bool d1 = false, d2 = false;
        double k1 = fleiss_kappa(counts, raters, &d1);
        double k2 = fleiss_kappa(relabeled, raters, &d2);
        CHECK(std::abs(k1 - k2) < 1e-12);
        CHECK(d1 == d2);
    }
}

TEST_CASE("ratings loader builds the count table") {
    fs::path path = fs::temp_directory_path() / "tb_ratings.tsv";
    testutil::write_file(path,
                         "item_id\trater_id\tlabel\n"
                         "i2\tr1\tyes\n"
                         "i1\tr1\tyes\n"
                         "i1\tr2\tno\n"
                         "i1\tr3\tyes\n"
                         "i2\tr2\tno\n"
                         "i2\tr3\tno\n");
    RatingsTable t = load_ratings(path);
    CHECK(t.items == std::vector<std::string>{"i1", "i2"});
    CHECK(t.categories == std::vector<std::string>{"no", "yes"});
    CHECK(t.raters == 3);
    REQUIRE(t.counts.size() == 2);
    CHECK(t.counts[0] == std::vector<int>{1, 2});  // i1: one no, two yes
    CHECK(t.counts[1] == std::vector<int>{2, 1});

    // and the kappa for this table matches the hand case
    CHECK(std::abs(fleiss_kappa(t.counts, t.raters) - (-1.0 / 3.0)) < 1e-12);
}

TEST_CASE("ratings loader rejects bad input") {
    fs::path path = fs::temp_directory_path() / "tb_ratings_bad.tsv";

    testutil::write_file(path, "");
    CHECK_THROWS_AS(load_ratings(path), ParseError);

    testutil::write_file(path, "item_id\trater_id\tlabel\n");
    CHECK_THROWS_AS(load_ratings(path), ValidationError);  // no rows

    testutil::write_file(path,
                         "item_id\trater_id\tlabel\n"
                         "i1\tr1\n");
    CHECK_THROWS_AS(load_ratings(path), ParseError);

    testutil::write_file(path,
                         "item_id\trater_id\tlabel\n"
                         "i1\tr1\tyes\n"
                         "i1\tr1\tno\n");  // duplicate (item, rater)
    CHECK_THROWS_AS(load_ratings(path), ValidationError);

    testutil::write_file(path,
                         "item_id\trater_id\tlabel\n"
                         "i1\tr1\tyes\n"
                         "i1\tr2\tyes\n"
                         "i2\tr1\tyes\n");  // unequal rating counts
    CHECK_THROWS_AS(load_ratings(path), ValidationError);

    CHECK_THROWS_AS(load_ratings("/nonexistent/r.tsv"), IoError);
}

TEST_CASE("results tsv format is pinned") {
    std::vector<ResultRow> rows = {{"cv", "nl", "nl", 0.75},
                                   {"xlang-avg", "en+fr", "nl", 0.5}};
    CHECK(results_to_tsv(rows) ==
          "experiment\tsource\ttarget\taccuracy\n"
          "cv\tnl\tnl\t0.750\n"
          "xlang-avg\ten+fr\tnl\t0.500\n");
    std::string pretty = results_to_pretty(rows);
    CHECK(pretty.find("0.750") != std::string::npos);
    CHECK(pretty.find('\t') == std::string::npos);
}

TEST_CASE("experiment config validation") {
    ExperimentConfig cfg;
    cfg.folds = 1;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = ExperimentConfig{};
    cfg.tweets_per_user = 0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = ExperimentConfig{};
    cfg.trainer.C = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    CHECK_NOTHROW(ExperimentConfig{}.validate());
}

TEST_CASE("provenance hygiene check") {
    std::vector<std::string> fitted = {"u1", "u2", "u3"};
    std::vector<std::string> clean = {"u4", "u5"};
    CHECK_NOTHROW(assert_disjoint_provenance(fitted, clean));
    std::vector<std::string> dirty = {"u4", "u2"};
    CHECK_THROWS_AS(assert_disjoint_provenance(fitted, dirty), HygieneError);
}

TEST_CASE("fit model records provenance and predicts") {
    Corpus corpus = small_synth("xa", SynthProfile::InLanguage, 20, 7);
    ExperimentConfig cfg = small_config(7);

    std::vector<std::size_t> train(corpus.users.size() - 4);
    std::iota(train.begin(), train.end(), 0);
    LinearModel model = fit_model(corpus, train, cfg);
    CHECK(model.language == "xa");
    CHECK(model.vocab.source_users.size() == train.size());
    REQUIRE(model.freq.has_value());
    CHECK(model.freq->source_users == model.vocab.source_users);

    std::vector<std::size_t> test = {corpus.users.size() - 4,
                                     corpus.users.size() - 3,
                                     corpus.users.size() - 2,
                                     corpus.users.size() - 1};
    std::vector<Gender> pred = predict_users(model, corpus, test);
    CHECK(pred.size() == test.size());

    // the held-out users must not be in the model's provenance
    std::vector<std::string> test_ids;
    for (std::size_t idx : test) test_ids.push_back(corpus.users[idx].user_id);
    CHECK_NOTHROW(
        assert_disjoint_provenance(model.vocab.source_users, test_ids));
}

TEST_CASE("cross validation on a separable corpus") {
    Corpus corpus = small_synth("xa", SynthProfile::InLanguage, 40, 11);
    ExperimentConfig cfg = small_config(11);
    cfg.spec = FeatureSpec::lexical_defaults();
    CvResult r = run_cv(corpus, cfg);
    REQUIRE(r.fold_accuracies.size() == 5);
    double sum = 0.0;
    for (double a : r.fold_accuracies) sum += a;
    CHECK(r.mean == doctest::Approx(sum / 5.0).epsilon(1e-12));
    CHECK(r.mean > 0.9);  // strong planted lexical signal

    // unbalanced corpora are rejected
    Corpus lopsided = corpus;
    lopsided.users.pop_back();
    CHECK_THROWS_AS(run_cv(lopsided, cfg), ValidationError);
}

TEST_CASE("cross-lingual runners") {
    Corpus xa = small_synth("xa", SynthProfile::CrossLingual, 30, 3);
    Corpus xb = small_synth("xb", SynthProfile::CrossLingual, 30, 4);
    Corpus xc = small_synth("xc", SynthProfile::CrossLingual, 30, 5);
    ExperimentConfig cfg = small_config(3);

    std::vector<Corpus> sources = {xa, xb};
    CrossResult avg = run_cross_avg(sources, xc, cfg);
    REQUIRE(avg.pairs.size() == 2);
    CHECK(avg.pairs[0].source == "xa");
    CHECK(avg.pairs[1].source == "xb");
    CHECK(avg.pairs[0].target == "xc");
    CHECK(avg.accuracy ==
          doctest::Approx((avg.pairs[0].accuracy + avg.pairs[1].accuracy) /
                          2.0)
              .epsilon(1e-12));

    CrossResult all = run_cross_all(sources, xc, cfg);
    REQUIRE(all.pairs.size() == 1);
    CHECK(all.pairs[0].source == "xa+xb");

    // target language among the sources is a protocol violation
    std::vector<Corpus> leaky = {xa, xc};
    CHECK_THROWS_AS(run_cross_avg(leaky, xc, cfg), ValidationError);
    CHECK_THROWS_AS(run_cross_all(leaky, xc, cfg), ValidationError);
}

TEST_CASE("corpus concatenation prefixes user ids") {
    Corpus xa = small_synth("xa", SynthProfile::CrossLingual, 4, 3);
    Corpus xb = small_synth("xb", SynthProfile::CrossLingual, 4, 4);
    std::vector<Corpus> both = {xa, xb};
    Corpus joint = concat_corpora(both);
    CHECK(joint.language == "xa+xb");
    CHECK(joint.users.size() == 8);
    CHECK(joint.users[0].user_id.rfind("xa:", 0) == 0);
    CHECK(joint.users[4].user_id.rfind("xb:", 0) == 0);
}

TEST_CASE("embedding baseline end to end") {
    Corpus xa = small_synth("xa", SynthProfile::CrossLingual, 20, 3);
    Corpus xb = small_synth("xb", SynthProfile::CrossLingual, 20, 4);
    EmbeddingTable ta = toy_embeddings(xa, 8, 5);
    EmbeddingTable tb = toy_embeddings(xb, 8, 5);

    ExperimentConfig cfg = small_config(3);
    CvResult cv = run_cv_embed(xa, ta, cfg);
    CHECK(cv.fold_accuracies.size() == 5);

    std::vector<Corpus> sources = {xa};
    std::vector<EmbeddingTable> tables = {ta};
    CrossResult r = run_cross_avg_embed(sources, tables, xb, tb, cfg);
    CHECK(r.pairs.size() == 1);
    CHECK(r.accuracy >= 0.0);
    CHECK(r.accuracy <= 1.0);

    CrossResult r2 = run_cross_all_embed(sources, tables, xb, tb, cfg);
    CHECK(r2.pairs.size() == 1);
}

TEST_CASE("top feature report aggregates across models") {
    ExperimentConfig cfg = small_config(17);
    std::vector<LinearModel> models;
    for (const std::string& code : {"xa", "xb", "xc"}) {
        Corpus c = small_synth(code, SynthProfile::CrossLingual, 20, 17);
        models.push_back(fit_model(c, cfg));
    }
    FeatureReport report = top_feature_report(models, 5);
    REQUIRE(!report.f_side.empty());
    REQUIRE(!report.m_side.empty());
    CHECK(report.f_side.size() <= 15);
    // scores count models, so they live in [1, 3], sorted descending
    for (const RankedFeature& rf : report.f_side) {
        CHECK(rf.score >= 1);
        CHECK(rf.score <= 3);
        CHECK(rf.mean_abs_weight > 0.0);
    }
    for (std::size_t i = 1; i < report.f_side.size(); ++i) {
        CHECK(report.f_side[i - 1].score >= report.f_side[i].score);
    }

    // mixed specs are refused
    std::vector<LinearModel> mixed = models;
    mixed[0].spec = FeatureSpec::lexical_defaults();
    CHECK_THROWS_AS(top_feature_report(mixed, 5), ValidationError);
}
