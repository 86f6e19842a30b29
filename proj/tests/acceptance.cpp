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
// Acceptance harness: one line per criterion, PASS/FAIL with timing, exit 0
// only when every criterion holds within its time budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "textbleach/bleach.hpp"
#include "textbleach/embed.hpp"
#include "textbleach/eval.hpp"
#include "textbleach/linear.hpp"
#include "textbleach/rng.hpp"
#include "textbleach/synth.hpp"
#include "test_util.hpp"

using namespace textbleach;
namespace fs = std::filesystem;

namespace {

std::string cli() { return std::string(TEXTBLEACH_CLI_PATH); }

struct Check {
    bool ok = true;
    std::string detail;

    // Keeps the first failure's message.
    void expect(bool condition, const std::string& message) {
        if (!condition && ok) {
            ok = false;
            detail = message;
        }
    }
};

struct Harness {
    int failures = 0;

    void run(int number, const std::string& title, double limit_seconds,
             const std::function<void(Check&)>& body) {
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            body(check);
        } catch (const std::exception& e) {
            check.ok = false;
            check.detail = std::string("exception: ") + e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        if (check.ok && elapsed > limit_seconds) {
            check.ok = false;
            check.detail = "over time budget";
        }
        if (!check.ok) ++failures;
        std::printf("%s: criterion %d — %s [%.2fs of %.0fs]%s%s\n",
                    check.ok ? "PASS" : "FAIL", number, title.c_str(),
                    elapsed, limit_seconds, check.ok ? "" : ": ",
                    check.ok ? "" : check.detail.c_str());
        std::fflush(stdout);
    }
};

// ---- shared fixtures ------------------------------------------------------

// The criterion-3/9 corpora: CrossLingual profile, 200 users, 50 tweets,
// seed 42, one corpus per pseudo-language.
const std::vector<Corpus>& style_corpora() {
    static std::vector<Corpus> corpora = [] {
        SynthConfig cfg;
        cfg.profile = SynthProfile::CrossLingual;
        cfg.users = 200;
        cfg.tweets = 50;
        cfg.seed = 42;
        std::vector<Corpus> out;
        for (const SynthLanguage& lang : synth_languages()) {
            out.push_back(synth_corpus(lang, cfg));
        }
        return out;
    }();
    return corpora;
}

ExperimentConfig experiment_config(FeatureSpec spec) {
    ExperimentConfig cfg;
    cfg.spec = std::move(spec);
    cfg.tweets_per_user = 50;
    cfg.folds = 10;
    cfg.seed = 42;
    cfg.trainer.seed = 42;
    return cfg;
}

// ---- criteria -------------------------------------------------------------

void criterion1_table(Check& check) {
    fs::path dir = testutil::scratch_dir("accept_c1");
    fs::path table = dir / "counts.json";
    testutil::write_file(table,
                         "{\"a\": 4000, \"bag\": 37, \"of\": 2500, "
                         "\"for\": 1200, \"lunch!\": 3}");
    auto r = testutil::run_command(
        "printf '%s\\n' 'a bag of Doritos for lunch! 💥🔫🔫🔫' | " + cli() +
        " bleach --channels=all --freq-table=" + table.string());
    check.expect(r.exit_code == 0, "bleach exited " +
                                       std::to_string(r.exit_code));
    const std::string expected =
        "freq\t4 2 4 0 4 1 0\n"
        "len\t01 03 02 07 03 06 04\n"
        "punctc\tW W W W W W! 💥🔫🔫🔫\n"
        "puncta\tW W W W W WP JJJJ\n"
        "shape\tL LL LL ULL LL LLX XX\n"
        "vowels\tV CVC VC CVCVCVC CVC CVCCCO OOOO\n";
    check.expect(r.out == expected, "channel rows differ from the worked "
                                    "example:\n" + r.out);
}

void criterion2_protocol(Check& check) {
    // Original corpora are not redistributable, so paper numbers are out of
    // reach here; the full protocol must still be runnable on user-supplied
    // JSONL through `cv` and `xlang`. Criteria 3-8 carry the evidence.
    check.expect(testutil::run_command(cli() + " cv --help").exit_code == 0,
                 "cv subcommand missing");
    check.expect(testutil::run_command(cli() + " xlang --help").exit_code ==
                     0,
                 "xlang subcommand missing");
}

void criterion3_cross_lingual(Check& check) {
    const std::vector<Corpus>& corpora = style_corpora();
    std::vector<Corpus> source = {corpora[0]};  // xa
    const Corpus& target = corpora[1];          // xb

    ExperimentConfig abstract_cfg =
        experiment_config(FeatureSpec::abstract_defaults());
    CrossResult abs = run_cross_avg(source, target, abstract_cfg);

    ExperimentConfig lexical_cfg =
        experiment_config(FeatureSpec::lexical_defaults());
    CrossResult lex = run_cross_avg(source, target, lexical_cfg);

    std::ostringstream detail;
    detail << "abstract=" << abs.accuracy << " lexical=" << lex.accuracy;
    check.expect(abs.accuracy >= 0.65,
                 "abstract transfer too weak: " + detail.str());
    check.expect(lex.accuracy <= 0.55,
                 "lexical transfer should not work: " + detail.str());
}

void criterion4_in_language(Check& check) {
    SynthConfig cfg;
    cfg.profile = SynthProfile::InLanguage;
    cfg.users = 200;
    cfg.tweets = 50;
    cfg.seed = 42;
    Corpus corpus = synth_corpus(synth_language("xa"), cfg);

    CvResult lex =
        run_cv(corpus, experiment_config(FeatureSpec::lexical_defaults()));
    CvResult abs =
        run_cv(corpus, experiment_config(FeatureSpec::abstract_defaults()));

    std::ostringstream detail;
    detail << "lexical=" << lex.mean << " abstract=" << abs.mean;
    check.expect(lex.mean >= abs.mean,
                 "lexical should win in-language: " + detail.str());
    check.expect(lex.mean >= 0.85, "lexical too weak: " + detail.str());
    check.expect(abs.mean >= 0.85, "abstract too weak: " + detail.str());
}

void criterion5_svm_oracle(Check& check) {
    for (std::uint64_t seed = 101; seed <= 105; ++seed) {
        testutil::ToyDataset d = testutil::make_toy_dataset(seed, 20, 4);
        TrainerConfig cfg;
        cfg.seed = seed;
        TrainResult r = train_svm(d.xs, d.ys, d.dim, cfg);
        const double reference =
            testutil::reference_svm_objective(d, cfg.C, 1000000);
        const double rel = std::abs(r.stats.objective - reference) /
                           std::max(1e-12, std::abs(reference));
        std::ostringstream detail;
        detail << "seed " << seed << ": trained=" << r.stats.objective
               << " reference=" << reference << " rel=" << rel;
        check.expect(rel < 1e-3, detail.str());
    }
}

void criterion6_procrustes(Check& check) {
    Rng rng(4242);
    for (int instance = 0; instance < 20; ++instance) {
        const int d = 3 + static_cast<int>(rng.below(6));
        const int n = 3 * d + 5;
        Eigen::MatrixXd x(n, d);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < d; ++j) x(i, j) = rng.gaussian();
        }
        Eigen::MatrixXd g(d, d);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) g(i, j) = rng.gaussian();
        }
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
        Eigen::MatrixXd rot = qr.householderQ();
        if (rot.determinant() < 0) rot.col(0) = -rot.col(0);

        AlignmentMatrix m = align(x, x * rot);
        check.expect((m.W - rot).norm() < 1e-9,
                     "rotation not recovered on instance " +
                         std::to_string(instance));
        const double ortho =
            (m.W.transpose() * m.W - Eigen::MatrixXd::Identity(d, d))
                .cwiseAbs()
                .maxCoeff();
        check.expect(ortho < 1e-6, "WtW deviates from identity by " +
                                       std::to_string(ortho));
    }

    // 2x2: a dense grid over all of O(2) never beats the closed form
    for (std::uint64_t seed : {7u, 8u, 9u}) {
        Rng r2(seed);
        Eigen::MatrixXd x(15, 2), y(15, 2);
        for (int i = 0; i < 15; ++i) {
            for (int j = 0; j < 2; ++j) {
                x(i, j) = r2.gaussian();
                y(i, j) = r2.gaussian();
            }
        }
        AlignmentMatrix m = align(x, y);

        auto preprocess = [](Eigen::MatrixXd mat) {
            mat = mat.rowwise() - mat.colwise().mean().eval();
            for (int i = 0; i < mat.rows(); ++i) {
                double n = mat.row(i).norm();
                if (n > 1e-12) mat.row(i) /= n;
            }
            return mat;
        };
        Eigen::MatrixXd xc = preprocess(x);
        Eigen::MatrixXd yc = preprocess(y);
        const double closed = (xc * m.W - yc).squaredNorm();
        const double pi = 3.14159265358979323846;
        for (int k = 0; k < 1000; ++k) {
            const double a = 2.0 * pi * k / 1000.0;
            Eigen::Matrix2d rot, refl;
            rot << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
            refl << std::cos(a), std::sin(a), std::sin(a), -std::cos(a);
            const double best_grid =
                std::min((xc * rot - yc).squaredNorm(),
                         (xc * refl - yc).squaredNorm());
            check.expect(best_grid > closed - 1e-6,
                         "grid beat the closed form by " +
                             std::to_string(closed - best_grid));
            if (!check.ok) return;
        }
    }
}

void criterion7_fleiss(Check& check) {
    std::vector<std::vector<int>> perfect = {{4, 0}, {0, 4}, {4, 0}};
    check.expect(fleiss_kappa(perfect, 4) == 1.0,
                 "perfect agreement must be exactly 1.0");

    std::vector<std::vector<int>> hand = {{2, 1}, {1, 2}};
    const double kappa = fleiss_kappa(hand, 3);
    check.expect(std::abs(kappa - (-1.0 / 3.0)) < 1e-12,
                 "hand case drifted: " + std::to_string(kappa));

    Rng rng(777);
    for (int trial = 0; trial < 100; ++trial) {
        const int items = 2 + static_cast<int>(rng.below(10));
        const int cats = 2 + static_cast<int>(rng.below(4));
        const int raters = 2 + static_cast<int>(rng.below(5));
        std::vector<std::vector<int>> counts(items,
                                             std::vector<int>(cats, 0));
        for (int i = 0; i < items; ++i) {
            for (int r = 0; r < raters; ++r) {
                counts[i][static_cast<int>(rng.below(cats))]++;
            }
        }
        std::vector<int> perm(cats);
        std::iota(perm.begin(), perm.end(), 0);
        rng.shuffle(perm);
        std::vector<std::vector<int>> relabeled(items,
                                                std::vector<int>(cats, 0));
        for (int i = 0; i < items; ++i) {
            for (int c = 0; c < cats; ++c) relabeled[i][perm[c]] = counts[i][c];
        }
        bool d1 = false, d2 = false;
        const double k1 = fleiss_kappa(counts, raters, &d1);
        const double k2 = fleiss_kappa(relabeled, raters, &d2);
        check.expect(std::abs(k1 - k2) < 1e-12 && d1 == d2,
                     "relabeling changed kappa on trial " +
                         std::to_string(trial));
    }
}

void criterion8_determinism(Check& check) {
    fs::path dir = testutil::scratch_dir("accept_c8");
    auto synth = testutil::run_command(
        cli() + " synth --out=" + dir.string() +
        " --users=40 --tweets=10 --seed=42");
    check.expect(synth.exit_code == 0, "synth failed");
    if (!check.ok) return;

    // identical seeds -> byte-identical experiment TSVs
    const std::string cv_cmd = cli() + " cv --corpus=" +
                               (dir / "xa.jsonl").string() +
                               " --folds=5 --ngrams=1:2 --seed=42 --out=";
    testutil::run_command(cv_cmd + (dir / "cv_a.tsv").string());
    testutil::run_command(cv_cmd + (dir / "cv_b.tsv").string());
    check.expect(testutil::read_file(dir / "cv_a.tsv") ==
                         testutil::read_file(dir / "cv_b.tsv") &&
                     !testutil::read_file(dir / "cv_a.tsv").empty(),
                 "cv reruns differ");

    const std::string xl_cmd =
        cli() + " xlang --setting=all --train=" + (dir / "xa.jsonl").string() +
        "," + (dir / "xb.jsonl").string() + " --test=" +
        (dir / "xc.jsonl").string() + " --ngrams=1:2 --seed=42 --out=";
    testutil::run_command(xl_cmd + (dir / "xl_a.tsv").string());
    testutil::run_command(xl_cmd + (dir / "xl_b.tsv").string());
    check.expect(testutil::read_file(dir / "xl_a.tsv") ==
                         testutil::read_file(dir / "xl_b.tsv") &&
                     !testutil::read_file(dir / "xl_a.tsv").empty(),
                 "xlang reruns differ");

    // model round trip preserves every prediction exactly
    SynthConfig scfg;
    scfg.users = 30;
    scfg.tweets = 10;
    scfg.seed = 42;
    Corpus corpus = synth_corpus(synth_language("xa"), scfg);
    ExperimentConfig cfg = experiment_config(FeatureSpec::abstract_defaults());
    cfg.tweets_per_user = 10;
    LinearModel model = fit_model(corpus, cfg);
    fs::path model_path = dir / "roundtrip.model";
    save_model(model, model_path);
    LinearModel loaded = load_model(model_path);

    Rng rng(4711);
    const std::int32_t dim = static_cast<std::int32_t>(model.vocab.size());
    for (int i = 0; i < 100; ++i) {
        SparseVector x;
        for (std::int32_t j = 0; j < dim; ++j) {
            if (rng.uniform() < 0.05) x.entries.emplace_back(j, rng.gaussian());
        }
        if (loaded.decision(x) != model.decision(x) ||
            loaded.predict(x) != model.predict(x)) {
            check.expect(false, "prediction drifted after reload on input " +
                                    std::to_string(i));
            return;
        }
    }
}

void criterion9_feature_report(Check& check) {
    const std::vector<Corpus>& corpora = style_corpora();
    ExperimentConfig cfg = experiment_config(FeatureSpec::abstract_defaults());
    std::vector<LinearModel> models;
    for (const Corpus& corpus : corpora) {
        models.push_back(fit_model(corpus, cfg));
    }
    FeatureReport report = top_feature_report(models, 10);

    bool found = false;
    std::string listing;
    for (std::size_t i = 0; i < report.f_side.size() && i < 10; ++i) {
        const std::string& f = report.f_side[i].feature;
        listing += (i ? ", " : "") + f;
        if (f.rfind("puncta|", 0) == 0 &&
            f.find('J') != std::string::npos) {
            found = true;
        }
    }
    check.expect(found,
                 "no emoji-bearing puncta feature in the top-10 F side: " +
                     listing);
}

}  // namespace

int main() {
    Harness h;
    std::printf("acceptance: %s\n", cli().c_str());

    h.run(1, "worked single-sentence example, all six channels exact", 1.0,
          criterion1_table);
    h.run(2, "paper-scale corpora unavailable; protocol runnable on JSONL",
          30.0, criterion2_protocol);
    h.run(3, "cross-lingual: abstract transfers, lexical does not", 120.0,
          criterion3_cross_lingual);
    h.run(4, "in-language: lexical >= abstract, both strong", 120.0,
          criterion4_in_language);
    h.run(5, "SVM objective matches an independent optimizer", 30.0,
          criterion5_svm_oracle);
    h.run(6, "Procrustes: recovery, orthogonality, grid optimality", 60.0,
          criterion6_procrustes);
    h.run(7, "Fleiss kappa: exact cases and relabel invariance", 30.0,
          criterion7_fleiss);
    h.run(8, "determinism of TSVs and model round trip", 120.0,
          criterion8_determinism);
    h.run(9, "emoji feature tops the F side across languages", 300.0,
          criterion9_feature_report);

    if (h.failures == 0) {
        std::printf("all 9 criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", h.failures);
    return 1;
}
