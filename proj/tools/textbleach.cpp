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
// Command-line front end: bleach text, train/apply/evaluate models, run the
// cross-validation and cross-lingual protocols, inspect features, compute
// annotator agreement, align embeddings, and generate synthetic corpora.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "textbleach/bleach.hpp"
#include "textbleach/corpus.hpp"
#include "textbleach/embed.hpp"
#include "textbleach/error.hpp"
#include "textbleach/eval.hpp"
#include "textbleach/hash.hpp"
#include "textbleach/linear.hpp"
#include "textbleach/synth.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace textbleach;

namespace {

constexpr std::string_view kToolVersion = "textbleach 1.0.0";

std::string now_iso8601() {
    std::time_t t = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string file_digest(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return to_hex(fnv1a64(ss.str()));
}

// One manifest per experiment, written next to its main output.
struct Manifest {
    std::string command;
    json flags = json::object();
    std::uint64_t seed = 0;
    std::vector<fs::path> inputs;
    std::string started = now_iso8601();

    void write(const fs::path& path) const {
        json j;
        j["command"] = command;
        j["flags"] = flags;
        j["seed"] = seed;
        json digests = json::object();
        for (const fs::path& in : inputs) {
            digests[in.string()] = file_digest(in);
        }
        j["inputs"] = digests;
        j["tool_version"] = std::string(kToolVersion);
        j["started"] = started;
        j["finished"] = now_iso8601();
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot open for writing: " + path.string());
        out << j.dump(2) << '\n';
        if (!out) throw IoError("failed to write: " + path.string());
    }
};

fs::path manifest_path(const fs::path& out) {
    return fs::path(out.string() + ".manifest.json");
}

std::uint64_t parse_seed_string(const std::string& s,
                                const std::string& origin) {
    if (s.empty()) throw ValidationError("empty seed in " + origin);
    std::uint64_t value = 0;
    for (char c : s) {
        if (c < '0' || c > '9') {
            throw ValidationError("invalid seed '" + s + "' in " + origin);
        }
        std::uint64_t digit = static_cast<std::uint64_t>(c - '0');
        if (value > (UINT64_MAX - digit) / 10) {
            throw ValidationError("seed '" + s + "' out of range in " +
                                  origin);
        }
        value = value * 10 + digit;
    }
    return value;
}

// Priority: explicit --seed, then BLEACH_SEED, then 42.
std::uint64_t resolve_seed(const CLI::App* sub, std::uint64_t flag_value) {
    if (sub->count("--seed") > 0) return flag_value;
    if (const char* env = std::getenv("BLEACH_SEED")) {
        return parse_seed_string(env, "BLEACH_SEED");
    }
    return 42;
}

std::string language_from_path(const fs::path& path) {
    std::string name = path.filename().string();
    std::size_t dot = name.find('.');
    std::string stem = dot == std::string::npos ? name : name.substr(0, dot);
    if (stem.empty()) {
        throw ValidationError(
            "cannot infer a language code from filename '" + name +
            "'; pass --lang");
    }
    return stem;
}

void require_file(const fs::path& path) {
    if (!fs::exists(path)) throw IoError("no such file: " + path.string());
}

NgramRange parse_range(const std::string& s, const std::string& flag) {
    std::size_t colon = s.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == s.size()) {
        throw ValidationError(flag + " expects LO:HI, got '" + s + "'");
    }
    try {
        NgramRange r{std::stoi(s.substr(0, colon)),
                     std::stoi(s.substr(colon + 1))};
        return r;
    } catch (const std::exception&) {
        throw ValidationError(flag + " expects LO:HI, got '" + s + "'");
    }
}

// Shared featurization/trainer flags for the model-building subcommands.
struct ModelFlags {
    std::string mode = "abstract";
    std::string channels = "all";
    std::string ngrams;       // LO:HI, defaults per mode
    std::string char_ngrams;  // LO:HI, lexical only
    std::string weighting = "tfidf";
    std::int64_t min_df = 1;
    std::int64_t char_min_df = 2;
    double C = 1.0;
    double tol = 1e-4;
    int max_epochs = 1000;

    void attach(CLI::App* sub) {
        sub->add_option("--mode", mode, "Feature mode: abstract or lexical")
            ->check(CLI::IsMember({"abstract", "lexical"}));
        sub->add_option("--channels", channels,
                        "Bleach channels (abstract mode): 'all' or a comma "
                        "list of freq,len,punctc,puncta,shape,vowels");
        sub->add_option("--ngrams", ngrams,
                        "Token n-gram range LO:HI (default 1:5 abstract, "
                        "1:2 lexical)");
        sub->add_option("--char-ngrams", char_ngrams,
                        "Character n-gram range LO:HI (lexical mode, "
                        "default 3:6)");
        sub->add_option("--weighting", weighting, "tfidf or binary")
            ->check(CLI::IsMember({"tfidf", "binary"}));
        sub->add_option("--min-df", min_df,
                        "Minimum document frequency for features");
        sub->add_option("--char-min-df", char_min_df,
                        "Minimum document frequency for char n-grams");
        sub->add_option("--C", C, "SVM penalty");
        sub->add_option("--tol", tol, "SVM stopping tolerance");
        sub->add_option("--max-epochs", max_epochs, "SVM epoch cap");
    }

    FeatureSpec spec() const {
        FeatureSpec s = mode == "lexical" ? FeatureSpec::lexical_defaults()
                                          : FeatureSpec::abstract_defaults();
        if (!ngrams.empty()) s.token_ngrams = parse_range(ngrams, "--ngrams");
        if (!char_ngrams.empty()) {
            s.char_ngrams = parse_range(char_ngrams, "--char-ngrams");
        }
        if (mode == "abstract") s.channels = parse_channels(channels);
        s.weighting =
            weighting == "binary" ? Weighting::Binary : Weighting::TfIdf;
        s.validate();
        return s;
    }

    ExperimentConfig experiment(std::uint64_t seed, int folds,
                                int tweets_per_user) const {
        ExperimentConfig cfg;
        cfg.spec = spec();
        cfg.trainer.C = C;
        cfg.trainer.tol = tol;
        cfg.trainer.max_epochs = max_epochs;
        cfg.trainer.seed = seed;
        cfg.min_df.default_min_df = min_df;
        cfg.min_df.char_min_df = char_min_df;
        cfg.folds = folds;
        cfg.tweets_per_user = tweets_per_user;
        cfg.seed = seed;
        return cfg;
    }

    json to_json() const {
        return {{"mode", mode},         {"channels", channels},
                {"ngrams", ngrams},     {"char_ngrams", char_ngrams},
                {"weighting", weighting}, {"min_df", min_df},
                {"char_min_df", char_min_df}, {"C", C},
                {"tol", tol},           {"max_epochs", max_epochs}};
    }
};

Corpus load_prepared(const fs::path& path, const std::string& lang_override,
                     bool balance, int cap, std::uint64_t seed) {
    require_file(path);
    std::string lang =
        lang_override.empty() ? language_from_path(path) : lang_override;
    Corpus corpus = load_corpus(path, lang);
    if (balance) corpus = balance_downsample(corpus, seed);
    if (cap > 0) corpus = cap_tweets(corpus, cap);
    return corpus;
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw IoError("failed to write: " + path.string());
}

FrequencyTable load_frequency_table_json(const fs::path& path) {
    require_file(path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError("bad frequency table JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) {
        throw ParseError("frequency table must be a JSON object");
    }
    FrequencyTable table;
    for (const auto& [token, value] : j.items()) {
        if (!value.is_number_integer() || value.get<std::int64_t>() < 1) {
            throw ValidationError("frequency count for '" + token +
                                  "' must be a positive integer");
        }
        table.counts[token] = value.get<std::int64_t>();
    }
    return table;
}

int register_bleach(CLI::App& app) {
    auto* sub = app.add_subcommand(
        "bleach", "Bleach text lines into abstract channels");
    auto channels = std::make_shared<std::string>("all");
    auto freq_path = std::make_shared<std::string>();
    auto in_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    sub->add_option("--channels", *channels,
                    "'all' or comma list of freq,len,punctc,puncta,shape,"
                    "vowels");
    sub->add_option("--freq-table", *freq_path,
                    "JSON object token->count (required for 'freq')");
    sub->add_option("--in", *in_path, "Input file (default: stdin)");
    sub->add_option("--out", *out_path, "Output file (default: stdout)");

    sub->callback([sub, channels, freq_path, in_path, out_path]() {
        Manifest manifest;
        manifest.command = "bleach";
        ChannelSet set = parse_channels(*channels);
        std::optional<FrequencyTable> table;
        if (!freq_path->empty()) {
            table = load_frequency_table_json(*freq_path);
            manifest.inputs.push_back(*freq_path);
        }

        std::ifstream file_in;
        std::istream* in = &std::cin;
        if (!in_path->empty()) {
            require_file(*in_path);
            file_in.open(*in_path, std::ios::binary);
            if (!file_in) throw IoError("cannot open: " + *in_path);
            in = &file_in;
            manifest.inputs.push_back(*in_path);
        }

        std::ostringstream out;
        std::string line;
        while (std::getline(*in, line)) {
            std::vector<std::string> tweets{line};
            BleachedDoc doc =
                bleach_document(tweets, set, table ? &*table : nullptr);
            for (Channel c : kAllChannels) {
                if (!set.contains(c)) continue;
                out << channel_name(c) << '\t';
                const auto& tokens = doc.channel(c);
                for (std::size_t i = 0; i < tokens.size(); ++i) {
                    if (i > 0) out << ' ';
                    out << tokens[i];
                }
                out << '\n';
            }
        }

        if (out_path->empty()) {
            std::cout << out.str();
        } else {
            write_text(*out_path, out.str());
            manifest.flags = {{"channels", *channels},
                              {"freq_table", *freq_path},
                              {"in", *in_path},
                              {"out", *out_path}};
            manifest.seed = resolve_seed(sub, 0);
            manifest.write(manifest_path(*out_path));
        }
    });
    return 0;
}

int register_train(CLI::App& app) {
    auto* sub = app.add_subcommand("train", "Train a gender classifier");
    auto flags = std::make_shared<ModelFlags>();
    auto corpus_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto lang = std::make_shared<std::string>();
    auto cap = std::make_shared<int>(200);
    auto no_balance = std::make_shared<bool>(false);
    auto seed = std::make_shared<std::uint64_t>(42);
    sub->add_option("--corpus", *corpus_path, "Training corpus (JSONL)")
        ->required();
    sub->add_option("--out", *out_path, "Model output path")->required();
    sub->add_option("--lang", *lang, "Language code (default: file stem)");
    sub->add_option("--cap", *cap, "Tweets kept per user (0 = no cap)");
    sub->add_flag("--no-balance", *no_balance,
                  "Skip gender-balancing the corpus");
    sub->add_option("--seed", *seed, "Random seed");
    flags->attach(sub);

    sub->callback([sub, flags, corpus_path, out_path, lang, cap, no_balance,
                   seed]() {
        Manifest manifest;
        manifest.command = "train";
        std::uint64_t s = resolve_seed(sub, *seed);
        Corpus corpus =
            load_prepared(*corpus_path, *lang, !*no_balance, *cap, s);
        ExperimentConfig cfg =
            flags->experiment(s, 10, *cap > 0 ? *cap : 200);
        LinearModel model = fit_model(corpus, cfg);
        save_model(model, *out_path);

        manifest.flags = flags->to_json();
        manifest.flags["corpus"] = *corpus_path;
        manifest.flags["out"] = *out_path;
        manifest.flags["lang"] = corpus.language;
        manifest.flags["cap"] = *cap;
        manifest.flags["balance"] = !*no_balance;
        manifest.seed = s;
        manifest.inputs.push_back(*corpus_path);
        manifest.write(manifest_path(*out_path));

        std::cout << "trained " << corpus.language << " model on "
                  << corpus.users.size() << " users, "
                  << model.vocab.size() << " features\n";
    });
    return 0;
}

int register_predict(CLI::App& app) {
    auto* sub =
        app.add_subcommand("predict", "Predict genders with a saved model");
    auto model_path = std::make_shared<std::string>();
    auto corpus_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto lang = std::make_shared<std::string>();
    auto cap = std::make_shared<int>(0);
    auto seed = std::make_shared<std::uint64_t>(42);
    sub->add_option("--model", *model_path, "Model file")->required();
    sub->add_option("--corpus", *corpus_path, "Corpus to label")->required();
    sub->add_option("--out", *out_path, "Predictions TSV")->required();
    sub->add_option("--lang", *lang, "Language code (default: file stem)");
    sub->add_option("--cap", *cap, "Tweets kept per user (0 = no cap)");
    sub->add_option("--seed", *seed, "Random seed (recorded only)");

    sub->callback([sub, model_path, corpus_path, out_path, lang, cap,
                   seed]() {
        Manifest manifest;
        manifest.command = "predict";
        require_file(*model_path);
        LinearModel model = load_model(*model_path);
        Corpus corpus = load_prepared(*corpus_path, *lang, false, *cap, 0);

        std::vector<Gender> pred = predict_users(model, corpus);
        std::string out = "user_id\tpredicted\n";
        for (std::size_t i = 0; i < corpus.users.size(); ++i) {
            out += corpus.users[i].user_id;
            out += '\t';
            out += gender_char(pred[i]);
            out += '\n';
        }
        write_text(*out_path, out);

        manifest.flags = {{"model", *model_path},
                          {"corpus", *corpus_path},
                          {"out", *out_path},
                          {"lang", corpus.language},
                          {"cap", *cap}};
        manifest.seed = resolve_seed(sub, *seed);
        manifest.inputs = {*model_path, *corpus_path};
        manifest.write(manifest_path(*out_path));
    });
    return 0;
}

int register_evaluate(CLI::App& app) {
    auto* sub = app.add_subcommand(
        "evaluate", "Score a saved model against a labeled corpus");
    auto model_path = std::make_shared<std::string>();
    auto corpus_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto lang = std::make_shared<std::string>();
    auto cap = std::make_shared<int>(0);
    auto seed = std::make_shared<std::uint64_t>(42);
    sub->add_option("--model", *model_path, "Model file")->required();
    sub->add_option("--corpus", *corpus_path, "Labeled corpus")->required();
    sub->add_option("--out", *out_path, "Results TSV (default: stdout)");
    sub->add_option("--lang", *lang, "Language code (default: file stem)");
    sub->add_option("--cap", *cap, "Tweets kept per user (0 = no cap)");
    sub->add_option("--seed", *seed, "Random seed (recorded only)");

    sub->callback([sub, model_path, corpus_path, out_path, lang, cap,
                   seed]() {
        Manifest manifest;
        manifest.command = "evaluate";
        require_file(*model_path);
        LinearModel model = load_model(*model_path);
        Corpus corpus = load_prepared(*corpus_path, *lang, false, *cap, 0);

        std::vector<Gender> pred = predict_users(model, corpus);
        std::vector<Gender> gold;
        gold.reserve(corpus.users.size());
        for (const UserRecord& u : corpus.users) gold.push_back(u.gender);
        double acc = accuracy(pred, gold);

        std::vector<ResultRow> rows = {
            {"evaluate", model.language, corpus.language, acc}};
        if (out_path->empty()) {
            std::cout << results_to_tsv(rows);
            return;
        }
        write_text(*out_path, results_to_tsv(rows));
        std::cout << results_to_pretty(rows);

        manifest.flags = {{"model", *model_path},
                          {"corpus", *corpus_path},
                          {"out", *out_path},
                          {"lang", corpus.language},
                          {"cap", *cap}};
        manifest.seed = resolve_seed(sub, *seed);
        manifest.inputs = {*model_path, *corpus_path};
        manifest.write(manifest_path(*out_path));
    });
    return 0;
}

int register_cv(CLI::App& app) {
    auto* sub = app.add_subcommand(
        "cv", "Stratified k-fold cross-validation on one corpus");
    auto flags = std::make_shared<ModelFlags>();
    auto corpus_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto lang = std::make_shared<std::string>();
    auto folds = std::make_shared<int>(10);
    auto cap = std::make_shared<int>(200);
    auto no_balance = std::make_shared<bool>(false);
    auto seed = std::make_shared<std::uint64_t>(42);
    sub->add_option("--corpus", *corpus_path, "Corpus (JSONL)")->required();
    sub->add_option("--out", *out_path, "Results TSV (default: stdout)");
    sub->add_option("--lang", *lang, "Language code (default: file stem)");
    sub->add_option("--folds", *folds, "Number of folds");
    sub->add_option("--cap", *cap, "Tweets kept per user (0 = no cap)");
    sub->add_flag("--no-balance", *no_balance,
                  "Skip gender-balancing the corpus");
    sub->add_option("--seed", *seed, "Random seed");
    flags->attach(sub);

    sub->callback([sub, flags, corpus_path, out_path, lang, folds, cap,
                   no_balance, seed]() {
        Manifest manifest;
        manifest.command = "cv";
        std::uint64_t s = resolve_seed(sub, *seed);
        Corpus corpus =
            load_prepared(*corpus_path, *lang, !*no_balance, *cap, s);
        ExperimentConfig cfg =
            flags->experiment(s, *folds, *cap > 0 ? *cap : 200);
        CvResult result = run_cv(corpus, cfg);

        std::vector<ResultRow> rows;
        for (std::size_t i = 0; i < result.fold_accuracies.size(); ++i) {
            rows.push_back({"cv-fold" + std::to_string(i + 1),
                            corpus.language, corpus.language,
                            result.fold_accuracies[i]});
        }
        rows.push_back({"cv", corpus.language, corpus.language, result.mean});
        if (out_path->empty()) {
            std::cout << results_to_tsv(rows);
            return;
        }
        write_text(*out_path, results_to_tsv(rows));
        std::cout << results_to_pretty(rows);

        manifest.flags = flags->to_json();
        manifest.flags["corpus"] = *corpus_path;
        manifest.flags["out"] = *out_path;
        manifest.flags["lang"] = corpus.language;
        manifest.flags["folds"] = *folds;
        manifest.flags["cap"] = *cap;
        manifest.flags["balance"] = !*no_balance;
        manifest.seed = s;
        manifest.inputs.push_back(*corpus_path);
        manifest.write(manifest_path(*out_path));
    });
    return 0;
}

int register_xlang(CLI::App& app) {
    auto* sub = app.add_subcommand(
        "xlang", "Cross-lingual transfer: train on sources, test on target");
    auto flags = std::make_shared<ModelFlags>();
    auto setting = std::make_shared<std::string>("avg");
    auto train_paths = std::make_shared<std::vector<std::string>>();
    auto test_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto cap = std::make_shared<int>(200);
    auto no_balance = std::make_shared<bool>(false);
    auto seed = std::make_shared<std::uint64_t>(42);
    auto emb_paths = std::make_shared<std::vector<std::string>>();
    auto test_emb_path = std::make_shared<std::string>();
    sub->add_option("--setting", *setting, "avg (one model per source) or "
                                           "all (one joint model)")
        ->check(CLI::IsMember({"avg", "all"}));
    sub->add_option("--train", *train_paths, "Source corpora (comma list)")
        ->required()
        ->delimiter(',');
    sub->add_option("--test", *test_path, "Target corpus")->required();
    sub->add_option("--out", *out_path, "Results TSV (default: stdout)");
    sub->add_option("--cap", *cap, "Tweets kept per user (0 = no cap)");
    sub->add_flag("--no-balance", *no_balance,
                  "Skip gender-balancing each corpus");
    sub->add_option("--seed", *seed, "Random seed");
    sub->add_option("--embeddings", *emb_paths,
                    "Word-vector files for the source languages (comma "
                    "list); switches to the embedding baseline")
        ->delimiter(',');
    sub->add_option("--test-embeddings", *test_emb_path,
                    "Word-vector file for the target language");
    flags->attach(sub);

    sub->callback([sub, flags, setting, train_paths, test_path, out_path,
                   cap, no_balance, seed, emb_paths, test_emb_path]() {
        Manifest manifest;
        manifest.command = "xlang";
        std::uint64_t s = resolve_seed(sub, *seed);
        bool balance = !*no_balance;

        std::vector<Corpus> sources;
        for (const std::string& path : *train_paths) {
            sources.push_back(load_prepared(path, "", balance, *cap, s));
            manifest.inputs.push_back(path);
        }
        Corpus target = load_prepared(*test_path, "", balance, *cap, s);
        manifest.inputs.push_back(*test_path);
        ExperimentConfig cfg = flags->experiment(s, 10, *cap > 0 ? *cap : 200);

        const bool use_embeddings =
            !emb_paths->empty() || !test_emb_path->empty();
        if (use_embeddings &&
            (emb_paths->size() != train_paths->size() ||
             test_emb_path->empty())) {
            throw ValidationError(
                "embedding baseline needs one --embeddings file per source "
                "plus --test-embeddings");
        }

        CrossResult result;
        std::string experiment;
        if (use_embeddings) {
            std::vector<EmbeddingTable> tables;
            for (const std::string& path : *emb_paths) {
                require_file(path);
                tables.push_back(
                    load_embeddings(path, language_from_path(path)));
                manifest.inputs.push_back(path);
            }
            require_file(*test_emb_path);
            EmbeddingTable target_table = load_embeddings(
                *test_emb_path, language_from_path(*test_emb_path));
            manifest.inputs.push_back(*test_emb_path);
            if (*setting == "avg") {
                result = run_cross_avg_embed(sources, tables, target,
                                             target_table, cfg);
                experiment = "xlang-avg-emb";
            } else {
                result = run_cross_all_embed(sources, tables, target,
                                             target_table, cfg);
                experiment = "xlang-all-emb";
            }
        } else if (*setting == "avg") {
            result = run_cross_avg(sources, target, cfg);
            experiment = "xlang-avg";
        } else {
            result = run_cross_all(sources, target, cfg);
            experiment = "xlang-all";
        }

        std::vector<ResultRow> rows;
        if (result.pairs.size() > 1) {
            for (const PairAccuracy& pair : result.pairs) {
                rows.push_back({experiment + "-pair", pair.source,
                                pair.target, pair.accuracy});
            }
        }
        std::string joined;
        for (std::size_t i = 0; i < sources.size(); ++i) {
            if (i > 0) joined += '+';
            joined += sources[i].language;
        }
        rows.push_back({experiment, joined, target.language, result.accuracy});
        if (out_path->empty()) {
            std::cout << results_to_tsv(rows);
            return;
        }
        write_text(*out_path, results_to_tsv(rows));
        std::cout << results_to_pretty(rows);

        manifest.flags = flags->to_json();
        manifest.flags["setting"] = *setting;
        manifest.flags["train"] = *train_paths;
        manifest.flags["test"] = *test_path;
        manifest.flags["out"] = *out_path;
        manifest.flags["cap"] = *cap;
        manifest.flags["balance"] = balance;
        manifest.flags["embeddings"] = *emb_paths;
        manifest.flags["test_embeddings"] = *test_emb_path;
        manifest.seed = s;
        manifest.write(manifest_path(*out_path));
    });
    return 0;
}

int register_features(CLI::App& app) {
    auto* sub = app.add_subcommand(
        "features", "Aggregate top features across saved models");
    auto model_paths = std::make_shared<std::vector<std::string>>();
    auto out_path = std::make_shared<std::string>();
    auto k = std::make_shared<std::size_t>(10);
    auto seed = std::make_shared<std::uint64_t>(42);
    sub->add_option("--models", *model_paths, "Model files (comma list)")
        ->required()
        ->delimiter(',');
    sub->add_option("--out", *out_path, "Report TSV")->required();
    sub->add_option("--k", *k, "Top-k features per gender per model");
    sub->add_option("--seed", *seed, "Random seed (recorded only)");

    sub->callback([sub, model_paths, out_path, k, seed]() {
        Manifest manifest;
        manifest.command = "features";
        std::vector<LinearModel> models;
        for (const std::string& path : *model_paths) {
            require_file(path);
            models.push_back(load_model(path));
            manifest.inputs.push_back(path);
        }
        FeatureReport report = top_feature_report(models, *k);

        std::string out = "gender\trank\tfeature\tscore\tmean_abs_weight\n";
        auto emit = [&out](char gender,
                           const std::vector<RankedFeature>& side) {
            for (std::size_t i = 0; i < side.size(); ++i) {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%.6f",
                              side[i].mean_abs_weight);
                out += gender;
                out += '\t';
                out += std::to_string(i + 1);
                out += '\t';
                out += side[i].feature;
                out += '\t';
                out += std::to_string(side[i].score);
                out += '\t';
                out += buf;
                out += '\n';
            }
        };
        emit('F', report.f_side);
        emit('M', report.m_side);
        write_text(*out_path, out);

        auto preview = [](char gender, const std::vector<RankedFeature>& side,
                          std::size_t k_shown) {
            std::cout << gender << " side:\n";
            for (std::size_t i = 0; i < side.size() && i < k_shown; ++i) {
                std::printf("  %2zu. %-40s score=%d mean|w|=%.4f\n", i + 1,
                            side[i].feature.c_str(), side[i].score,
                            side[i].mean_abs_weight);
            }
        };
        preview('F', report.f_side, *k);
        preview('M', report.m_side, *k);

        manifest.flags = {{"models", *model_paths},
                          {"out", *out_path},
                          {"k", *k}};
        manifest.seed = resolve_seed(sub, *seed);
        manifest.write(manifest_path(*out_path));
    });
    return 0;
}

int register_kappa(CLI::App& app) {
    auto* sub = app.add_subcommand(
        "kappa", "Fleiss kappa over an annotation TSV");
    auto ratings_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto seed = std::make_shared<std::uint64_t>(42);
    sub->add_option("--ratings", *ratings_path,
                    "TSV: header, then item<TAB>rater<TAB>label")
        ->required();
    sub->add_option("--out", *out_path, "Optional TSV output");
    sub->add_option("--seed", *seed, "Random seed (recorded only)");

    sub->callback([sub, ratings_path, out_path, seed]() {
        require_file(*ratings_path);
        RatingsTable table = load_ratings(*ratings_path);
        bool degenerate = false;
        double kappa = fleiss_kappa(table.counts, table.raters, &degenerate);
        if (degenerate) {
            std::cerr << "warning: chance agreement is 1; kappa pinned to "
                         "1.0\n";
        }
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6f", kappa);
        std::cout << "kappa\t" << buf << '\n';

        if (!out_path->empty()) {
            std::string out = "metric\tvalue\nkappa\t";
            out += buf;
            out += '\n';
            write_text(*out_path, out);
            Manifest manifest;
            manifest.command = "kappa";
            manifest.flags = {{"ratings", *ratings_path}, {"out", *out_path}};
            manifest.seed = resolve_seed(sub, *seed);
            manifest.inputs = {*ratings_path};
            manifest.write(manifest_path(*out_path));
        }
    });
    return 0;
}

int register_align(CLI::App& app) {
    auto* sub = app.add_subcommand(
        "align", "Fit an orthogonal map between two embedding spaces");
    auto src_path = std::make_shared<std::string>();
    auto tgt_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto cap = std::make_shared<std::size_t>(50000);
    auto seed = std::make_shared<std::uint64_t>(42);
    sub->add_option("--src", *src_path, "Source word vectors")->required();
    sub->add_option("--tgt", *tgt_path, "Target word vectors")->required();
    sub->add_option("--out", *out_path, "Alignment matrix file")->required();
    sub->add_option("--cap", *cap, "Pseudo-dictionary size cap");
    sub->add_option("--seed", *seed, "Random seed (recorded only)");

    sub->callback([sub, src_path, tgt_path, out_path, cap, seed]() {
        require_file(*src_path);
        require_file(*tgt_path);
        EmbeddingTable src =
            load_embeddings(*src_path, language_from_path(*src_path));
        EmbeddingTable tgt =
            load_embeddings(*tgt_path, language_from_path(*tgt_path));
        std::vector<std::string> dict =
            build_pseudo_dictionary(src, tgt, *cap);
        AlignmentMatrix matrix = align(src, tgt, dict);
        if (matrix.degenerate) {
            std::cerr << "warning: rank-deficient dictionary; applied the "
                         "deterministic sign convention\n";
        }
        save_alignment(matrix, *out_path);
        std::cout << "aligned d=" << src.dimension << " with " << dict.size()
                  << " dictionary pairs\n";

        Manifest manifest;
        manifest.command = "align";
        manifest.flags = {{"src", *src_path},
                          {"tgt", *tgt_path},
                          {"out", *out_path},
                          {"cap", *cap}};
        manifest.seed = resolve_seed(sub, *seed);
        manifest.inputs = {*src_path, *tgt_path};
        manifest.write(manifest_path(*out_path));
    });
    return 0;
}

int register_synth(CLI::App& app) {
    auto* sub = app.add_subcommand(
        "synth", "Generate the synthetic evaluation corpora");
    auto profile = std::make_shared<std::string>("xlang");
    auto out_dir = std::make_shared<std::string>();
    auto users = std::make_shared<int>(200);
    auto tweets = std::make_shared<int>(50);
    auto emb_dim = std::make_shared<int>(0);
    auto seed = std::make_shared<std::uint64_t>(42);
    sub->add_option("--profile", *profile,
                    "xlang (style-only signal, disjoint lexicons) or inlang "
                    "(lexical + style signal)")
        ->check(CLI::IsMember({"xlang", "inlang"}));
    sub->add_option("--out", *out_dir, "Output directory")->required();
    sub->add_option("--users", *users, "Users per language (even)");
    sub->add_option("--tweets", *tweets, "Tweets per user");
    sub->add_option("--emb-dim", *emb_dim,
                    "Also write toy word vectors of this dimension (0 = "
                    "none)");
    sub->add_option("--seed", *seed, "Random seed");

    sub->callback([sub, profile, out_dir, users, tweets, emb_dim, seed]() {
        Manifest manifest;
        manifest.command = "synth";
        std::uint64_t s = resolve_seed(sub, *seed);
        SynthConfig cfg;
        cfg.profile = *profile == "inlang" ? SynthProfile::InLanguage
                                           : SynthProfile::CrossLingual;
        cfg.users = *users;
        cfg.tweets = *tweets;
        cfg.seed = s;

        std::error_code ec;
        fs::create_directories(*out_dir, ec);
        if (ec) {
            throw IoError("cannot create directory: " + *out_dir + " (" +
                          ec.message() + ")");
        }
        for (const SynthLanguage& lang : synth_languages()) {
            Corpus corpus = synth_corpus(lang, cfg);
            fs::path corpus_path = fs::path(*out_dir) / (lang.code + ".jsonl");
            save_corpus(corpus, corpus_path);
            std::cout << "wrote " << corpus_path.string() << " ("
                      << corpus.users.size() << " users)\n";
            if (*emb_dim > 0) {
                EmbeddingTable table = toy_embeddings(corpus, *emb_dim, s);
                fs::path emb_path = fs::path(*out_dir) / (lang.code + ".vec");
                save_embeddings(table, emb_path);
                std::cout << "wrote " << emb_path.string() << " ("
                          << table.vectors.size() << " vectors)\n";
            }
        }

        manifest.flags = {{"profile", *profile},
                          {"out", *out_dir},
                          {"users", *users},
                          {"tweets", *tweets},
                          {"emb_dim", *emb_dim}};
        manifest.seed = s;
        manifest.write(fs::path(*out_dir) / "manifest.json");
    });
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Author-gender prediction via text bleaching"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    register_bleach(app);
    register_train(app);
    register_predict(app);
    register_evaluate(app);
    register_cv(app);
    register_xlang(app);
    register_features(app);
    register_kappa(app);
    register_align(app);
    register_synth(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        std::cerr << app.help() << '\n';
        return 1;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
