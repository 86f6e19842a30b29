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

#include "textbleach/linear.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "textbleach/error.hpp"
#include "textbleach/hash.hpp"
#include "textbleach/rng.hpp"

namespace textbleach {

namespace {

void check_dataset(std::span<const SparseVector> xs, std::span<const int> ys,
                   std::size_t dim) {
    if (xs.size() != ys.size()) {
        throw ValidationError("feature/label count mismatch");
    }
    if (xs.empty()) throw ValidationError("empty training set");
    bool pos = false, neg = false;
    for (int y : ys) {
        if (y == +1) {
            pos = true;
        } else if (y == -1) {
            neg = true;
        } else {
            throw ValidationError("labels must be +1 or -1");
        }
    }
    if (!pos || !neg) {
        throw ValidationError("training set contains a single class");
    }
    for (const SparseVector& x : xs) {
        for (const auto& [idx, val] : x.entries) {
            if (idx < 0 || static_cast<std::size_t>(idx) >= dim) {
                throw ValidationError("feature index out of range: " +
                                      std::to_string(idx));
            }
            if (!std::isfinite(val)) {
                throw ValidationError("non-finite feature value");
            }
        }
    }
}

double dot_plus_bias(const Eigen::VectorXd& w, const SparseVector& x) {
    double s = w[w.size() - 1];  // implicit bias feature = 1
    for (const auto& [idx, val] : x.entries) s += w[idx] * val;
    return s;
}

}  // namespace

double primal_objective(const Eigen::VectorXd& weights,
                        std::span<const SparseVector> xs,
                        std::span<const int> ys, double C) {
    double obj = 0.5 * weights.squaredNorm();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double margin = 1.0 - ys[i] * dot_plus_bias(weights, xs[i]);
        if (margin > 0.0) obj += C * margin * margin;
    }
    return obj;
}

TrainResult train_svm(std::span<const SparseVector> xs,
                      std::span<const int> ys, std::size_t dim,
                      const TrainerConfig& config) {
    if (config.C <= 0.0) throw ValidationError("C must be positive");
    if (config.tol <= 0.0) throw ValidationError("tol must be positive");
    if (config.max_epochs < 1) {
        throw ValidationError("max_epochs must be at least 1");
    }
    check_dataset(xs, ys, dim);

    const std::size_t n = xs.size();
    const double d_ii = 1.0 / (2.0 * config.C);

    // Diagonal of Q-bar; the +1 is the implicit bias feature.
    std::vector<double> qbar(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sq = 1.0;
        for (const auto& [idx, val] : xs[i].entries) {
            (void)idx;
            sq += val * val;
        }
        qbar[i] = sq + d_ii;
    }

    Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim) + 1);
    std::vector<double> alpha(n, 0.0);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    Rng rng(config.seed);
    TrainStats stats;
    Eigen::VectorXd best_w = w;
    double best_obj = primal_objective(w, xs, ys, config.C);

    for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
        rng.shuffle(order);
        double pg_max = -std::numeric_limits<double>::infinity();
        double pg_min = std::numeric_limits<double>::infinity();

        for (std::size_t i : order) {
            const double yi = ys[i];
            double g = yi * dot_plus_bias(w, xs[i]) - 1.0 + alpha[i] * d_ii;
            double pg = (alpha[i] == 0.0) ? std::min(g, 0.0) : g;
            pg_max = std::max(pg_max, pg);
            pg_min = std::min(pg_min, pg);
            if (std::abs(pg) > 1e-12) {
                double a_new = std::max(alpha[i] - g / qbar[i], 0.0);
                double delta = (a_new - alpha[i]) * yi;
                for (const auto& [idx, val] : xs[i].entries) {
                    w[idx] += delta * val;
                }
                w[w.size() - 1] += delta;
                alpha[i] = a_new;
            }
        }

        ++stats.epochs;
        double obj = primal_objective(w, xs, ys, config.C);
        if (obj < best_obj) {
            best_obj = obj;
            best_w = w;
        }
        stats.objective_curve.push_back(best_obj);
        if (pg_max - pg_min < config.tol) {
            stats.converged = true;
            break;
        }
    }

    stats.objective = best_obj;
    return TrainResult{std::move(best_w), std::move(stats)};
}

double LinearModel::decision(const SparseVector& x) const {
    const auto n = static_cast<std::int64_t>(vocab.size());
    if (weights.size() != n + 1) {
        throw ValidationError("weight vector does not match vocabulary");
    }
    double s = weights[n];
    for (const auto& [idx, val] : x.entries) {
        if (idx < 0 || idx >= n) {
            throw ValidationError("feature index out of range: " +
                                  std::to_string(idx));
        }
        s += weights[idx] * val;
    }
    return s;
}

Gender LinearModel::predict(const SparseVector& x) const {
    return decision(x) >= 0.0 ? Gender::F : Gender::M;
}

Featurizer LinearModel::featurizer() const {
    return Featurizer::from_parts(spec, vocab, freq);
}

std::vector<FeatureWeight> top_features(const LinearModel& model, Gender g,
                                        std::size_t k) {
    const double sign = gender_sign(g);
    std::vector<std::size_t> idx(model.vocab.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        double wa = sign * model.weights[static_cast<Eigen::Index>(a)];
        double wb = sign * model.weights[static_cast<Eigen::Index>(b)];
        if (wa != wb) return wa > wb;
        return model.vocab.features[a] < model.vocab.features[b];
    });
    std::vector<FeatureWeight> out;
    out.reserve(std::min(k, idx.size()));
    for (std::size_t i = 0; i < idx.size() && i < k; ++i) {
        out.push_back({model.vocab.features[idx[i]],
                       model.weights[static_cast<Eigen::Index>(idx[i])]});
    }
    return out;
}

TopFeatureLists top_features(const LinearModel& model, std::size_t k) {
    return {top_features(model, Gender::F, k),
            top_features(model, Gender::M, k)};
}

namespace {

constexpr std::string_view kModelMagic = "textbleach-model 1";

using json = nlohmann::json;

std::string weighting_name(Weighting w) {
    return w == Weighting::Binary ? "binary" : "tfidf";
}

Weighting weighting_from_name(const std::string& s) {
    if (s == "binary") return Weighting::Binary;
    if (s == "tfidf") return Weighting::TfIdf;
    throw ParseError("unknown weighting: " + s);
}

json spec_to_json(const FeatureSpec& spec) {
    json j;
    j["mode"] = spec.mode == FeatureMode::Lexical ? "lexical" : "abstract";
    j["token_ngrams"] = {spec.token_ngrams.lo, spec.token_ngrams.hi};
    if (spec.char_ngrams) {
        j["char_ngrams"] = {spec.char_ngrams->lo, spec.char_ngrams->hi};
    } else {
        j["char_ngrams"] = nullptr;
    }
    j["channels"] = channels_to_string(spec.channels);
    j["weighting"] = weighting_name(spec.weighting);
    return j;
}

FeatureSpec spec_from_json(const json& j) {
    FeatureSpec spec;
    std::string mode = j.at("mode").get<std::string>();
    if (mode == "lexical") {
        spec.mode = FeatureMode::Lexical;
    } else if (mode == "abstract") {
        spec.mode = FeatureMode::Abstract;
    } else {
        throw ParseError("unknown feature mode: " + mode);
    }
    spec.token_ngrams = {j.at("token_ngrams").at(0).get<int>(),
                         j.at("token_ngrams").at(1).get<int>()};
    if (j.at("char_ngrams").is_null()) {
        spec.char_ngrams.reset();
    } else {
        spec.char_ngrams = NgramRange{j.at("char_ngrams").at(0).get<int>(),
                                      j.at("char_ngrams").at(1).get<int>()};
    }
    std::string channels = j.at("channels").get<std::string>();
    spec.channels =
        channels.empty() ? ChannelSet{} : parse_channels(channels);
    spec.weighting = weighting_from_name(j.at("weighting").get<std::string>());
    return spec;
}

std::string model_body(const LinearModel& model) {
    json j;
    j["language"] = model.language;
    j["spec"] = spec_to_json(model.spec);
    j["trainer"] = {{"C", model.trainer.C},
                    {"tol", model.trainer.tol},
                    {"max_epochs", model.trainer.max_epochs},
                    {"seed", model.trainer.seed}};
    j["vocabulary"] = {{"features", model.vocab.features},
                       {"df", model.vocab.df},
                       {"num_docs", model.vocab.num_docs},
                       {"source_users", model.vocab.source_users}};
    if (model.freq) {
        std::vector<std::pair<std::string, std::int64_t>> counts(
            model.freq->counts.begin(), model.freq->counts.end());
        std::sort(counts.begin(), counts.end());
        json jt = json::array();
        for (const auto& [tok, count] : counts) jt.push_back({tok, count});
        j["frequency_table"] = {{"counts", std::move(jt)},
                                {"source_users", model.freq->source_users}};
    } else {
        j["frequency_table"] = nullptr;
    }
    std::vector<double> w(model.weights.data(),
                          model.weights.data() + model.weights.size());
    j["weights"] = std::move(w);
    return j.dump();
}

}  // namespace

void save_model(const LinearModel& model, const std::filesystem::path& path) {
    std::string body = model_body(model);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << kModelMagic << '\n' << to_hex(fnv1a64(body)) << '\n' << body << '\n';
    out.flush();
    if (!out) throw IoError("failed to write: " + path.string());
}

LinearModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());
    std::string magic, checksum, body;
    if (!std::getline(in, magic)) {
        throw ModelTruncatedError("empty model file: " + path.string());
    }
    if (magic != kModelMagic) {
        throw ModelVersionError("unsupported model header: " + magic);
    }
    if (!std::getline(in, checksum)) {
        throw ModelTruncatedError("model file missing checksum: " +
                                  path.string());
    }
    if (!std::getline(in, body) || body.empty()) {
        throw ModelTruncatedError("model file missing body: " + path.string());
    }
    if (to_hex(fnv1a64(body)) != checksum) {
        throw ModelChecksumError("model checksum mismatch: " + path.string());
    }

    json j;
    try {
        j = json::parse(body);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("bad model body: ") + e.what());
    }

    try {
        LinearModel model;
        model.language = j.at("language").get<std::string>();
        model.spec = spec_from_json(j.at("spec"));
        const json& jt = j.at("trainer");
        model.trainer.C = jt.at("C").get<double>();
        model.trainer.tol = jt.at("tol").get<double>();
        model.trainer.max_epochs = jt.at("max_epochs").get<int>();
        model.trainer.seed = jt.at("seed").get<std::uint64_t>();
        const json& jv = j.at("vocabulary");
        model.vocab.features = jv.at("features").get<std::vector<std::string>>();
        model.vocab.df = jv.at("df").get<std::vector<std::int64_t>>();
        model.vocab.num_docs = jv.at("num_docs").get<std::int64_t>();
        model.vocab.source_users =
            jv.at("source_users").get<std::vector<std::string>>();
        if (model.vocab.df.size() != model.vocab.features.size()) {
            throw ParseError("vocabulary df/features size mismatch");
        }
        model.vocab.index.reserve(model.vocab.features.size());
        for (std::size_t i = 0; i < model.vocab.features.size(); ++i) {
            model.vocab.index.emplace(model.vocab.features[i],
                                      static_cast<std::int32_t>(i));
        }
        if (!j.at("frequency_table").is_null()) {
            FrequencyTable table;
            for (const auto& pair : j.at("frequency_table").at("counts")) {
                table.counts.emplace(pair.at(0).get<std::string>(),
                                     pair.at(1).get<std::int64_t>());
            }
            table.source_users = j.at("frequency_table")
                                     .at("source_users")
                                     .get<std::vector<std::string>>();
            model.freq = std::move(table);
        }
        std::vector<double> w = j.at("weights").get<std::vector<double>>();
        if (w.size() != model.vocab.size() + 1) {
            throw ParseError("weight count does not match vocabulary");
        }
        model.weights = Eigen::Map<const Eigen::VectorXd>(
            w.data(), static_cast<Eigen::Index>(w.size()));
        return model;
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad model body: ") + e.what());
    }
}

}  // namespace textbleach
