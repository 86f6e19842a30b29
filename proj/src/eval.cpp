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

#include "textbleach/eval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "textbleach/error.hpp"

namespace textbleach {

void ExperimentConfig::validate() const {
    spec.validate();
    if (folds < 2) throw ValidationError("folds must be at least 2");
    if (tweets_per_user < 1) {
        throw ValidationError("tweets_per_user must be at least 1");
    }
    if (trainer.C <= 0.0) throw ValidationError("C must be positive");
    if (trainer.tol <= 0.0) throw ValidationError("tol must be positive");
}

double accuracy(std::span<const Gender> pred, std::span<const Gender> gold) {
    if (pred.size() != gold.size()) {
        throw ValidationError("prediction/gold length mismatch");
    }
    if (pred.empty()) throw ValidationError("empty prediction list");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (pred[i] == gold[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(pred.size());
}

LinearModel fit_model(const Corpus& corpus,
                      std::span<const std::size_t> train_indices,
                      const ExperimentConfig& cfg) {
    cfg.validate();
    if (train_indices.empty()) throw ValidationError("empty training set");

    Featurizer featurizer =
        Featurizer::fit(corpus, train_indices, cfg.spec, cfg.min_df);
    std::vector<SparseVector> xs;
    std::vector<int> ys;
    xs.reserve(train_indices.size());
    ys.reserve(train_indices.size());
    for (std::size_t idx : train_indices) {
        const UserRecord& user = corpus.users[idx];
        xs.push_back(featurizer.transform(user));
        ys.push_back(gender_sign(user.gender));
    }

    TrainResult trained =
        train_svm(xs, ys, featurizer.vocabulary().size(), cfg.trainer);

    LinearModel model;
    model.language = corpus.language;
    model.spec = cfg.spec;
    model.vocab = featurizer.vocabulary();
    model.freq = featurizer.frequency_table();
    model.trainer = cfg.trainer;
    model.weights = std::move(trained.weights);
    return model;
}

LinearModel fit_model(const Corpus& corpus, const ExperimentConfig& cfg) {
    std::vector<std::size_t> all(corpus.users.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return fit_model(corpus, all, cfg);
}

std::vector<Gender> predict_users(const LinearModel& model,
                                  const Corpus& corpus,
                                  std::span<const std::size_t> indices) {
    Featurizer featurizer = model.featurizer();
    std::vector<Gender> out;
    out.reserve(indices.size());
    for (std::size_t idx : indices) {
        if (idx >= corpus.users.size()) {
            throw ValidationError("user index out of range");
        }
        out.push_back(model.predict(featurizer.transform(corpus.users[idx])));
    }
    return out;
}

std::vector<Gender> predict_users(const LinearModel& model,
                                  const Corpus& corpus) {
    std::vector<std::size_t> all(corpus.users.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return predict_users(model, corpus, all);
}

void assert_disjoint_provenance(std::span<const std::string> fitted_users,
                                std::span<const std::string> test_user_ids) {
    for (const std::string& id : test_user_ids) {
        if (std::binary_search(fitted_users.begin(), fitted_users.end(), id)) {
            throw HygieneError("test user leaked into fitted statistics: " +
                               id);
        }
    }
}

namespace {

void check_model_hygiene(const LinearModel& model,
                         std::span<const std::string> test_user_ids) {
    assert_disjoint_provenance(model.vocab.source_users, test_user_ids);
    if (model.freq) {
        assert_disjoint_provenance(model.freq->source_users, test_user_ids);
    }
}

std::vector<std::string> user_ids(const Corpus& corpus,
                                  std::span<const std::size_t> indices) {
    std::vector<std::string> ids;
    ids.reserve(indices.size());
    for (std::size_t idx : indices) ids.push_back(corpus.users[idx].user_id);
    return ids;
}

std::vector<Gender> gold_labels(const Corpus& corpus,
                                std::span<const std::size_t> indices) {
    std::vector<Gender> out;
    out.reserve(indices.size());
    for (std::size_t idx : indices) out.push_back(corpus.users[idx].gender);
    return out;
}

void check_cross_preconditions(std::span<const Corpus> sources,
                               const Corpus& target) {
    if (sources.empty()) throw ValidationError("no source corpora");
    for (const Corpus& src : sources) {
        if (src.language == target.language) {
            throw ValidationError("target language '" + target.language +
                                  "' also appears among the sources");
        }
    }
}

std::vector<Gender> all_gold(const Corpus& corpus) {
    std::vector<Gender> out;
    out.reserve(corpus.users.size());
    for (const UserRecord& u : corpus.users) out.push_back(u.gender);
    return out;
}

std::vector<std::string> all_ids(const Corpus& corpus) {
    std::vector<std::string> out;
    out.reserve(corpus.users.size());
    for (const UserRecord& u : corpus.users) out.push_back(u.user_id);
    return out;
}

}  // namespace

CvResult run_cv(const Corpus& corpus, const ExperimentConfig& cfg) {
    cfg.validate();
    if (corpus.count(Gender::F) != corpus.count(Gender::M)) {
        throw ValidationError("cross-validation expects a balanced corpus");
    }
    std::vector<FoldSplit> folds =
        stratified_kfold(corpus, cfg.folds, cfg.seed);

    CvResult result;
    result.fold_accuracies.reserve(folds.size());
    double sum = 0.0;
    for (const FoldSplit& fold : folds) {
        LinearModel model = fit_model(corpus, fold.train, cfg);
        check_model_hygiene(model, user_ids(corpus, fold.test));
        std::vector<Gender> pred = predict_users(model, corpus, fold.test);
        double acc = accuracy(pred, gold_labels(corpus, fold.test));
        result.fold_accuracies.push_back(acc);
        sum += acc;
    }
    result.mean = sum / static_cast<double>(folds.size());
    return result;
}

CrossResult run_cross_avg(std::span<const Corpus> sources,
                          const Corpus& target, const ExperimentConfig& cfg) {
    cfg.validate();
    check_cross_preconditions(sources, target);
    std::vector<std::string> target_ids = all_ids(target);
    std::vector<Gender> gold = all_gold(target);

    CrossResult result;
    double sum = 0.0;
    for (const Corpus& src : sources) {
        LinearModel model = fit_model(src, cfg);
        check_model_hygiene(model, target_ids);
        double acc = accuracy(predict_users(model, target), gold);
        result.pairs.push_back({src.language, target.language, acc});
        sum += acc;
    }
    result.accuracy = sum / static_cast<double>(sources.size());
    return result;
}

Corpus concat_corpora(std::span<const Corpus> corpora) {
    if (corpora.empty()) throw ValidationError("no corpora to concatenate");
    Corpus joint;
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < corpora.size(); ++i) {
        if (i > 0) joint.language += '+';
        joint.language += corpora[i].language;
        for (const UserRecord& user : corpora[i].users) {
            UserRecord copy = user;
            copy.user_id = corpora[i].language + ":" + user.user_id;
            if (!seen.insert(copy.user_id).second) {
                throw ValidationError("duplicate user id after concatenation: " +
                                      copy.user_id);
            }
            joint.users.push_back(std::move(copy));
        }
    }
    return joint;
}

CrossResult run_cross_all(std::span<const Corpus> sources,
                          const Corpus& target, const ExperimentConfig& cfg) {
    cfg.validate();
    check_cross_preconditions(sources, target);
    Corpus joint = concat_corpora(sources);

    LinearModel model = fit_model(joint, cfg);
    check_model_hygiene(model, all_ids(target));
    double acc = accuracy(predict_users(model, target), all_gold(target));

    CrossResult result;
    result.pairs.push_back({joint.language, target.language, acc});
    result.accuracy = acc;
    return result;
}

namespace {

// Dense embedding features for every listed user of a corpus.
std::vector<SparseVector> embed_users(const Corpus& corpus,
                                      std::span<const std::size_t> indices,
                                      const EmbeddingTable& table,
                                      const AlignmentMatrix* alignment) {
    std::vector<SparseVector> out;
    out.reserve(indices.size());
    for (std::size_t idx : indices) {
        out.push_back(dense_to_sparse(
            user_embedding(corpus.users[idx].tweets, table, alignment)));
    }
    return out;
}

std::vector<std::size_t> iota_indices(std::size_t n) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    return all;
}

std::vector<Gender> predict_dense(const Eigen::VectorXd& weights,
                                  std::span<const SparseVector> xs) {
    std::vector<Gender> out;
    out.reserve(xs.size());
    for (const SparseVector& x : xs) {
        double s = weights[weights.size() - 1];
        for (const auto& [idx, val] : x.entries) s += weights[idx] * val;
        out.push_back(s >= 0.0 ? Gender::F : Gender::M);
    }
    return out;
}

const EmbeddingTable& table_for(std::span<const EmbeddingTable> tables,
                                const std::string& language) {
    for (const EmbeddingTable& t : tables) {
        if (t.language == language) return t;
    }
    throw ValidationError("no embedding table for language '" + language +
                          "'");
}

}  // namespace

CvResult run_cv_embed(const Corpus& corpus, const EmbeddingTable& table,
                      const ExperimentConfig& cfg) {
    cfg.validate();
    if (corpus.count(Gender::F) != corpus.count(Gender::M)) {
        throw ValidationError("cross-validation expects a balanced corpus");
    }
    std::vector<FoldSplit> folds =
        stratified_kfold(corpus, cfg.folds, cfg.seed);
    const std::size_t dim = 3 * static_cast<std::size_t>(table.dimension) + 1;

    CvResult result;
    double sum = 0.0;
    for (const FoldSplit& fold : folds) {
        std::vector<SparseVector> xs =
            embed_users(corpus, fold.train, table, nullptr);
        std::vector<int> ys;
        for (std::size_t idx : fold.train) {
            ys.push_back(gender_sign(corpus.users[idx].gender));
        }
        TrainResult trained = train_svm(xs, ys, dim, cfg.trainer);
        std::vector<SparseVector> test_xs =
            embed_users(corpus, fold.test, table, nullptr);
        double acc = accuracy(predict_dense(trained.weights, test_xs),
                              gold_labels(corpus, fold.test));
        result.fold_accuracies.push_back(acc);
        sum += acc;
    }
    result.mean = sum / static_cast<double>(folds.size());
    return result;
}

CrossResult run_cross_avg_embed(std::span<const Corpus> sources,
                                std::span<const EmbeddingTable> tables,
                                const Corpus& target,
                                const EmbeddingTable& target_table,
                                const ExperimentConfig& cfg) {
    cfg.validate();
    check_cross_preconditions(sources, target);
    const std::size_t dim =
        3 * static_cast<std::size_t>(target_table.dimension) + 1;
    std::vector<std::size_t> tgt_idx = iota_indices(target.users.size());
    std::vector<SparseVector> tgt_xs =
        embed_users(target, tgt_idx, target_table, nullptr);
    std::vector<Gender> gold = all_gold(target);

    CrossResult result;
    double sum = 0.0;
    for (const Corpus& src : sources) {
        const EmbeddingTable& src_table = table_for(tables, src.language);
        std::vector<std::string> dict =
            build_pseudo_dictionary(src_table, target_table);
        AlignmentMatrix A = align(src_table, target_table, dict);
        std::vector<std::size_t> src_idx = iota_indices(src.users.size());
        std::vector<SparseVector> xs = embed_users(src, src_idx, src_table, &A);
        std::vector<int> ys;
        for (const UserRecord& u : src.users) ys.push_back(gender_sign(u.gender));
        TrainResult trained = train_svm(xs, ys, dim, cfg.trainer);
        double acc = accuracy(predict_dense(trained.weights, tgt_xs), gold);
        result.pairs.push_back({src.language, target.language, acc});
        sum += acc;
    }
    result.accuracy = sum / static_cast<double>(sources.size());
    return result;
}

CrossResult run_cross_all_embed(std::span<const Corpus> sources,
                                std::span<const EmbeddingTable> tables,
                                const Corpus& target,
                                const EmbeddingTable& target_table,
                                const ExperimentConfig& cfg) {
    cfg.validate();
    check_cross_preconditions(sources, target);
    const std::size_t dim =
        3 * static_cast<std::size_t>(target_table.dimension) + 1;

    std::vector<SparseVector> xs;
    std::vector<int> ys;
    std::string joined;
    for (std::size_t i = 0; i < sources.size(); ++i) {
        const Corpus& src = sources[i];
        if (i > 0) joined += '+';
        joined += src.language;
        const EmbeddingTable& src_table = table_for(tables, src.language);
        std::vector<std::string> dict =
            build_pseudo_dictionary(src_table, target_table);
        AlignmentMatrix A = align(src_table, target_table, dict);
        std::vector<std::size_t> src_idx = iota_indices(src.users.size());
        std::vector<SparseVector> mapped =
            embed_users(src, src_idx, src_table, &A);
        xs.insert(xs.end(), std::make_move_iterator(mapped.begin()),
                  std::make_move_iterator(mapped.end()));
        for (const UserRecord& u : src.users) ys.push_back(gender_sign(u.gender));
    }
    TrainResult trained = train_svm(xs, ys, dim, cfg.trainer);

    std::vector<std::size_t> tgt_idx = iota_indices(target.users.size());
    std::vector<SparseVector> tgt_xs =
        embed_users(target, tgt_idx, target_table, nullptr);
    double acc =
        accuracy(predict_dense(trained.weights, tgt_xs), all_gold(target));

    CrossResult result;
    result.pairs.push_back({joined, target.language, acc});
    result.accuracy = acc;
    return result;
}

FeatureReport top_feature_report(std::span<const LinearModel> models,
                                 std::size_t k) {
    if (models.empty()) throw ValidationError("no models to aggregate");
    if (k < 1) throw ValidationError("k must be at least 1");
    for (const LinearModel& m : models) {
        if (!(m.spec == models.front().spec)) {
            throw ValidationError(
                "models use different feature specs; report undefined");
        }
    }

    struct Tally {
        int score = 0;
        double abs_sum = 0.0;
    };
    auto aggregate = [&](Gender g) {
        std::map<std::string, Tally> tally;
        for (const LinearModel& m : models) {
            for (const FeatureWeight& fw : top_features(m, g, k)) {
                Tally& t = tally[fw.feature];
                ++t.score;
                t.abs_sum += std::abs(fw.weight);
            }
        }
        std::vector<RankedFeature> out;
        out.reserve(tally.size());
        for (const auto& [feature, t] : tally) {
            out.push_back(
                {feature, t.score, t.abs_sum / static_cast<double>(t.score)});
        }
        std::sort(out.begin(), out.end(),
                  [](const RankedFeature& a, const RankedFeature& b) {
                      if (a.score != b.score) return a.score > b.score;
                      if (a.mean_abs_weight != b.mean_abs_weight) {
                          return a.mean_abs_weight > b.mean_abs_weight;
                      }
                      return a.feature < b.feature;
                  });
        return out;
    };

    FeatureReport report;
    report.f_side = aggregate(Gender::F);
    report.m_side = aggregate(Gender::M);
    return report;
}

double fleiss_kappa(const std::vector<std::vector<int>>& counts, int raters,
                    bool* degenerate) {
    if (degenerate) *degenerate = false;
    if (counts.empty()) throw ValidationError("no rating rows");
    if (raters < 2) throw ValidationError("need at least 2 raters");
    const std::size_t k = counts.front().size();
    if (k < 2) throw ValidationError("need at least 2 categories");

    const double N = static_cast<double>(counts.size());
    const double n = static_cast<double>(raters);
    std::vector<double> category_share(k, 0.0);
    double p_bar = 0.0;
    for (const std::vector<int>& row : counts) {
        if (row.size() != k) {
            throw ValidationError("ragged rating table");
        }
        long long row_sum = 0;
        double sq = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            if (row[j] < 0) throw ValidationError("negative rating count");
            row_sum += row[j];
            sq += static_cast<double>(row[j]) * row[j];
            category_share[j] += row[j];
        }
        if (row_sum != raters) {
            throw ValidationError("item rated by " + std::to_string(row_sum) +
                                  " raters, expected " +
                                  std::to_string(raters));
        }
        p_bar += (sq - n) / (n * (n - 1.0));
    }
    p_bar /= N;

    double pe = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        double share = category_share[j] / (N * n);
        pe += share * share;
    }
    if (pe >= 1.0) {
        // Every rater used one single category everywhere: agreement is
        // trivially perfect and the chance correction is undefined.
        if (degenerate) *degenerate = true;
        return 1.0;
    }
    return (p_bar - pe) / (1.0 - pe);
}

RatingsTable load_ratings(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());

    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("empty ratings file: " + path.string(), 1);
    }
    // Header line is required but its column names are free-form.

    struct Vote {
        std::string item, rater, label;
    };
    std::vector<Vote> votes;
    std::set<std::pair<std::string, std::string>> seen;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::size_t t1 = line.find('\t');
        std::size_t t2 = t1 == std::string::npos ? std::string::npos
                                                 : line.find('\t', t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos) {
            throw ParseError("expected item<TAB>rater<TAB>label", lineno);
        }
        Vote v{line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1),
               line.substr(t2 + 1)};
        if (v.item.empty() || v.rater.empty() || v.label.empty()) {
            throw ParseError("empty field in ratings row", lineno);
        }
        if (!seen.insert({v.item, v.rater}).second) {
            throw ValidationError("rater '" + v.rater + "' rated item '" +
                                  v.item + "' twice");
        }
        votes.push_back(std::move(v));
    }
    if (votes.empty()) throw ValidationError("ratings file has no rows");

    std::set<std::string> item_set, category_set;
    for (const Vote& v : votes) {
        item_set.insert(v.item);
        category_set.insert(v.label);
    }
    RatingsTable table;
    table.items.assign(item_set.begin(), item_set.end());
    table.categories.assign(category_set.begin(), category_set.end());
    if (table.categories.size() < 2) {
        throw ValidationError("ratings use fewer than 2 categories");
    }

    std::unordered_map<std::string, std::size_t> item_index, category_index;
    for (std::size_t i = 0; i < table.items.size(); ++i) {
        item_index[table.items[i]] = i;
    }
    for (std::size_t j = 0; j < table.categories.size(); ++j) {
        category_index[table.categories[j]] = j;
    }
    table.counts.assign(table.items.size(),
                        std::vector<int>(table.categories.size(), 0));
    for (const Vote& v : votes) {
        ++table.counts[item_index[v.item]][category_index[v.label]];
    }

    long long per_item = -1;
    for (const std::vector<int>& row : table.counts) {
        long long sum = 0;
        for (int c : row) sum += c;
        if (per_item < 0) {
            per_item = sum;
        } else if (sum != per_item) {
            throw ValidationError("items have unequal rater counts");
        }
    }
    table.raters = static_cast<int>(per_item);
    return table;
}

namespace {

std::string format_accuracy(double acc) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", acc);
    return buf;
}

}  // namespace

std::string results_to_tsv(std::span<const ResultRow> rows) {
    std::string out = "experiment\tsource\ttarget\taccuracy\n";
    for (const ResultRow& row : rows) {
        out += row.experiment;
        out += '\t';
        out += row.source;
        out += '\t';
        out += row.target;
        out += '\t';
        out += format_accuracy(row.accuracy);
        out += '\n';
    }
    return out;
}

std::string results_to_pretty(std::span<const ResultRow> rows) {
    const std::array<std::string, 4> header = {"experiment", "source",
                                               "target", "accuracy"};
    std::array<std::size_t, 4> width = {header[0].size(), header[1].size(),
                                        header[2].size(), header[3].size()};
    std::vector<std::array<std::string, 4>> cells;
    for (const ResultRow& row : rows) {
        cells.push_back({row.experiment, row.source, row.target,
                         format_accuracy(row.accuracy)});
        for (std::size_t c = 0; c < 4; ++c) {
            width[c] = std::max(width[c], cells.back()[c].size());
        }
    }
    auto emit_row = [&](const std::array<std::string, 4>& cols) {
        std::string line;
        for (std::size_t c = 0; c < 4; ++c) {
            if (c > 0) line += "  ";
            line += cols[c];
            if (c + 1 < 4) {
                line.append(width[c] - cols[c].size(), ' ');
            }
        }
        line += '\n';
        return line;
    };
    std::string out = emit_row(header);
    for (const auto& row : cells) out += emit_row(row);
    return out;
}

}  // namespace textbleach
