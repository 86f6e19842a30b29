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

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "textbleach/embed.hpp"
#include "textbleach/linear.hpp"

namespace textbleach {

struct ExperimentConfig {
    FeatureSpec spec = FeatureSpec::abstract_defaults();
    TrainerConfig trainer;
    MinDfPolicy min_df;
    int tweets_per_user = 200;
    int folds = 10;
    std::uint64_t seed = 0;  // drives fold assignment / balancing

    void validate() const;  // throws ValidationError
};

// Fraction of exact matches; lengths must agree and be nonzero.
double accuracy(std::span<const Gender> pred, std::span<const Gender> gold);

// Featurizes + trains on the given training users only.
LinearModel fit_model(const Corpus& corpus,
                      std::span<const std::size_t> train_indices,
                      const ExperimentConfig& cfg);
LinearModel fit_model(const Corpus& corpus, const ExperimentConfig& cfg);

std::vector<Gender> predict_users(const LinearModel& model,
                                  const Corpus& corpus,
                                  std::span<const std::size_t> indices);
std::vector<Gender> predict_users(const LinearModel& model,
                                  const Corpus& corpus);

// Throws HygieneError when any test user id occurs in the sorted list of
// users some fitted statistic was built from.
void assert_disjoint_provenance(std::span<const std::string> fitted_users,
                                std::span<const std::string> test_user_ids);

struct CvResult {
    std::vector<double> fold_accuracies;
    double mean = 0.0;
};

// Stratified k-fold cross-validation; expects a balanced corpus.
CvResult run_cv(const Corpus& corpus, const ExperimentConfig& cfg);

struct PairAccuracy {
    std::string source;
    std::string target;
    double accuracy = 0.0;
};

struct CrossResult {
    std::vector<PairAccuracy> pairs;  // one per source model
    double accuracy = 0.0;            // mean (Avg) or single run (All)
};

// Avg setting: one model per source corpus, each evaluated on the full
// target; result is the unweighted mean. Target language must not occur
// among the sources.
CrossResult run_cross_avg(std::span<const Corpus> sources,
                          const Corpus& target, const ExperimentConfig& cfg);

// All setting: one model over the concatenated sources (joint frequency
// table and vocabulary), evaluated on the target.
CrossResult run_cross_all(std::span<const Corpus> sources,
                          const Corpus& target, const ExperimentConfig& cfg);

// Concatenates corpora for the All setting; user ids get a language prefix
// so provenance stays unambiguous.
Corpus concat_corpora(std::span<const Corpus> corpora);

// Embedding-baseline counterparts: users are represented by dense
// mean/max/std/coverage embedding features; source vectors are mapped into
// the target space with a pseudo-dictionary Procrustes alignment.
CvResult run_cv_embed(const Corpus& corpus, const EmbeddingTable& table,
                      const ExperimentConfig& cfg);
CrossResult run_cross_avg_embed(std::span<const Corpus> sources,
                                std::span<const EmbeddingTable> tables,
                                const Corpus& target,
                                const EmbeddingTable& target_table,
                                const ExperimentConfig& cfg);
CrossResult run_cross_all_embed(std::span<const Corpus> sources,
                                std::span<const EmbeddingTable> tables,
                                const Corpus& target,
                                const EmbeddingTable& target_table,
                                const ExperimentConfig& cfg);

struct RankedFeature {
    std::string feature;
    int score = 0;                 // languages where it made the top-k
    double mean_abs_weight = 0.0;  // over those languages
};

struct FeatureReport {
    std::vector<RankedFeature> f_side;
    std::vector<RankedFeature> m_side;
};

// Aggregates each model's top-k per gender; features rank by how many
// models listed them, ties by mean |weight|, then name. All models must
// share one FeatureSpec.
FeatureReport top_feature_report(std::span<const LinearModel> models,
                                 std::size_t k);

// counts: one row per item, one column per category, each row summing to
// `raters`. Sets *degenerate when chance agreement is 1 (kappa pinned to 1).
double fleiss_kappa(const std::vector<std::vector<int>>& counts, int raters,
                    bool* degenerate = nullptr);

struct RatingsTable {
    std::vector<std::string> items;       // sorted item ids
    std::vector<std::string> categories;  // sorted labels
    std::vector<std::vector<int>> counts;
    int raters = 0;
};

// TSV with a header line, then rows item_id<TAB>rater_id<TAB>label. Every
// item must have the same number of ratings, one per rater.
RatingsTable load_ratings(const std::filesystem::path& path);

struct ResultRow {
    std::string experiment;
    std::string source;
    std::string target;
    double accuracy = 0.0;
};

// Machine-readable block: header then rows, accuracy with 3 decimals.
std::string results_to_tsv(std::span<const ResultRow> rows);
// Space-aligned twin of the TSV for humans.
std::string results_to_pretty(std::span<const ResultRow> rows);

}  // namespace textbleach
