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

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "textbleach/features.hpp"

namespace textbleach {

struct TrainerConfig {
    double C = 1.0;
    double tol = 1e-4;
    int max_epochs = 1000;
    std::uint64_t seed = 0;
    bool operator==(const TrainerConfig&) const = default;
};

struct TrainStats {
    int epochs = 0;
    bool converged = false;
    double objective = 0.0;  // primal value at the returned weights
    // Primal value of the incumbent after each epoch; non-increasing.
    std::vector<double> objective_curve;
};

struct TrainResult {
    Eigen::VectorXd weights;  // dim + 1 entries, bias last
    TrainStats stats;
};

// L2-regularized squared-hinge SVM via dual coordinate descent. Labels must
// be +1/-1 with both classes present; the bias is an implicit always-one
// feature appended after `dim`. Deterministic for a fixed seed.
TrainResult train_svm(std::span<const SparseVector> xs,
                      std::span<const int> ys, std::size_t dim,
                      const TrainerConfig& config);

// 0.5*||w||^2 + C * sum_i max(0, 1 - y_i * f(x_i))^2 with the same implicit
// bias feature convention as train_svm.
double primal_objective(const Eigen::VectorXd& weights,
                        std::span<const SparseVector> xs,
                        std::span<const int> ys, double C);

// A trained classifier bundled with everything needed to featurize raw
// users the same way the training run did.
struct LinearModel {
    std::string language;
    FeatureSpec spec;
    Vocabulary vocab;
    std::optional<FrequencyTable> freq;
    TrainerConfig trainer;
    Eigen::VectorXd weights;  // vocab.size() + 1, bias last

    double bias() const { return weights[weights.size() - 1]; }
    double decision(const SparseVector& x) const;
    // decision >= 0 predicts F (ties go to F), negative predicts M.
    Gender predict(const SparseVector& x) const;
    Featurizer featurizer() const;
};

struct FeatureWeight {
    std::string feature;
    double weight;
};

// The k features pushing hardest toward the given gender, strongest first;
// equal weights break lexicographically. The bias never appears.
std::vector<FeatureWeight> top_features(const LinearModel& model, Gender g,
                                        std::size_t k);

struct TopFeatureLists {
    std::vector<FeatureWeight> f_side;  // most positive weights
    std::vector<FeatureWeight> m_side;  // most negative weights
};

TopFeatureLists top_features(const LinearModel& model, std::size_t k);

// Versioned, checksummed single-file container. Re-saving a loaded model
// reproduces the file byte for byte.
void save_model(const LinearModel& model, const std::filesystem::path& path);
LinearModel load_model(const std::filesystem::path& path);

}  // namespace textbleach
