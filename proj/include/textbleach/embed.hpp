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
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "textbleach/features.hpp"

namespace textbleach {

// Monolingual word vectors, all of one dimension.
struct EmbeddingTable {
    int dimension = 0;
    std::unordered_map<std::string, Eigen::VectorXd> vectors;
    std::string language;
    std::int64_t duplicate_count = 0;  // duplicate rows seen at load time

    const Eigen::VectorXd* find(const std::string& token) const {
        auto it = vectors.find(token);
        return it == vectors.end() ? nullptr : &it->second;
    }
};

// Text format: header "V d", then V lines "token v1 ... vd". Duplicate
// tokens keep the last row (counted in duplicate_count).
EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               std::string language);
void save_embeddings(const EmbeddingTable& table,
                     const std::filesystem::path& path);

// Identically spelled tokens present in both vocabularies, lexicographic,
// capped to the given size. Throws ValidationError when the intersection is
// empty (no anchor for alignment).
std::vector<std::string> build_pseudo_dictionary(const EmbeddingTable& src,
                                                 const EmbeddingTable& tgt,
                                                 std::size_t cap = 50000);

// Orthogonal map from source space into target space: for dictionary
// matrices X (source rows) and Y (target rows), W minimizes ||X W - Y||_F
// over orthogonal W.
struct AlignmentMatrix {
    Eigen::MatrixXd W;
    bool degenerate = false;  // rank-deficient dictionary, optimum not unique

    // Maps one source-space vector into target space (row convention x·W).
    Eigen::VectorXd apply(const Eigen::VectorXd& v) const {
        return W.transpose() * v;
    }
};

// Rows of X and Y are paired dictionary vectors. Both sides are
// mean-centered and row-normalized before the SVD; the singular-vector sign
// convention (first nonzero entry of each left singular vector positive)
// keeps results deterministic.
AlignmentMatrix align(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);
AlignmentMatrix align(const EmbeddingTable& src, const EmbeddingTable& tgt,
                      std::span<const std::string> dictionary);

// Stored as text: first line the dimension, then d rows of d floats.
void save_alignment(const AlignmentMatrix& m,
                    const std::filesystem::path& path);
AlignmentMatrix load_alignment(const std::filesystem::path& path);

// Per-user dense representation: element-wise mean, max and population std
// over the vectors of matched tokens, then the matched fraction. Length
// 3d+1; all zeros + coverage 0 when nothing matches.
Eigen::VectorXd user_embedding(std::span<const std::string> tweets,
                               const EmbeddingTable& table,
                               const AlignmentMatrix* alignment = nullptr);

// Dense-to-sparse adapter so the linear trainer can consume embeddings.
SparseVector dense_to_sparse(const Eigen::VectorXd& v);

}  // namespace textbleach
