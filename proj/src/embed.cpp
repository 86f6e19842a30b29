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

#include "textbleach/embed.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "textbleach/bleach.hpp"
#include "textbleach/error.hpp"

namespace textbleach {

namespace {

double parse_double(const std::string& s, long line) {
    double v;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError("bad number '" + s + "'", line);
    }
    if (!std::isfinite(v)) throw ParseError("non-finite value", line);
    return v;
}

// Writes doubles with enough digits to round-trip exactly.
void write_double(std::ostream& out, double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    out.write(buf, ptr - buf);
}

}  // namespace

EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               std::string language) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());

    EmbeddingTable table;
    table.language = std::move(language);

    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("empty embedding file: " + path.string(), 1);
    }
    std::istringstream header(line);
    long long vocab_size = 0, dim = 0;
    if (!(header >> vocab_size >> dim) || vocab_size < 1 || dim < 1) {
        throw ParseError("bad embedding header '" + line + "'", 1);
    }
    std::string trailing;
    if (header >> trailing) {
        throw ParseError("bad embedding header '" + line + "'", 1);
    }
    table.dimension = static_cast<int>(dim);

    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string token;
        if (!(row >> token)) continue;
        Eigen::VectorXd v(table.dimension);
        std::string field;
        for (int d = 0; d < table.dimension; ++d) {
            if (!(row >> field)) {
                throw ParseError("expected " + std::to_string(dim) +
                                     " values for token '" + token + "'",
                                 lineno);
            }
            v[d] = parse_double(field, lineno);
        }
        if (row >> field) {
            throw ParseError("too many values for token '" + token + "'",
                             lineno);
        }
        auto [it, inserted] = table.vectors.insert_or_assign(token, std::move(v));
        (void)it;
        if (!inserted) ++table.duplicate_count;
    }
    if (table.vectors.empty()) {
        throw ParseError("embedding file has no vectors: " + path.string(), 1);
    }
    return table;
}

void save_embeddings(const EmbeddingTable& table,
                     const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    std::vector<std::string> tokens;
    tokens.reserve(table.vectors.size());
    for (const auto& [tok, v] : table.vectors) {
        (void)v;
        tokens.push_back(tok);
    }
    std::sort(tokens.begin(), tokens.end());
    out << tokens.size() << ' ' << table.dimension << '\n';
    for (const std::string& tok : tokens) {
        out << tok;
        const Eigen::VectorXd& v = table.vectors.at(tok);
        for (int d = 0; d < table.dimension; ++d) {
            out << ' ';
            write_double(out, v[d]);
        }
        out << '\n';
    }
    if (!out) throw IoError("failed to write: " + path.string());
}

std::vector<std::string> build_pseudo_dictionary(const EmbeddingTable& src,
                                                 const EmbeddingTable& tgt,
                                                 std::size_t cap) {
    if (src.vectors.empty() || tgt.vectors.empty()) {
        throw ValidationError("empty embedding table");
    }
    std::vector<std::string> shared;
    for (const auto& [tok, v] : src.vectors) {
        (void)v;
        if (tgt.vectors.count(tok)) shared.push_back(tok);
    }
    if (shared.empty()) {
        throw ValidationError(
            "embedding vocabularies share no tokens; alignment impossible");
    }
    std::sort(shared.begin(), shared.end());
    if (shared.size() > cap) shared.resize(cap);
    return shared;
}

AlignmentMatrix align(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
    if (X.rows() != Y.rows() || X.cols() != Y.cols()) {
        throw ValidationError("dictionary matrices must have equal shape");
    }
    if (X.rows() < 2) {
        throw ValidationError("alignment needs at least 2 dictionary pairs");
    }
    const Eigen::Index d = X.cols();

    auto preprocess = [](Eigen::MatrixXd m) {
        m.rowwise() -= m.colwise().mean();
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            double n = m.row(i).norm();
            if (n > 1e-12) m.row(i) /= n;
        }
        return m;
    };
    Eigen::MatrixXd Xc = preprocess(X);
    Eigen::MatrixXd Yc = preprocess(Y);

    Eigen::MatrixXd M = Xc.transpose() * Yc;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::MatrixXd U = svd.matrixU();
    Eigen::MatrixXd V = svd.matrixV();

    // Fix each singular pair's sign so ties in the SVD cannot flip results
    // between runs/platforms: first nonzero entry of u_j made positive.
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
            double u = U(i, j);
            if (std::abs(u) > 1e-12) {
                if (u < 0.0) {
                    U.col(j) = -U.col(j);
                    V.col(j) = -V.col(j);
                }
                break;
            }
        }
    }

    AlignmentMatrix result;
    result.W = U * V.transpose();
    const auto& sv = svd.singularValues();
    result.degenerate = sv.size() > 0 && sv[sv.size() - 1] < 1e-12;
    return result;
}

AlignmentMatrix align(const EmbeddingTable& src, const EmbeddingTable& tgt,
                      std::span<const std::string> dictionary) {
    if (src.dimension != tgt.dimension) {
        throw ValidationError("embedding dimensions differ: " +
                              std::to_string(src.dimension) + " vs " +
                              std::to_string(tgt.dimension));
    }
    if (dictionary.size() < 2) {
        throw ValidationError("alignment needs at least 2 dictionary pairs");
    }
    Eigen::MatrixXd X(static_cast<Eigen::Index>(dictionary.size()),
                      src.dimension);
    Eigen::MatrixXd Y(static_cast<Eigen::Index>(dictionary.size()),
                      tgt.dimension);
    for (std::size_t i = 0; i < dictionary.size(); ++i) {
        const Eigen::VectorXd* xs = src.find(dictionary[i]);
        const Eigen::VectorXd* yt = tgt.find(dictionary[i]);
        if (!xs || !yt) {
            throw ValidationError("dictionary token missing from table: " +
                                  dictionary[i]);
        }
        X.row(static_cast<Eigen::Index>(i)) = xs->transpose();
        Y.row(static_cast<Eigen::Index>(i)) = yt->transpose();
    }
    return align(X, Y);
}

void save_alignment(const AlignmentMatrix& m,
                    const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << m.W.rows() << '\n';
    for (Eigen::Index i = 0; i < m.W.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.W.cols(); ++j) {
            if (j > 0) out << ' ';
            write_double(out, m.W(i, j));
        }
        out << '\n';
    }
    if (!out) throw IoError("failed to write: " + path.string());
}

AlignmentMatrix load_alignment(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("empty alignment file: " + path.string(), 1);
    }
    long long d = 0;
    try {
        d = std::stoll(line);
    } catch (const std::exception&) {
        throw ParseError("bad alignment dimension '" + line + "'", 1);
    }
    if (d < 1) throw ParseError("bad alignment dimension '" + line + "'", 1);

    AlignmentMatrix m;
    m.W.resize(d, d);
    for (long long i = 0; i < d; ++i) {
        if (!std::getline(in, line)) {
            throw ParseError("alignment file truncated",
                             static_cast<long>(i) + 2);
        }
        std::istringstream row(line);
        std::string field;
        for (long long j = 0; j < d; ++j) {
            if (!(row >> field)) {
                throw ParseError("alignment row too short",
                                 static_cast<long>(i) + 2);
            }
            m.W(i, j) = parse_double(field, static_cast<long>(i) + 2);
        }
        if (row >> field) {
            throw ParseError("alignment row too long",
                             static_cast<long>(i) + 2);
        }
    }
    return m;
}

Eigen::VectorXd user_embedding(std::span<const std::string> tweets,
                               const EmbeddingTable& table,
                               const AlignmentMatrix* alignment) {
    const int d = table.dimension;
    if (alignment && alignment->W.rows() != d) {
        throw ValidationError("alignment dimension does not match table");
    }
    Eigen::VectorXd out = Eigen::VectorXd::Zero(3 * d + 1);

    Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd sumsq = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd max;
    std::int64_t matched = 0, total = 0;
    for (const std::string& tweet : tweets) {
        for (const std::string& token : tokenize(tweet)) {
            ++total;
            const Eigen::VectorXd* v = table.find(token);
            if (!v) continue;
            Eigen::VectorXd mapped = alignment ? alignment->apply(*v) : *v;
            sum += mapped;
            sumsq += mapped.cwiseProduct(mapped);
            if (matched == 0) {
                max = mapped;
            } else {
                max = max.cwiseMax(mapped);
            }
            ++matched;
        }
    }
    if (matched == 0) return out;  // zeros + coverage 0, documented

    Eigen::VectorXd mean = sum / static_cast<double>(matched);
    Eigen::VectorXd var =
        (sumsq / static_cast<double>(matched)) - mean.cwiseProduct(mean);
    var = var.cwiseMax(0.0);  // guard tiny negative rounding
    out.segment(0, d) = mean;
    out.segment(d, d) = max;
    out.segment(2 * d, d) = var.cwiseSqrt();
    out[3 * d] = total > 0
                     ? static_cast<double>(matched) / static_cast<double>(total)
                     : 0.0;
    return out;
}

SparseVector dense_to_sparse(const Eigen::VectorXd& v) {
    SparseVector out;
    out.entries.reserve(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) {
            throw ValidationError("non-finite embedding value");
        }
        out.entries.emplace_back(static_cast<std::int32_t>(i), v[i]);
    }
    return out;
}

}  // namespace textbleach
