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
// Helpers shared between the unit tests and the acceptance harness.

#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "textbleach/features.hpp"
#include "textbleach/linear.hpp"
#include "textbleach/rng.hpp"

namespace testutil {

struct ToyDataset {
    std::vector<textbleach::SparseVector> xs;
    std::vector<int> ys;
    std::size_t dim = 0;
};

// Dense gaussian points with labels correlated to a random hyperplane but
// deliberately noisy, so the optimum is interior (no margin degeneracy).
inline ToyDataset make_toy_dataset(std::uint64_t seed, std::size_t n,
                                   std::size_t dim) {
    textbleach::Rng rng(seed);
    ToyDataset d;
    d.dim = dim;
    Eigen::VectorXd plane(dim);
    for (std::size_t j = 0; j < dim; ++j) plane[j] = rng.gaussian();
    for (std::size_t i = 0; i < n; ++i) {
        textbleach::SparseVector x;
        double score = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            double v = rng.gaussian();
            x.entries.emplace_back(static_cast<std::int32_t>(j), v);
            score += v * plane[j];
        }
        int y = score >= 0 ? +1 : -1;
        if (rng.uniform() < 0.2) y = -y;  // label noise
        d.xs.push_back(std::move(x));
        d.ys.push_back(y);
    }
    d.ys[0] = +1;  // both classes guaranteed
    d.ys[n - 1] = -1;
    return d;
}

// Independent reference optimizer for the squared-hinge primal: plain
// full-batch gradient descent with a 1/L step (the objective is smooth),
// tracking the best iterate. Shares no code with train_svm.
inline double reference_svm_objective(const ToyDataset& d, double C,
                                      long iterations) {
    const std::size_t dim = d.dim;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(dim + 1);

    double sq_sum = 0.0;
    for (const auto& x : d.xs) {
        double s = 1.0;  // implicit bias feature
        for (const auto& [idx, v] : x.entries) {
            (void)idx;
            s += v * v;
        }
        sq_sum += s;
    }
    const double step = 1.0 / (1.0 + 2.0 * C * sq_sum);

    double best = textbleach::primal_objective(w, d.xs, d.ys, C);
    Eigen::VectorXd grad(dim + 1);
    for (long t = 0; t < iterations; ++t) {
        grad = w;
        for (std::size_t i = 0; i < d.xs.size(); ++i) {
            double f = w[dim];
            for (const auto& [idx, v] : d.xs[i].entries) f += w[idx] * v;
            const double margin = 1.0 - d.ys[i] * f;
            if (margin <= 0.0) continue;
            const double g = -2.0 * C * margin * d.ys[i];
            for (const auto& [idx, v] : d.xs[i].entries) grad[idx] += g * v;
            grad[dim] += g;
        }
        w -= step * grad;
        const double obj = textbleach::primal_objective(w, d.xs, d.ys, C);
        if (obj < best) best = obj;
    }
    return best;
}

struct CommandResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

// Runs a shell command, captures stdout/stderr and the exit code.
inline CommandResult run_command(const std::string& command) {
    namespace fs = std::filesystem;
    static int counter = 0;
    fs::path out_path = fs::temp_directory_path() /
                        ("tb_cmd_out_" + std::to_string(++counter));
    fs::path err_path = fs::temp_directory_path() /
                        ("tb_cmd_err_" + std::to_string(counter));
    std::string full = command + " > " + out_path.string() + " 2> " +
                       err_path.string();
    int status = std::system(full.c_str());

    CommandResult result;
    if (status == -1) {
        result.exit_code = -1;
    } else {
        result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    fs::remove(out_path);
    fs::remove(err_path);
    return result;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / ("tb_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace testutil
