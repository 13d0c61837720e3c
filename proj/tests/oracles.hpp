// Copyright 2026 The ensemblefuse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ENSEMBLEFUSE_TESTS_ORACLES_HPP_
#define ENSEMBLEFUSE_TESTS_ORACLES_HPP_

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the library's loss, metric or optimiser code.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ensemblefuse/matrix.hpp"

namespace ensemblefuse::testing {

// Mean over samples of -sum_c [y log p + (1-y) log(1-p)], p clamped to
// [eps, 1-eps]. Row-major N x C inputs.
double bce_oracle(const std::vector<double>& p, const std::vector<int>& y, std::size_t n,
                  std::size_t c, double eps = 1e-7);

// (p - y) / (p (1 - p)) / N per entry.
std::vector<double> bce_grad_oracle(const std::vector<double>& p, const std::vector<int>& y,
                                    std::size_t n);

// Pairs (positive, negative): 1 if pos scores higher, 0.5 on a tie.
double pairwise_auc_oracle(const std::vector<double>& scores, const std::vector<int>& labels);

double central_difference(const std::function<double(double)>& f, double x, double h);

struct GridOptimum {
  std::vector<double> weights;
  double value = 0.0;
  std::size_t evaluations = 0;
};

// Exhaustive search over {w : w_k = i_k * step, sum = 1} for K = 3.
GridOptimum simplex_grid_search_3(const std::function<double(const std::vector<double>&)>& f,
                                  int steps_per_unit);

// Random valid matrices for property tests.
PredictionMatrix random_predictions(std::mt19937_64& gen, std::size_t n, std::size_t c);
LabelMatrix random_labels(std::mt19937_64& gen, std::size_t n, std::size_t c, double rate = 0.3);
ClassList numbered_classes(std::size_t c);

// 64-bit FNV-1a of a file's bytes, as 16 hex digits.
std::string fnv1a_file(const std::filesystem::path& path);
std::string read_file(const std::filesystem::path& path);

}  // namespace ensemblefuse::testing

#endif  // ENSEMBLEFUSE_TESTS_ORACLES_HPP_
