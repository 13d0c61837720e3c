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

#ifndef ENSEMBLEFUSE_ENSEMBLE_HPP_
#define ENSEMBLEFUSE_ENSEMBLE_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ensemblefuse/matrix.hpp"

namespace ensemblefuse {

// A point on the probability simplex: every weight >= 0, sum == 1 (1e-12).
class EnsembleWeights {
 public:
  static constexpr double kSumTolerance = 1e-12;

  EnsembleWeights() = default;
  // Throws ValidationError unless `w` is already on the simplex.
  explicit EnsembleWeights(std::vector<double> w);
  static EnsembleWeights uniform(std::size_t k);

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  std::span<const double> values() const { return w_; }

  friend bool operator==(const EnsembleWeights&, const EnsembleWeights&) = default;

 private:
  std::vector<double> w_;
};

// Clip negatives to zero and renormalise. An all-zero result maps to the
// uniform vector. Non-finite entries are rejected.
EnsembleWeights project_to_simplex(std::span<const double> v);

// Entry-wise convex combination sum_k w_k * preds_k, clamped into [0,1].
PredictionMatrix fuse(std::span<const PredictionMatrix> preds, const EnsembleWeights& weights);

struct DEConfig {
  std::size_t population_size = 0;  // 0 selects max(10 * K, 16)
  double F = 0.5;                   // mutation factor, (0, 2]
  double CR = 0.9;                  // crossover rate, [0, 1]
  std::size_t max_generations = 200;
  std::size_t stall_generations = 30;
  std::uint64_t seed = 42;

  std::size_t effective_population(std::size_t k) const;
  void validate(std::size_t k) const;
};

struct DEResult {
  EnsembleWeights weights;
  double objective = 0.0;
  std::size_t generations_run = 0;
  std::vector<double> history;  // best objective after each generation
};

// Maximised over the simplex. Called concurrently from several threads;
// must be pure.
using SimplexObjective = std::function<double(std::span<const double>)>;

// DE/rand/1/bin over the K-simplex with projection after crossover and
// greedy one-to-one selection. The initial population holds the K unit
// vectors, the uniform vector, then uniform samples from the simplex.
// Stops after max_generations or when the best objective has not moved by
// more than 1e-12 for stall_generations generations.
DEResult differential_evolution(std::size_t k, const SimplexObjective& objective,
                                const DEConfig& cfg);

// Ensemble weights maximising the mean AUC of fuse(preds, w) against labels.
DEResult de_optimize(std::span<const PredictionMatrix> preds, const LabelMatrix& labels,
                     const DEConfig& cfg);

// {"weights": [...], "objective": v, "generations": n, "history": [...]}
std::string to_json(const DEResult& result);

}  // namespace ensemblefuse

#endif  // ENSEMBLEFUSE_ENSEMBLE_HPP_
