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

#include "ensemblefuse/ensemble.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <map>

#include "ensemblefuse/errors.hpp"
#include "ensemblefuse/metrics.hpp"
#include "ensemblefuse/model_io.hpp"
#include "ensemblefuse/random.hpp"
#include "json.hpp"

namespace ensemblefuse {

EnsembleWeights::EnsembleWeights(std::vector<double> w) : w_(std::move(w)) {
  if (w_.empty()) throw ValidationError("ensemble weights are empty");
  double sum = 0.0;
  for (double v : w_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError("ensemble weight " + io::format_double(v) + " is not a finite nonnegative number");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw ValidationError("ensemble weights sum to " + io::format_double(sum) + ", not 1");
  }
}

EnsembleWeights EnsembleWeights::uniform(std::size_t k) {
  if (k == 0) throw ValidationError("ensemble weights are empty");
  return EnsembleWeights(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

EnsembleWeights project_to_simplex(std::span<const double> v) {
  if (v.empty()) throw ValidationError("cannot project an empty vector");
  std::vector<double> w(v.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) throw ValidationError("cannot project a non-finite weight");
    w[i] = std::max(v[i], 0.0);
    sum += w[i];
  }
  if (sum == 0.0) return EnsembleWeights::uniform(v.size());
  for (double& x : w) x /= sum;
  return EnsembleWeights(std::move(w));
}

PredictionMatrix fuse(std::span<const PredictionMatrix> preds, const EnsembleWeights& weights) {
  io::check_aligned(preds);
  if (weights.size() != preds.size()) {
    throw ValidationError("got " + std::to_string(weights.size()) + " weights for " +
                          std::to_string(preds.size()) + " prediction matrices");
  }
  const auto& ref = preds.front();
  Matrix<double> out(ref.n_samples(), ref.n_classes());
  auto dst = out.data();
  const auto n = static_cast<std::ptrdiff_t>(dst.size());
  const std::size_t k_count = preds.size();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    double s = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) s += weights[k] * preds[k].values().data()[idx];
    dst[idx] = std::clamp(s, 0.0, 1.0);
  }
  return PredictionMatrix(ref.classes(), std::move(out));
}

std::size_t DEConfig::effective_population(std::size_t k) const {
  return population_size != 0 ? population_size : std::max<std::size_t>(10 * k, 16);
}

void DEConfig::validate(std::size_t k) const {
  if (k < 1) throw ValidationError("differential evolution needs at least one dimension");
  const std::size_t np = effective_population(k);
  if (np < 4) throw ValidationError("population_size must be at least 4");
  if (np < k + 1) {
    throw ValidationError("population_size must be at least K + 1 = " + std::to_string(k + 1) +
                          " to hold the unit and uniform seeds");
  }
  if (!(F > 0.0 && F <= 2.0)) throw ValidationError("F must lie in (0,2]");
  if (!(CR >= 0.0 && CR <= 1.0)) throw ValidationError("CR must lie in [0,1]");
  if (max_generations == 0) throw ValidationError("max_generations must be positive");
  if (stall_generations == 0) throw ValidationError("stall_generations must be positive");
}

namespace {

using Candidate = std::vector<double>;
using CacheKey = std::vector<std::uint64_t>;

CacheKey key_of(const Candidate& c) {
  CacheKey key(c.size());
  std::transform(c.begin(), c.end(), key.begin(),
                 [](double v) { return std::bit_cast<std::uint64_t>(v); });
  return key;
}

// Objective values memoised on the exact bits of each candidate. Misses
// within one batch are evaluated in parallel; results are inserted in
// candidate order.
class CachedObjective {
 public:
  explicit CachedObjective(const SimplexObjective& f) : f_(f) {}

  std::vector<double> evaluate(const std::vector<Candidate>& batch) {
    std::vector<double> out(batch.size());
    std::vector<std::size_t> misses;
    std::map<CacheKey, std::size_t> pending;
    std::vector<std::size_t> alias(batch.size(), batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
      auto key = key_of(batch[i]);
      if (auto it = cache_.find(key); it != cache_.end()) {
        out[i] = it->second;
      } else if (auto p = pending.find(key); p != pending.end()) {
        alias[i] = p->second;
      } else {
        pending.emplace(std::move(key), i);
        misses.push_back(i);
      }
    }

    std::exception_ptr error;
    const auto m = static_cast<std::ptrdiff_t>(misses.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t j = 0; j < m; ++j) {
      const std::size_t i = misses[static_cast<std::size_t>(j)];
      try {
        out[i] = f_(batch[i]);
      } catch (...) {
#pragma omp critical(ensemblefuse_de_error)
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);

    for (std::size_t i : misses) cache_.emplace(key_of(batch[i]), out[i]);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (alias[i] != batch.size()) out[i] = out[alias[i]];
    }
    return out;
  }

 private:
  const SimplexObjective& f_;
  std::map<CacheKey, double> cache_;
};

Candidate sample_simplex(Rng& rng, std::size_t k) {
  Candidate c(k);
  double sum = 0.0;
  for (double& v : c) {
    v = -std::log(rng.uniform_open_zero());
    sum += v;
  }
  for (double& v : c) v /= sum;
  return c;
}

Candidate projected(std::span<const double> v) {
  const EnsembleWeights w = project_to_simplex(v);
  return Candidate(w.values().begin(), w.values().end());
}

}  // namespace

DEResult differential_evolution(std::size_t k, const SimplexObjective& objective,
                                const DEConfig& cfg) {
  cfg.validate(k);
  const std::size_t np = cfg.effective_population(k);
  Rng rng(cfg.seed, 0xde);

  std::vector<Candidate> population;
  population.reserve(np);
  for (std::size_t j = 0; j < k; ++j) {
    Candidate unit(k, 0.0);
    unit[j] = 1.0;
    population.push_back(std::move(unit));
  }
  {
    const EnsembleWeights u = EnsembleWeights::uniform(k);
    population.emplace_back(u.values().begin(), u.values().end());
  }
  while (population.size() < np) population.push_back(projected(sample_simplex(rng, k)));

  CachedObjective cached(objective);
  std::vector<double> fitness = cached.evaluate(population);

  auto best_index = [&] {
    return static_cast<std::size_t>(std::max_element(fitness.begin(), fitness.end()) -
                                    fitness.begin());
  };
  std::size_t best = best_index();
  double best_value = fitness[best];

  DEResult result;
  std::size_t stall = 0;
  std::vector<Candidate> trials(np, Candidate(k));
  for (std::size_t gen = 1; gen <= cfg.max_generations; ++gen) {
    for (std::size_t i = 0; i < np; ++i) {
      std::size_t r1, r2, r3;
      do { r1 = rng.below(np); } while (r1 == i);
      do { r2 = rng.below(np); } while (r2 == i || r2 == r1);
      do { r3 = rng.below(np); } while (r3 == i || r3 == r1 || r3 == r2);
      const std::size_t forced = rng.below(k);
      Candidate& trial = trials[i];
      for (std::size_t j = 0; j < k; ++j) {
        const bool cross = rng.uniform() < cfg.CR || j == forced;
        trial[j] = cross ? population[r1][j] + cfg.F * (population[r2][j] - population[r3][j])
                         : population[i][j];
      }
      trial = projected(trial);
    }

    const std::vector<double> trial_fitness = cached.evaluate(trials);
    for (std::size_t i = 0; i < np; ++i) {
      if (trial_fitness[i] >= fitness[i]) {
        population[i] = trials[i];
        fitness[i] = trial_fitness[i];
      }
    }

    const double previous = best_value;
    best = best_index();
    best_value = fitness[best];
    result.history.push_back(best_value);
    result.generations_run = gen;
    stall = std::abs(best_value - previous) <= 1e-12 ? stall + 1 : 0;
    if (stall >= cfg.stall_generations) break;
  }

  result.weights = EnsembleWeights(population[best]);
  result.objective = best_value;
  return result;
}

DEResult de_optimize(std::span<const PredictionMatrix> preds, const LabelMatrix& labels,
                     const DEConfig& cfg) {
  if (preds.size() < 2) {
    throw ValidationError("weight optimisation needs at least 2 prediction matrices, got " +
                          std::to_string(preds.size()));
  }
  io::check_aligned(preds, labels);
  // Fails early with a clear message when every class is degenerate.
  (void)mean_auc(preds.front(), labels);

  const SimplexObjective objective = [&](std::span<const double> w) {
    return mean_auc(fuse(preds, EnsembleWeights(std::vector<double>(w.begin(), w.end()))),
                    labels);
  };
  return differential_evolution(preds.size(), objective, cfg);
}

std::string to_json(const DEResult& result) {
  nlohmann::ordered_json doc;
  doc["weights"] = std::vector<double>(result.weights.values().begin(),
                                       result.weights.values().end());
  doc["objective"] = result.objective;
  doc["generations"] = result.generations_run;
  doc["history"] = result.history;
  return doc.dump(2) + "\n";
}

}  // namespace ensemblefuse
