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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "ensemblefuse/errors.hpp"
#include "ensemblefuse/losses.hpp"
#include "ensemblefuse/metrics.hpp"
#include "ensemblefuse/synthlab.hpp"

namespace ensemblefuse::synth {
namespace {

std::vector<std::size_t> positives_per_class(const LabelMatrix& y) {
  std::vector<std::size_t> count(y.n_classes(), 0);
  for (std::size_t i = 0; i < y.n_samples(); ++i) {
    for (std::size_t c = 0; c < y.n_classes(); ++c) count[c] += y(i, c);
  }
  return count;
}

SynthConfig small_config(std::size_t n) {
  SynthConfig cfg;
  cfg.n_samples = n;
  cfg.class_names = {"A", "B", "C"};
  cfg.prevalences = {0.5, 0.2, 0.1};
  cfg.n_features = 6;
  return cfg;
}

TEST(Generate, DefaultPrevalencesGiveExactCounts) {
  SynthConfig cfg;
  const auto data = generate(cfg);
  const auto counts = positives_per_class(data.labels);
  for (std::size_t c = 0; c < counts.size(); ++c) {
    EXPECT_EQ(counts[c], static_cast<std::size_t>(std::llround(20000 * cfg.prevalences[c])))
        << cfg.class_names[c];
  }
  EXPECT_EQ(counts[*data.labels.classes().index_of("Hernia")], 88u);
  EXPECT_EQ(data.features.rows(), 20000u);
  EXPECT_EQ(data.features.cols(), 16u);
}

TEST(Generate, HalfPrevalence) {
  auto cfg = small_config(1000);
  cfg.prevalences = {0.5, 0.5, 0.5};
  const auto counts = positives_per_class(generate(cfg).labels);
  for (auto n : counts) EXPECT_EQ(n, 500u);
}

TEST(Generate, Deterministic) {
  const auto cfg = small_config(500);
  const auto a = generate(cfg);
  const auto b = generate(cfg);
  EXPECT_EQ(a.features, b.features);
  EXPECT_EQ(a.labels, b.labels);
  auto other = cfg;
  other.seed = 43;
  EXPECT_NE(generate(other).features, a.features);
}

TEST(Generate, WarnsOnTinyClasses) {
  auto cfg = small_config(100);
  cfg.prevalences = {0.5, 0.2, 0.001};
  const auto data = generate(cfg);
  EXPECT_FALSE(data.warnings.empty());
  EXPECT_TRUE(generate(small_config(1000)).warnings.empty());
}

TEST(Generate, RejectsBadConfig) {
  auto cfg = small_config(100);
  cfg.prevalences = {0.5, 1.5, 0.1};
  EXPECT_THROW(generate(cfg), ValidationError);
  cfg = small_config(100);
  cfg.prevalences = {0.5};
  EXPECT_THROW(generate(cfg), ValidationError);
  cfg = small_config(0);
  EXPECT_THROW(generate(cfg), ValidationError);
}

TEST(SimulateModels, ZeroNoiseIsPerfect) {
  auto cfg = small_config(400);
  cfg.model_noise = {0.0};
  cfg.latent_noise = 0.0;
  const auto data = generate(cfg);
  const auto models = simulate_models(data.latents, data.labels.classes(), cfg);
  ASSERT_EQ(models.size(), 1u);
  EXPECT_EQ(mean_auc(models[0], data.labels), 1.0);
}

TEST(SimulateModels, HugeNoiseIsNearChance) {
  auto cfg = small_config(5000);
  cfg.model_noise = {50.0};
  const auto data = generate(cfg);
  const auto models = simulate_models(data.latents, data.labels.classes(), cfg);
  const double auc = mean_auc(models[0], data.labels);
  EXPECT_GT(auc, 0.4);
  EXPECT_LT(auc, 0.6);
}

TEST(SimulateModels, NoisierModelIsWorse) {
  auto cfg = small_config(3000);
  cfg.model_noise = {0.3, 2.0};
  const auto data = generate(cfg);
  const auto models = simulate_models(data.latents, data.labels.classes(), cfg);
  EXPECT_GT(mean_auc(models[0], data.labels), mean_auc(models[1], data.labels));
}

TEST(Split, SizesAndDisjointness) {
  const auto s = split(100, SplitFractions{}, 1);
  EXPECT_EQ(s.train.size(), 70u);
  EXPECT_EQ(s.test.size(), 20u);
  EXPECT_EQ(s.val.size(), 10u);
  std::set<std::size_t> all(s.train.begin(), s.train.end());
  all.insert(s.test.begin(), s.test.end());
  all.insert(s.val.begin(), s.val.end());
  EXPECT_EQ(all.size(), 100u);
  EXPECT_EQ(*all.rbegin(), 99u);

  const auto tiny = split(10, SplitFractions{}, 1);
  EXPECT_EQ(tiny.train.size(), 7u);
  EXPECT_EQ(tiny.test.size(), 2u);
  EXPECT_EQ(tiny.val.size(), 1u);
}

TEST(Split, DeterministicAndSeedDependent) {
  EXPECT_EQ(split(50, {}, 3).train, split(50, {}, 3).train);
  EXPECT_NE(split(50, {}, 3).train, split(50, {}, 4).train);
}

TEST(Split, Errors) {
  EXPECT_THROW(split(3, SplitFractions{}, 1), ValidationError);
  EXPECT_THROW(split(100, SplitFractions{0.5, 0.2, 0.2}, 1), ValidationError);
  EXPECT_THROW(split(100, SplitFractions{0.8, 0.2, 0.0}, 1), ValidationError);
}

TEST(TrainToy, FullBatchGradientDescentIsMonotone) {
  auto cfg = small_config(2000);
  const auto data = generate(cfg);
  ToyTrainConfig train;
  train.optimizer = Optimizer::kGradientDescent;
  train.learning_rate = 1e-3;
  train.weight_decay = 0.0;
  train.batch_size = 0;
  train.max_epochs = 50;
  train.patience = 1000;
  const auto result = train_toy(data.features, data.labels, LossConfig{}, train);
  ASSERT_EQ(result.history.size(), 50u);
  double previous = result.initial_train_loss;
  for (const auto& e : result.history) {
    EXPECT_LE(e.train_loss, previous + 1e-9) << "epoch " << e.epoch;
    previous = e.train_loss;
  }
  EXPECT_LT(result.history.back().train_loss, result.initial_train_loss);
}

TEST(TrainToy, PatienceStopsAfterExactlyPatienceStaleEpochs) {
  // Zero features: every sample gets the same score, so validation AUC is a
  // constant 0.5 and the first epoch is never beaten.
  auto cfg = small_config(300);
  auto data = generate(cfg);
  const Matrix<double> zeros(data.features.rows(), data.features.cols(), 0.0);
  for (std::size_t patience : {1u, 3u, 5u}) {
    ToyTrainConfig train;
    train.patience = patience;
    train.max_epochs = 30;
    const auto result = train_toy(zeros, data.labels, LossConfig{}, train);
    EXPECT_TRUE(result.stopped_early);
    EXPECT_EQ(result.history.size(), patience + 1);
    EXPECT_EQ(result.best_epoch, 1u);
  }
}

TEST(TrainToy, RestoresBestEpochParameters) {
  auto cfg = small_config(1500);
  const auto data = generate(cfg);
  ToyTrainConfig train;
  train.max_epochs = 12;
  train.patience = 3;
  const auto result = train_toy(data.features, data.labels, LossConfig{}, train);
  const auto val_pred = result.model.predict(data.features.select_rows(result.split.val),
                                             data.labels.classes());
  const double auc = mean_auc(val_pred, data.labels.select_rows(result.split.val));
  EXPECT_EQ(auc, result.history[result.best_epoch - 1].val_mean_auc);
  for (const auto& e : result.history) EXPECT_LE(e.val_mean_auc, auc);
}

TEST(TrainToy, PrevalenceComesFromTrainingPartitionOnly) {
  auto cfg = small_config(1000);
  const auto data = generate(cfg);
  ToyTrainConfig train;
  train.max_epochs = 1;
  const auto result = train_toy(data.features, data.labels, LossConfig{}, train);
  const auto expected = compute_prevalence(data.labels.select_rows(result.split.train));
  EXPECT_EQ(result.prevalence.rho, expected.rho);
  EXPECT_NE(result.prevalence.rho, compute_prevalence(data.labels).rho);
}

TEST(TrainToy, DeterministicAndSerialisable) {
  auto cfg = small_config(600);
  const auto data = generate(cfg);
  ToyTrainConfig train;
  train.max_epochs = 4;
  const auto a = train_toy(data.features, data.labels, LossConfig{}, train);
  const auto b = train_toy(data.features, data.labels, LossConfig{}, train);
  EXPECT_EQ(to_json(a.model, data.labels.classes()), to_json(b.model, data.labels.classes()));
  EXPECT_EQ(history_to_json(a), history_to_json(b));
}

TEST(TrainToy, RejectsMismatchedShapes) {
  auto cfg = small_config(100);
  const auto data = generate(cfg);
  const Matrix<double> fewer(50, data.features.cols(), 0.0);
  EXPECT_THROW(train_toy(fewer, data.labels, LossConfig{}, ToyTrainConfig{}), ValidationError);
  ToyTrainConfig bad;
  bad.learning_rate = -1.0;
  EXPECT_THROW(train_toy(data.features, data.labels, LossConfig{}, bad), ValidationError);
}

}  // namespace
}  // namespace ensemblefuse::synth
