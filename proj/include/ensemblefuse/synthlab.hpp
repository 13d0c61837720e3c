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

#ifndef ENSEMBLEFUSE_SYNTHLAB_HPP_
#define ENSEMBLEFUSE_SYNTHLAB_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "ensemblefuse/losses.hpp"
#include "ensemblefuse/matrix.hpp"

// Desk-scale harness: a long-tail multi-label data generator, stand-in
// "models" that emit noisy probabilities, and a linear-sigmoid trainer.
namespace ensemblefuse::synth {

// The 14 chest X-ray pathologies and their dataset proportions, in the
// canonical column order.
const std::vector<std::string>& default_class_names();
const std::vector<double>& default_prevalences();

struct SynthConfig {
  std::size_t n_samples = 20000;
  std::vector<std::string> class_names = default_class_names();
  std::vector<double> prevalences = default_prevalences();
  std::size_t n_features = 16;
  std::vector<double> model_noise = {0.5, 0.8};
  double model_correlation = 0.6;
  double latent_noise = 0.5;  // class-specific noise std in the latent score
  std::uint64_t seed = 42;

  void validate() const;
};

struct SynthData {
  Matrix<double> features;  // N x D, standard normal
  LabelMatrix labels;
  Matrix<double> latents;   // N x C label-defining scores
  std::vector<std::string> warnings;
};

// Labels come from thresholding each latent column at its empirical
// quantile, so class c has exactly round(N * prevalence[c]) positives.
SynthData generate(const SynthConfig& cfg);

// One probability matrix per entry of cfg.model_noise. Model k sees the
// latent plus noise of std model_noise[k], where the noise of any two models
// has correlation model_correlation.
std::vector<PredictionMatrix> simulate_models(const Matrix<double>& latents,
                                              const ClassList& classes, const SynthConfig& cfg);

struct SplitFractions {
  double train = 0.7;
  double test = 0.2;
  double val = 0.1;

  void validate() const;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::vector<std::size_t> val;
};

// Seeded shuffle, then contiguous train/test/val blocks. Test and val get
// round(N * f) samples; the remainder goes to train.
SplitIndices split(std::size_t n, const SplitFractions& fractions, std::uint64_t seed);

enum class Optimizer {
  kAdamW,
  kGradientDescent,  // plain steps, betas ignored
};

struct ToyTrainConfig {
  double learning_rate = 1e-2;
  double weight_decay = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::size_t batch_size = 64;  // 0 = full batch
  std::size_t max_epochs = 30;
  std::size_t patience = 5;
  SplitFractions split;
  std::uint64_t seed = 42;
  Optimizer optimizer = Optimizer::kAdamW;

  void validate() const;
};

// sigmoid(x * weight + bias), weight is D x C.
struct LinearModel {
  Matrix<double> weight;
  std::vector<double> bias;

  Matrix<double> logits(const Matrix<double>& features) const;
  PredictionMatrix predict(const Matrix<double>& features, const ClassList& classes) const;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_mean_auc = 0.0;
};

struct TrainResult {
  LinearModel model;  // parameters of best_epoch
  std::vector<EpochRecord> history;
  double initial_train_loss = 0.0;
  std::size_t best_epoch = 0;
  bool stopped_early = false;
  SplitIndices split;
  ClassPrevalence prevalence;  // from the training partition only
};

// Minimises combined_loss through the sigmoid. Validation mean AUC drives
// early stopping: training halts once `patience` consecutive epochs fail to
// beat the best, and the best epoch's parameters are restored.
TrainResult train_toy(const Matrix<double>& features, const LabelMatrix& labels,
                      const LossConfig& loss_cfg, const ToyTrainConfig& train_cfg);
TrainResult train_toy(const Matrix<double>& features, const LabelMatrix& labels,
                      const LossConfig& loss_cfg, const ToyTrainConfig& train_cfg,
                      const SplitIndices& partition);

std::string to_json(const LinearModel& model, const ClassList& classes);
std::string history_to_json(const TrainResult& result);

}  // namespace ensemblefuse::synth

#endif  // ENSEMBLEFUSE_SYNTHLAB_HPP_
