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

#include "ensemblefuse/synthlab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ensemblefuse/errors.hpp"
#include "ensemblefuse/metrics.hpp"
#include "ensemblefuse/random.hpp"
#include "json.hpp"

namespace ensemblefuse::synth {
namespace {

// Independent random streams derived from the one user seed.
enum Stream : std::uint64_t {
  kFeatures = 1,
  kProjection = 2,
  kLatentNoise = 3,
  kModelNoise = 4,
  kSplit = 5,
  kShuffle = 6,
};

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

const std::vector<std::string>& default_class_names() {
  static const std::vector<std::string> names = {
      "Atelectasis", "Consolidation", "Infiltration",       "Pneumothorax", "Edema",
      "Emphysema",   "Fibrosis",      "Effusion",           "Pneumonia",    "Pleural_Thickening",
      "Cardiomegaly", "Nodule",       "Mass",               "Hernia"};
  return names;
}

const std::vector<double>& default_prevalences() {
  static const std::vector<double> rho = {0.2233, 0.0902, 0.3844, 0.1024, 0.0445,
                                          0.0486, 0.0326, 0.2573, 0.0276, 0.0654,
                                          0.0536, 0.1223, 0.1117, 0.0044};
  return rho;
}

void SynthConfig::validate() const {
  if (n_samples == 0) throw ValidationError("n_samples must be positive");
  if (n_features == 0) throw ValidationError("n_features must be positive");
  if (class_names.size() != prevalences.size()) {
    throw ValidationError("class_names and prevalences differ in length");
  }
  (void)ClassList(class_names);
  for (double p : prevalences) {
    if (!(p > 0.0 && p < 1.0)) throw ValidationError("prevalences must lie in (0,1)");
  }
  if (model_noise.empty()) throw ValidationError("model_noise needs at least one model");
  for (double s : model_noise) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw ValidationError("model_noise must be >= 0");
  }
  if (!(model_correlation >= 0.0 && model_correlation <= 1.0)) {
    throw ValidationError("model_correlation must lie in [0,1]");
  }
  if (!(latent_noise >= 0.0) || !std::isfinite(latent_noise)) {
    throw ValidationError("latent_noise must be >= 0");
  }
}

SynthData generate(const SynthConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.n_samples;
  const std::size_t d = cfg.n_features;
  const std::size_t c_count = cfg.prevalences.size();
  ClassList classes(cfg.class_names);

  SynthData out;
  out.features = Matrix<double>(n, d);
  Rng feature_rng(cfg.seed, kFeatures);
  for (double& x : out.features.data()) x = feature_rng.normal();

  Matrix<double> projection(d, c_count);
  Rng projection_rng(cfg.seed, kProjection);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (double& a : projection.data()) a = projection_rng.normal() * scale;

  out.latents = Matrix<double>(n, c_count);
  Rng noise_rng(cfg.seed, kLatentNoise);
  for (std::size_t r = 0; r < n; ++r) {
    const auto x = out.features.row(r);
    for (std::size_t c = 0; c < c_count; ++c) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += x[j] * projection(j, c);
      out.latents(r, c) = s + cfg.latent_noise * noise_rng.normal();
    }
  }

  Matrix<std::uint8_t> y(n, c_count, 0);
  std::vector<std::size_t> order(n);
  const double min_expected =
      static_cast<double>(n) * *std::min_element(cfg.prevalences.begin(), cfg.prevalences.end());
  if (min_expected < 5.0) {
    out.warnings.push_back("n_samples * min(prevalence) = " + std::to_string(min_expected) +
                           " < 5; tail classes will be very sparse");
  }
  for (std::size_t c = 0; c < c_count; ++c) {
    const auto positives =
        static_cast<std::size_t>(std::llround(static_cast<double>(n) * cfg.prevalences[c]));
    if (positives == 0) {
      out.warnings.push_back("class \"" + classes[c] + "\": target prevalence rounds to 0 positives");
    }
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return out.latents(a, c) > out.latents(b, c);
    });
    for (std::size_t i = 0; i < positives; ++i) y(order[i], c) = 1;
  }
  out.labels = LabelMatrix(std::move(classes), std::move(y));
  return out;
}

std::vector<PredictionMatrix> simulate_models(const Matrix<double>& latents,
                                              const ClassList& classes, const SynthConfig& cfg) {
  cfg.validate();
  if (latents.cols() != classes.size()) {
    throw ValidationError("latent matrix has " + std::to_string(latents.cols()) +
                          " columns but " + std::to_string(classes.size()) + " classes");
  }
  const std::size_t k_count = cfg.model_noise.size();
  const double shared = std::sqrt(cfg.model_correlation);
  const double own = std::sqrt(1.0 - cfg.model_correlation);

  std::vector<Matrix<double>> scores(k_count, Matrix<double>(latents.rows(), latents.cols()));
  Rng rng(cfg.seed, kModelNoise);
  for (std::size_t i = 0; i < latents.data().size(); ++i) {
    const double common = rng.normal();
    for (std::size_t k = 0; k < k_count; ++k) {
      const double noise = shared * common + own * rng.normal();
      scores[k].data()[i] = sigmoid(latents.data()[i] + cfg.model_noise[k] * noise);
    }
  }
  std::vector<PredictionMatrix> out;
  out.reserve(k_count);
  for (auto& s : scores) out.emplace_back(classes, std::move(s));
  return out;
}

void SplitFractions::validate() const {
  if (!(train > 0.0 && test > 0.0 && val > 0.0)) {
    throw ValidationError("split fractions must all be positive");
  }
  if (std::abs(train + test + val - 1.0) > 1e-12) {
    throw ValidationError("split fractions must sum to 1");
  }
}

SplitIndices split(std::size_t n, const SplitFractions& fractions, std::uint64_t seed) {
  fractions.validate();
  const auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(n) * fractions.test));
  const auto n_val = static_cast<std::size_t>(std::llround(static_cast<double>(n) * fractions.val));
  if (n_test == 0 || n_val == 0 || n_test + n_val >= n) {
    throw ValidationError("split of " + std::to_string(n) + " samples leaves an empty partition");
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed, kSplit);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(idx[i], idx[rng.below(i + 1)]);
  }
  const std::size_t n_train = n - n_test - n_val;
  SplitIndices out;
  out.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train),
                  idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_test));
  out.val.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_test), idx.end());
  return out;
}

void ToyTrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ValidationError("learning_rate must be positive");
  if (!(weight_decay >= 0.0)) throw ValidationError("weight_decay must be nonnegative");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw ValidationError("beta1 must lie in [0,1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw ValidationError("beta2 must lie in [0,1)");
  if (!(adam_epsilon > 0.0)) throw ValidationError("adam_epsilon must be positive");
  if (max_epochs == 0) throw ValidationError("max_epochs must be positive");
  if (patience == 0) throw ValidationError("patience must be positive");
  split.validate();
}

Matrix<double> LinearModel::logits(const Matrix<double>& features) const {
  if (features.cols() != weight.rows()) {
    throw ValidationError("feature matrix has " + std::to_string(features.cols()) +
                          " columns, model expects " + std::to_string(weight.rows()));
  }
  const std::size_t c_count = weight.cols();
  Matrix<double> z(features.rows(), c_count);
  const auto n = static_cast<std::ptrdiff_t>(features.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    const auto x = features.row(static_cast<std::size_t>(r));
    auto out = z.row(static_cast<std::size_t>(r));
    for (std::size_t c = 0; c < c_count; ++c) out[c] = bias[c];
    for (std::size_t j = 0; j < x.size(); ++j) {
      const auto w = weight.row(j);
      for (std::size_t c = 0; c < c_count; ++c) out[c] += x[j] * w[c];
    }
  }
  return z;
}

PredictionMatrix LinearModel::predict(const Matrix<double>& features, const ClassList& classes) const {
  Matrix<double> p = logits(features);
  for (double& v : p.data()) v = sigmoid(v);
  return PredictionMatrix(classes, std::move(p));
}

namespace {

// Parameters flattened as [weight (row-major), bias] for the optimiser.
class ParameterUpdater {
 public:
  ParameterUpdater(const ToyTrainConfig& cfg, std::size_t size)
      : cfg_(cfg), m_(size, 0.0), v_(size, 0.0) {}

  void step(std::span<double> theta, std::span<const double> grad) {
    ++t_;
    const double lr = cfg_.learning_rate;
    if (cfg_.optimizer == Optimizer::kGradientDescent) {
      for (std::size_t i = 0; i < theta.size(); ++i) {
        theta[i] -= lr * (grad[i] + cfg_.weight_decay * theta[i]);
      }
      return;
    }
    // Decoupled weight decay, then the bias-corrected Adam step.
    const double b1 = cfg_.beta1;
    const double b2 = cfg_.beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
    for (std::size_t i = 0; i < theta.size(); ++i) {
      theta[i] *= 1.0 - lr * cfg_.weight_decay;
      m_[i] = b1 * m_[i] + (1.0 - b1) * grad[i];
      v_[i] = b2 * v_[i] + (1.0 - b2) * grad[i] * grad[i];
      const double m_hat = m_[i] / c1;
      const double v_hat = v_[i] / c2;
      theta[i] -= lr * m_hat / (std::sqrt(v_hat) + cfg_.adam_epsilon);
    }
  }

 private:
  const ToyTrainConfig& cfg_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::size_t t_ = 0;
};

LinearModel unpack(std::span<const double> theta, std::size_t d, std::size_t c_count) {
  LinearModel model;
  model.weight = Matrix<double>(d, c_count,
                                std::vector<double>(theta.begin(), theta.begin() +
                                                    static_cast<std::ptrdiff_t>(d * c_count)));
  model.bias.assign(theta.begin() + static_cast<std::ptrdiff_t>(d * c_count), theta.end());
  return model;
}

// Gradient of the mean batch loss with respect to [weight, bias].
std::vector<double> batch_gradient(const LinearModel& model, const Matrix<double>& x,
                                   const LabelMatrix& y, const ClassPrevalence& prevalence,
                                   const LossConfig& loss_cfg) {
  const std::size_t d = model.weight.rows();
  const std::size_t c_count = model.weight.cols();
  const PredictionMatrix p = model.predict(x, y.classes());
  Matrix<double> dz = combined_loss_grad(p, y, prevalence, loss_cfg);
  for (std::size_t i = 0; i < dz.data().size(); ++i) {
    const double pi = p.values().data()[i];
    dz.data()[i] *= pi * (1.0 - pi);
  }
  std::vector<double> grad(d * c_count + c_count, 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto xr = x.row(r);
    const auto g = dz.row(r);
    for (std::size_t j = 0; j < d; ++j) {
      double* gw = grad.data() + j * c_count;
      for (std::size_t c = 0; c < c_count; ++c) gw[c] += xr[j] * g[c];
    }
    double* gb = grad.data() + d * c_count;
    for (std::size_t c = 0; c < c_count; ++c) gb[c] += g[c];
  }
  return grad;
}

}  // namespace

TrainResult train_toy(const Matrix<double>& features, const LabelMatrix& labels,
                      const LossConfig& loss_cfg, const ToyTrainConfig& train_cfg) {
  train_cfg.validate();
  return train_toy(features, labels, loss_cfg, train_cfg,
                   split(features.rows(), train_cfg.split, train_cfg.seed));
}

TrainResult train_toy(const Matrix<double>& features, const LabelMatrix& labels,
                      const LossConfig& loss_cfg, const ToyTrainConfig& train_cfg,
                      const SplitIndices& partition) {
  train_cfg.validate();
  loss_cfg.validate();
  if (features.rows() != labels.n_samples()) {
    throw ValidationError("features have " + std::to_string(features.rows()) +
                          " rows, labels have " + std::to_string(labels.n_samples()));
  }
  if (partition.train.empty() || partition.val.empty()) {
    throw ValidationError("training and validation partitions must be nonempty");
  }
  const Matrix<double> x_train = features.select_rows(partition.train);
  const LabelMatrix y_train = labels.select_rows(partition.train);
  const Matrix<double> x_val = features.select_rows(partition.val);
  const LabelMatrix y_val = labels.select_rows(partition.val);

  TrainResult result;
  result.split = partition;
  result.prevalence = compute_prevalence(y_train);

  const std::size_t d = features.cols();
  const std::size_t c_count = labels.n_classes();
  std::vector<double> theta(d * c_count + c_count, 0.0);
  std::vector<double> best_theta = theta;
  ParameterUpdater updater(train_cfg, theta.size());

  auto train_loss = [&](const LinearModel& m) {
    const double loss =
        combined_loss(m.predict(x_train, labels.classes()), y_train, result.prevalence, loss_cfg);
    return loss;
  };
  result.initial_train_loss = train_loss(unpack(theta, d, c_count));

  const std::size_t n_train = partition.train.size();
  const bool full_batch = train_cfg.batch_size == 0 || train_cfg.batch_size >= n_train;
  const std::size_t batch = full_batch ? n_train : train_cfg.batch_size;
  std::vector<std::size_t> order(n_train);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng shuffle_rng(train_cfg.seed, kShuffle);

  double best_auc = 0.0;
  std::size_t since_best = 0;
  for (std::size_t epoch = 1; epoch <= train_cfg.max_epochs; ++epoch) {
    if (!full_batch) {
      for (std::size_t i = n_train - 1; i > 0; --i) {
        std::swap(order[i], order[shuffle_rng.below(i + 1)]);
      }
    }
    for (std::size_t start = 0; start < n_train; start += batch) {
      const std::size_t stop = std::min(start + batch, n_train);
      const std::span<const std::size_t> rows(order.data() + start, stop - start);
      const LinearModel current = unpack(theta, d, c_count);
      const auto grad = full_batch ? batch_gradient(current, x_train, y_train, result.prevalence, loss_cfg)
                                   : batch_gradient(current, x_train.select_rows(rows),
                                                    y_train.select_rows(rows), result.prevalence,
                                                    loss_cfg);
      updater.step(theta, grad);
    }

    const LinearModel current = unpack(theta, d, c_count);
    const double loss = train_loss(current);
    if (!std::isfinite(loss)) {
      throw RuntimeError("training loss became non-finite at epoch " + std::to_string(epoch) +
                         "; try a smaller learning rate");
    }
    const double val_auc = mean_auc(current.predict(x_val, labels.classes()), y_val);
    result.history.push_back(EpochRecord{epoch, loss, val_auc});

    if (epoch == 1 || val_auc > best_auc) {
      best_auc = val_auc;
      best_theta = theta;
      result.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= train_cfg.patience) {
      result.stopped_early = true;
      break;
    }
  }
  result.model = unpack(best_theta, d, c_count);
  return result;
}

std::string to_json(const LinearModel& model, const ClassList& classes) {
  nlohmann::ordered_json doc;
  doc["classes"] = classes.names();
  doc["n_features"] = model.weight.rows();
  std::vector<std::vector<double>> w;
  for (std::size_t j = 0; j < model.weight.rows(); ++j) {
    const auto row = model.weight.row(j);
    w.emplace_back(row.begin(), row.end());
  }
  doc["weight"] = w;
  doc["bias"] = model.bias;
  return doc.dump(2) + "\n";
}

std::string history_to_json(const TrainResult& result) {
  nlohmann::ordered_json doc;
  doc["initial_train_loss"] = result.initial_train_loss;
  doc["best_epoch"] = result.best_epoch;
  doc["stopped_early"] = result.stopped_early;
  doc["train_prevalence"] = result.prevalence.rho;
  nlohmann::ordered_json epochs = nlohmann::ordered_json::array();
  for (const auto& e : result.history) {
    nlohmann::ordered_json row;
    row["epoch"] = e.epoch;
    row["train_loss"] = e.train_loss;
    row["val_mean_auc"] = e.val_mean_auc;
    epochs.push_back(std::move(row));
  }
  doc["epochs"] = std::move(epochs);
  return doc.dump(2) + "\n";
}

}  // namespace ensemblefuse::synth
