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

#include <cmath>
#include <random>

#include "ensemblefuse/errors.hpp"
#include "ensemblefuse/losses.hpp"
#include "oracles.hpp"

namespace ensemblefuse {
namespace {

PredictionMatrix single_p(double p) {
  return PredictionMatrix(ClassList({"A"}), Matrix<double>(1, 1, std::vector<double>{p}));
}

LabelMatrix single_y(int y) {
  return LabelMatrix(ClassList({"A"}),
                     Matrix<std::uint8_t>(1, 1, std::vector<std::uint8_t>{static_cast<std::uint8_t>(y)}));
}

std::vector<double> values_of(const PredictionMatrix& m) {
  return {m.values().data().begin(), m.values().data().end()};
}

std::vector<int> values_of(const LabelMatrix& m) {
  return {m.values().data().begin(), m.values().data().end()};
}

LossConfig config(double gp, double gn, double m, bool weighted) {
  LossConfig cfg;
  cfg.gamma_pos = gp;
  cfg.gamma_neg = gn;
  cfg.margin = m;
  cfg.use_class_weights = weighted;
  return cfg;
}

TEST(Prevalence, CountsPositives) {
  const LabelMatrix y(ClassList({"A", "B"}),
                      Matrix<std::uint8_t>(4, 2, std::vector<std::uint8_t>{1, 0, 0, 0, 0, 0, 0, 0}));
  const auto rho = compute_prevalence(y).rho;
  EXPECT_EQ(rho[0], 0.25);
  EXPECT_EQ(rho[1], 0.0);
}

TEST(SampleClassWeight, ClosedForm) {
  EXPECT_EQ(sample_class_weight(1, 1.0), 1.0);
  EXPECT_EQ(sample_class_weight(0, 0.0), 1.0);
  // e^0.9956 evaluated to 30 digits.
  EXPECT_NEAR(sample_class_weight(1, 0.0044), 2.70634766283198596582, 1e-14);
}

TEST(SampleClassWeight, RarerClassGetsLargerPositiveWeight) {
  const double hernia = 0.0044;
  const double infiltration = 0.3844;
  EXPECT_GT(sample_class_weight(1, hernia), sample_class_weight(1, infiltration));
  double prev = sample_class_weight(1, 0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double w = sample_class_weight(1, i / 1000.0);
    ASSERT_LT(w, prev);
    prev = w;
  }
}

TEST(WbceLoss, SingleEntryHandValue) {
  const ClassPrevalence rho{{0.5}};
  // e^0.5 * ln 2, 30-digit reference.
  EXPECT_NEAR(wbce_loss(single_p(0.5), single_y(1), rho), 1.14280650031500419269, 1e-14);
}

TEST(WbceLoss, PerfectPredictionIsNearZero) {
  std::mt19937_64 gen(1);
  const auto y = testing::random_labels(gen, 50, 4);
  Matrix<double> p(50, 4);
  for (std::size_t i = 0; i < p.data().size(); ++i) p.data()[i] = y.values().data()[i];
  const PredictionMatrix preds(y.classes(), std::move(p));
  const auto rho = compute_prevalence(y);
  const double w_max = std::exp(1.0);
  const double bound = 4 * w_max * -std::log(1.0 - 1e-7);
  const double loss = wbce_loss(preds, y, rho);
  EXPECT_GE(loss, 0.0);
  EXPECT_LE(loss, bound);
}

TEST(WbceLoss, UnweightedEqualsBceOracle) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = testing::random_predictions(gen, 17, 5);
    const auto y = testing::random_labels(gen, 17, 5);
    const double expected = testing::bce_oracle(values_of(p), values_of(y), 17, 5);
    EXPECT_NEAR(wbce_loss(p, y, compute_prevalence(y), config(1, 4, 0.05, false)), expected, 1e-12);
  }
}

TEST(AslLoss, MarginZeroesSmallNegatives) {
  EXPECT_EQ(asl_loss(single_p(0.03), single_y(0)), 0.0);
}

TEST(AslLoss, SingleEntryHandValue) {
  // 0.5 * ln 2
  EXPECT_NEAR(asl_loss(single_p(0.5), single_y(1), config(1, 4, 0.05, false)),
              0.34657359027997265471, 1e-14);
}

TEST(AslLoss, NoFocusNoMarginIsBce) {
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = testing::random_predictions(gen, 9, 3);
    const auto y = testing::random_labels(gen, 9, 3);
    EXPECT_NEAR(asl_loss(p, y, LossConfig::bce()), testing::bce_oracle(values_of(p), values_of(y), 9, 3),
                1e-12);
  }
}

TEST(CombinedLoss, DefaultsMatchPublishedSetting) {
  const LossConfig cfg;
  EXPECT_EQ(cfg.gamma_pos, 1.0);
  EXPECT_EQ(cfg.gamma_neg, 4.0);
  EXPECT_EQ(cfg.margin, 0.05);
  EXPECT_EQ(cfg.prob_clamp_epsilon, 1e-7);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(CombinedLoss, SingleEntryHandValue) {
  // e^0.5 * 0.5 * ln 2
  EXPECT_NEAR(combined_loss(single_p(0.5), single_y(1), ClassPrevalence{{0.5}}),
              0.57140325015750209635, 1e-14);
}

TEST(CombinedLoss, ReducesToWbce) {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = testing::random_predictions(gen, 20, 6);
    const auto y = testing::random_labels(gen, 20, 6);
    const auto rho = compute_prevalence(y);
    const auto cfg = config(0, 0, 0, true);
    EXPECT_NEAR(combined_loss(p, y, rho, cfg), wbce_loss(p, y, rho, cfg), 1e-12);
  }
}

TEST(CombinedLoss, NonNegative) {
  std::mt19937_64 gen(14);
  std::uniform_real_distribution<double> g(0.0, 5.0), m(0.0, 0.5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = testing::random_predictions(gen, 8, 4);
    const auto y = testing::random_labels(gen, 8, 4);
    const auto rho = compute_prevalence(y);
    const auto cfg = config(g(gen), g(gen), m(gen), trial % 2 == 0);
    EXPECT_GE(combined_loss(p, y, rho, cfg), 0.0);
    EXPECT_GE(wbce_loss(p, y, rho, cfg), 0.0);
    EXPECT_GE(asl_loss(p, y, cfg), 0.0);
  }
}

TEST(CombinedLoss, MonotoneInProbability) {
  const LossConfig cfg;
  const ClassPrevalence rho{{0.1}};
  const double eps = cfg.prob_clamp_epsilon;
  double prev_pos = combined_loss(single_p(eps * 2), single_y(1), rho, cfg);
  double prev_neg = combined_loss(single_p(eps * 2), single_y(0), rho, cfg);
  for (int i = 1; i < 2000; ++i) {
    const double p = eps * 2 + (1.0 - 4 * eps) * i / 2000.0;
    const double pos = combined_loss(single_p(p), single_y(1), rho, cfg);
    const double neg = combined_loss(single_p(p), single_y(0), rho, cfg);
    ASSERT_LT(pos, prev_pos) << "p=" << p;
    ASSERT_GE(neg, prev_neg) << "p=" << p;
    if (p <= cfg.margin) ASSERT_EQ(neg, 0.0) << "p=" << p;
    prev_pos = pos;
    prev_neg = neg;
  }
}

TEST(CombinedLoss, ShapeMismatchThrows) {
  std::mt19937_64 gen(15);
  const auto p = testing::random_predictions(gen, 4, 2);
  const auto y = testing::random_labels(gen, 5, 2);
  EXPECT_THROW(combined_loss(p, y, ClassPrevalence{{0.5, 0.5}}), ValidationError);
  const auto y4 = testing::random_labels(gen, 4, 2);
  EXPECT_THROW(combined_loss(p, y4, ClassPrevalence{{0.5}}), ValidationError);
}

TEST(LossConfig, RejectsOutOfRange) {
  EXPECT_THROW(config(-1, 4, 0.05, true).validate(), ValidationError);
  EXPECT_THROW(config(1, -4, 0.05, true).validate(), ValidationError);
  EXPECT_THROW(config(1, 4, 1.0, true).validate(), ValidationError);
  EXPECT_THROW(config(1, 4, -0.1, true).validate(), ValidationError);
}

TEST(CombinedLossGrad, ZeroBelowMarginForNegatives) {
  const LossConfig cfg;
  for (double p : {1e-6, 0.01, 0.03, 0.05}) {
    const auto g = combined_loss_grad(single_p(p), single_y(0), ClassPrevalence{{0.2}}, cfg);
    EXPECT_EQ(g(0, 0), 0.0) << p;
  }
}

TEST(CombinedLossGrad, MatchesBceGradientWhenReduced) {
  std::mt19937_64 gen(16);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  Matrix<double> pv(30, 4);
  for (double& v : pv.data()) v = u(gen);
  const PredictionMatrix p(testing::numbered_classes(4), std::move(pv));
  const auto y = testing::random_labels(gen, 30, 4);
  const auto g = combined_loss_grad(p, y, compute_prevalence(y), LossConfig::bce());
  const auto expected = testing::bce_grad_oracle(values_of(p), values_of(y), 30);
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_NEAR(g.data()[i], expected[i], 1e-12 * std::abs(expected[i]));
  }
}

// Each entry's contribution is separable, so single-entry problems give the
// finite-difference oracle full precision even where the gradient is tiny.
TEST(CombinedLossGrad, MatchesFiniteDifferences) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> up(1e-3, 1.0 - 1e-3), urho(0.0, 1.0);
  const LossConfig cfg;
  int checked = 0;
  while (checked < 300) {
    const double p = up(gen);
    if (std::abs(p - cfg.margin) <= 1e-3) continue;
    const int y = checked % 2;
    const ClassPrevalence rho{{urho(gen)}};
    const double analytic = combined_loss_grad(single_p(p), single_y(y), rho, cfg)(0, 0);
    const double numeric = testing::central_difference(
        [&](double x) { return combined_loss(single_p(x), single_y(y), rho, cfg); }, p, 1e-6);
    if (analytic == 0.0) {
      EXPECT_EQ(numeric, 0.0);
    } else {
      EXPECT_LT(std::abs(analytic - numeric) / std::abs(analytic), 1e-5)
          << "p=" << p << " y=" << y << " analytic=" << analytic << " numeric=" << numeric;
    }
    ++checked;
  }
}

TEST(CombinedLossGrad, ScalesWithSampleCount) {
  std::mt19937_64 gen(18);
  const auto p = testing::random_predictions(gen, 6, 3);
  const auto y = testing::random_labels(gen, 6, 3);
  const auto rho = compute_prevalence(y);
  const LossConfig cfg;
  const auto g = combined_loss_grad(p, y, rho, cfg);
  for (std::size_t r = 0; r < 6; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      const PredictionMatrix one(ClassList({"A"}), Matrix<double>(1, 1, std::vector<double>{p(r, c)}));
      const LabelMatrix yl(ClassList({"A"}),
                           Matrix<std::uint8_t>(1, 1, std::vector<std::uint8_t>{y(r, c)}));
      const double single = combined_loss_grad(one, yl, ClassPrevalence{{rho.rho[c]}}, cfg)(0, 0);
      EXPECT_DOUBLE_EQ(g(r, c), single / 6.0);
    }
  }
}

}  // namespace
}  // namespace ensemblefuse
