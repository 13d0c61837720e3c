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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

namespace ensemblefuse::testing {

double bce_oracle(const std::vector<double>& p, const std::vector<int>& y, std::size_t n,
                  std::size_t c, double eps) {
  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    double row = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      const double q = std::min(std::max(p[r * c + j], eps), 1.0 - eps);
      const double t = y[r * c + j];
      row -= t * std::log(q) + (1.0 - t) * std::log(1.0 - q);
    }
    total += row;
  }
  return total / static_cast<double>(n);
}

std::vector<double> bce_grad_oracle(const std::vector<double>& p, const std::vector<int>& y,
                                    std::size_t n) {
  std::vector<double> g(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    g[i] = (p[i] - y[i]) / (p[i] * (1.0 - p[i])) / static_cast<double>(n);
  }
  return g;
}

double pairwise_auc_oracle(const std::vector<double>& scores, const std::vector<int>& labels) {
  double credit = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!labels[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j]) continue;
      ++pairs;
      if (scores[i] > scores[j]) {
        credit += 1.0;
      } else if (scores[i] == scores[j]) {
        credit += 0.5;
      }
    }
  }
  return credit / static_cast<double>(pairs);
}

double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

GridOptimum simplex_grid_search_3(const std::function<double(const std::vector<double>&)>& f,
                                  int steps_per_unit) {
  GridOptimum best;
  best.value = -std::numeric_limits<double>::infinity();
  const double step = 1.0 / steps_per_unit;
  for (int i = 0; i <= steps_per_unit; ++i) {
    for (int j = 0; i + j <= steps_per_unit; ++j) {
      const int k = steps_per_unit - i - j;
      std::vector<double> w = {i * step, j * step, k * step};
      const double s = w[0] + w[1] + w[2];
      for (double& v : w) v /= s;
      const double value = f(w);
      ++best.evaluations;
      if (value > best.value) {
        best.value = value;
        best.weights = w;
      }
    }
  }
  return best;
}

ClassList numbered_classes(std::size_t c) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < c; ++j) names.push_back("C" + std::to_string(j));
  return ClassList(names);
}

PredictionMatrix random_predictions(std::mt19937_64& gen, std::size_t n, std::size_t c) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix<double> m(n, c);
  for (double& v : m.data()) v = u(gen);
  return PredictionMatrix(numbered_classes(c), std::move(m));
}

LabelMatrix random_labels(std::mt19937_64& gen, std::size_t n, std::size_t c, double rate) {
  std::bernoulli_distribution b(rate);
  Matrix<std::uint8_t> m(n, c);
  for (auto& v : m.data()) v = b(gen) ? 1 : 0;
  return LabelMatrix(numbered_classes(c), std::move(m));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string fnv1a_file(const std::filesystem::path& path) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : read_file(path)) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ensemblefuse::testing
