// Copyright 2026 The memechain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "memechain/synth.h"

#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include <fmt/format.h>

#include "memechain/error.h"
#include "memechain/matrix.h"

namespace memechain {
namespace {

// Portable draws on top of mt19937_64, whose output sequence is fixed by
// the standard (unlike the <random> distributions).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    // Box-Muller; 1 - u keeps the log argument in (0, 1].
    const double radius = std::sqrt(-2.0 * std::log(1.0 - uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

struct Rule {
  Vector direction;
  double offset;
};

std::vector<Rule> draw_rules(Rng& rng, std::size_t n_labels, std::size_t dim) {
  std::vector<Rule> rules;
  const auto d = static_cast<Eigen::Index>(dim);
  for (std::size_t k = 0; k < n_labels; ++k) {
    Vector u(d);
    for (Eigen::Index i = 0; i < d; ++i) u[i] = rng.normal();
    if (k < dim) {
      // Gram-Schmidt against the earlier directions.
      for (const Rule& r : rules) u -= u.dot(r.direction) * r.direction;
    }
    const double norm = u.norm();
    if (norm > 0.0) u /= norm;
    rules.push_back({std::move(u), rng.uniform() - 0.5});
  }
  return rules;
}

}  // namespace

void SynthConfig::validate() const {
  if (n_examples == 0) throw DataError("synthetic dataset needs at least one example");
  if (feature_dim == 0) throw DataError("feature dimension must be positive");
  if (n_labels == 0) throw DataError("synthetic dataset needs at least one label");
  if (!(correlation >= 0.0 && correlation <= 1.0)) {
    throw DataError(fmt::format("correlation {} outside [0, 1]", correlation));
  }
  if (!(noise >= 0.0 && noise <= 0.5)) {
    throw DataError(fmt::format("noise {} outside [0, 0.5]", noise));
  }
  if (!(augment_sigma >= 0.0) || !std::isfinite(augment_sigma)) {
    throw DataError(fmt::format("augmentation sigma {} must be >= 0", augment_sigma));
  }
}

Taxonomy synthetic_taxonomy(std::size_t n_labels) {
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < n_labels; ++k) {
    labels.push_back(fmt::format("label_{}", k));
  }
  return Taxonomy(std::move(labels));
}

Dataset generate(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);
  // Separate stream so augmentation leaves the base draw untouched.
  Rng perturb(config.seed ^ 0x9e3779b97f4a7c15ULL);
  const std::vector<Rule> rules =
      draw_rules(rng, config.n_labels, config.feature_dim);
  const auto d = static_cast<Eigen::Index>(config.feature_dim);

  std::vector<Example> examples;
  examples.reserve(config.n_examples * (1 + config.augment_copies));
  Vector x(d);
  for (std::size_t n = 0; n < config.n_examples; ++n) {
    for (Eigen::Index i = 0; i < d; ++i) x[i] = rng.normal();
    std::vector<std::size_t> gold;
    bool previous = false;
    for (std::size_t k = 0; k < config.n_labels; ++k) {
      bool label;
      if (k > 0 && rng.bernoulli(config.correlation)) {
        label = previous;
      } else {
        label = rules[k].direction.dot(x) + rules[k].offset > 0.0;
        if (rng.bernoulli(config.noise)) label = !label;
      }
      if (label) gold.push_back(k);
      previous = label;
    }

    Example original;
    original.id = fmt::format("ex{}", n);
    original.group = fmt::format("g{}", n);
    original.image_embedding.assign(x.data(), x.data() + d);
    original.text_embedding.assign(config.feature_dim, 1.0);
    original.gold = std::move(gold);
    const std::size_t first = examples.size();
    examples.push_back(original);
    for (std::size_t c = 0; c < config.augment_copies; ++c) {
      Example copy = original;
      copy.id = fmt::format("ex{}~{}", n, c + 1);
      copy.origin = Origin::kParaphrase;
      examples.push_back(std::move(copy));
    }
    if (config.augment_copies > 0) {
      for (std::size_t m = first; m < examples.size(); ++m) {
        for (double& t : examples[m].text_embedding) {
          t += config.augment_sigma * perturb.normal();
        }
      }
    }
  }
  return Dataset(synthetic_taxonomy(config.n_labels), std::move(examples));
}

}  // namespace memechain
