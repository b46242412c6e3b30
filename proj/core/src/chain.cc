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

#include "memechain/chain.h"

#include <cmath>

#include <fmt/format.h>

#include "memechain/error.h"

namespace memechain {

ProbabilityMatrix::ProbabilityMatrix(Matrix values) : values_(std::move(values)) {
  for (Eigen::Index n = 0; n < values_.rows(); ++n) {
    for (Eigen::Index j = 0; j < values_.cols(); ++j) {
      const double p = values_(n, j);
      if (!(p >= 0.0 && p <= 1.0)) {
        throw DataError(fmt::format(
            "probability ({}, {}) = {} is outside [0, 1]", n, j, p));
      }
    }
  }
}

std::vector<std::size_t> taxonomy_order(std::size_t num_labels) {
  std::vector<std::size_t> order(num_labels);
  for (std::size_t k = 0; k < num_labels; ++k) order[k] = k;
  return order;
}

void check_permutation(std::span<const std::size_t> order,
                       std::size_t num_labels) {
  if (order.size() != num_labels) {
    throw DataError(fmt::format("chain order has {} entries for {} labels",
                                order.size(), num_labels));
  }
  std::vector<bool> seen(num_labels, false);
  for (std::size_t label : order) {
    if (label >= num_labels || seen[label]) {
      throw DataError("chain order is not a permutation of the label indices");
    }
    seen[label] = true;
  }
}

void ChainModel::validate() const {
  check_permutation(order, taxonomy.size());
  if (links.size() != taxonomy.size()) {
    throw DataError(fmt::format("chain has {} links for {} labels",
                                links.size(), taxonomy.size()));
  }
  for (std::size_t k = 0; k < links.size(); ++k) {
    if (static_cast<std::size_t>(links[k].dim()) != feature_dim + k) {
      throw DataError(fmt::format("link {} has {} weights, expected {}", k,
                                  links[k].dim(), feature_dim + k));
    }
  }
}

ChainModel train_chain(const Matrix& features, const BinaryMatrix& gold,
                       std::span<const std::size_t> order,
                       const TrainConfig& config, const Taxonomy& taxonomy,
                       FeatureMode mode, std::vector<FitReport>* reports) {
  const auto num_labels = static_cast<std::size_t>(gold.cols());
  if (num_labels != taxonomy.size()) {
    throw DataError(fmt::format("gold matrix has {} columns for {} labels",
                                gold.cols(), taxonomy.size()));
  }
  if (gold.rows() != features.rows()) {
    throw DataError(fmt::format("gold matrix has {} rows for {} feature rows",
                                gold.rows(), features.rows()));
  }
  check_permutation(order, num_labels);

  ChainModel model;
  model.taxonomy = taxonomy;
  model.order.assign(order.begin(), order.end());
  model.feature_dim = static_cast<std::size_t>(features.cols());
  model.mode = mode;
  if (reports != nullptr) reports->clear();

  const Eigen::Index d = features.cols();
  Matrix inputs(features.rows(), d + static_cast<Eigen::Index>(num_labels) - 1);
  inputs.leftCols(d) = features;
  for (std::size_t k = 0; k < num_labels; ++k) {
    const auto width = d + static_cast<Eigen::Index>(k);
    if (k > 0) {
      inputs.col(width - 1) =
          gold.col(static_cast<Eigen::Index>(order[k - 1])).cast<double>();
    }
    const Vector targets =
        gold.col(static_cast<Eigen::Index>(order[k])).cast<double>();
    FitReport report;
    model.links.push_back(
        train_binary(inputs.leftCols(width), targets, config, &report));
    if (reports != nullptr) reports->push_back(std::move(report));
  }
  return model;
}

ProbabilityMatrix predict_chain(const ChainModel& model, const Matrix& features) {
  model.validate();
  if (static_cast<std::size_t>(features.cols()) != model.feature_dim) {
    throw DataError(fmt::format("model expects {} features, got {}",
                                model.feature_dim, features.cols()));
  }
  const auto d = static_cast<Eigen::Index>(model.feature_dim);
  const std::size_t num_labels = model.num_labels();
  Matrix out(features.rows(), static_cast<Eigen::Index>(num_labels));
  std::vector<double> earlier(num_labels);
  for (Eigen::Index n = 0; n < features.rows(); ++n) {
    const double* x = features.row(n).data();
    for (std::size_t k = 0; k < num_labels; ++k) {
      const LinearModel& link = model.links[k];
      const double* w = link.weights.data();
      const double label_part = dot_product(
          earlier.data(), w + d, static_cast<Eigen::Index>(k));
      const double score = (dot_product(x, w, d) + label_part) + link.intercept;
      earlier[k] = sigmoid(score);
      out(n, static_cast<Eigen::Index>(model.order[k])) = earlier[k];
    }
  }
  return ProbabilityMatrix(std::move(out));
}

ChainModel zero_label_inputs(const ChainModel& model) {
  ChainModel out = model;
  const auto d = static_cast<Eigen::Index>(model.feature_dim);
  for (LinearModel& link : out.links) {
    link.weights.tail(link.dim() - d).setZero();
  }
  return out;
}

ProbabilityMatrix sharpen(const ProbabilityMatrix& probs) {
  return ProbabilityMatrix(probs.values().unaryExpr(&sigmoid));
}

}  // namespace memechain
