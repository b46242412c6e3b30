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

#ifndef MEMECHAIN_CHAIN_H_
#define MEMECHAIN_CHAIN_H_

#include <cstddef>
#include <span>
#include <vector>

#include "memechain/dataset.h"
#include "memechain/fusion.h"
#include "memechain/logreg.h"
#include "memechain/matrix.h"

namespace memechain {

// N x L scores in [0, 1]. Column j always refers to taxonomy label j,
// whatever order the chain visited the labels in.
class ProbabilityMatrix {
 public:
  ProbabilityMatrix() = default;
  // Throws DataError if any entry is non-finite or outside [0, 1].
  explicit ProbabilityMatrix(Matrix values);

  const Matrix& values() const { return values_; }
  Eigen::Index rows() const { return values_.rows(); }
  Eigen::Index cols() const { return values_.cols(); }
  double operator()(Eigen::Index n, Eigen::Index j) const {
    return values_(n, j);
  }

  bool operator==(const ProbabilityMatrix& other) const {
    return values_.rows() == other.values_.rows() &&
           values_.cols() == other.values_.cols() && values_ == other.values_;
  }

 private:
  Matrix values_;
};

// L logistic links. Link k predicts label order[k] from the d features
// followed by the k labels earlier in the chain, so its weight vector has
// exactly d + k entries.
struct ChainModel {
  Taxonomy taxonomy;
  std::vector<std::size_t> order;
  std::vector<LinearModel> links;
  std::size_t feature_dim = 0;
  FeatureMode mode = FeatureMode::kFused;

  std::size_t num_labels() const { return links.size(); }

  // Throws DataError if the order is not a permutation of the taxonomy
  // indices or a link has the wrong width.
  void validate() const;
};

// 0, 1, ..., num_labels - 1.
std::vector<std::size_t> taxonomy_order(std::size_t num_labels);

// Throws DataError unless `order` is a permutation of 0..num_labels-1.
void check_permutation(std::span<const std::size_t> order,
                       std::size_t num_labels);

// Trains link k on [features | gold[:, order[0..k-1]]] against gold[:, order[k]].
ChainModel train_chain(const Matrix& features, const BinaryMatrix& gold,
                       std::span<const std::size_t> order,
                       const TrainConfig& config, const Taxonomy& taxonomy,
                       FeatureMode mode = FeatureMode::kFused,
                       std::vector<FitReport>* reports = nullptr);

// Chained inference: link k sees the predicted probabilities (not
// thresholded labels) of the earlier links.
ProbabilityMatrix predict_chain(const ChainModel& model, const Matrix& features);

// Copy of `model` with every weight on a previous-label input set to zero,
// which reduces the chain to independent per-label classifiers.
ChainModel zero_label_inputs(const ChainModel& model);

// Element-wise logistic sigmoid of the probabilities. Strictly increasing;
// maps [0, 1] into [0.5, sigmoid(1)].
ProbabilityMatrix sharpen(const ProbabilityMatrix& probs);

}  // namespace memechain

#endif  // MEMECHAIN_CHAIN_H_
