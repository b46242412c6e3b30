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

#ifndef MEMECHAIN_LOGREG_H_
#define MEMECHAIN_LOGREG_H_

#include <vector>

#include "memechain/matrix.h"

namespace memechain {

// Binary linear classifier p(y=1|x) = sigmoid(w.x + b).
struct LinearModel {
  Vector weights;
  double intercept = 0.0;

  Eigen::Index dim() const { return weights.size(); }
  bool operator==(const LinearModel& other) const {
    return weights == other.weights && intercept == other.intercept;
  }
};

// Defaults mirror the usual "default parameter" logistic regression:
// C = 1 (so lambda = 1), 100 iterations, gradient tolerance 1e-4.
struct TrainConfig {
  double l2_strength = 1.0;
  int max_iterations = 100;
  double gradient_tolerance = 1e-4;

  // Throws DataError when a field is out of range.
  void validate() const;
};

struct FitReport {
  int iterations = 0;
  bool converged = false;
  double objective = 0.0;
  double gradient_inf_norm = 0.0;
  std::vector<double> objective_trace;
};

// Numerically stable logistic function.
double sigmoid(double z);

// Left-to-right sum of a[k] * b[k]. Shared by every scoring path so that
// equal inputs give bit-identical scores.
double dot_product(const double* a, const double* b, Eigen::Index n);

// Raw scores w.x_n + b, one per row. Each score is a single row dot
// product followed by the intercept.
Vector decision_function(const LinearModel& model, const Matrix& features);

// sigmoid of decision_function. Throws DataError on a column-count mismatch.
Vector predict_proba(const LinearModel& model, const Matrix& features);

// J(w, b) = sum_n log(1 + exp(-y'_n (w.x_n + b))) + lambda/2 |w|^2 with
// y' = 2 t - 1. The intercept is not penalized.
double objective(const LinearModel& model, const Matrix& features,
                 const Vector& targets, double l2_strength);

// Gradient of `objective`: m weight entries followed by the intercept.
Vector gradient(const LinearModel& model, const Matrix& features,
                const Vector& targets, double l2_strength);

// Minimizes `objective` with L-BFGS from the zero model, or from `initial`.
// Targets must be 0 or 1. Throws DataError on empty or non-finite input and
// NumericalError if the objective diverges.
LinearModel train_binary(const Matrix& features, const Vector& targets,
                         const TrainConfig& config,
                         FitReport* report = nullptr);
LinearModel train_binary(const Matrix& features, const Vector& targets,
                         const TrainConfig& config, const LinearModel& initial,
                         FitReport* report = nullptr);

}  // namespace memechain

#endif  // MEMECHAIN_LOGREG_H_
