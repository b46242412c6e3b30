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

#include "memechain/logreg.h"

#include <cmath>

#include <fmt/format.h>

#include "memechain/error.h"
#include "memechain/lbfgs.h"

namespace memechain {
namespace {

// log(1 + exp(t)) without overflow.
double softplus(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

void check_targets(const Matrix& features, const Vector& targets) {
  if (targets.size() != features.rows()) {
    throw DataError(fmt::format("{} targets for {} feature rows",
                                targets.size(), features.rows()));
  }
}

void check_problem(const Matrix& features, const Vector& targets) {
  if (features.rows() == 0) throw DataError("cannot train on an empty dataset");
  check_targets(features, targets);
  if (!features.allFinite()) throw DataError("features contain non-finite values");
  for (Eigen::Index n = 0; n < targets.size(); ++n) {
    if (targets[n] != 0.0 && targets[n] != 1.0) {
      throw DataError(fmt::format("target {} is {}, expected 0 or 1", n, targets[n]));
    }
  }
}

// Parameters are packed as [w; b].
LinearModel unpack(const Vector& params) {
  const Eigen::Index m = params.size() - 1;
  return LinearModel{params.head(m), params[m]};
}

}  // namespace

void TrainConfig::validate() const {
  if (!(l2_strength >= 0.0) || !std::isfinite(l2_strength)) {
    throw DataError(fmt::format("l2 strength must be >= 0, got {}", l2_strength));
  }
  if (max_iterations <= 0) {
    throw DataError(
        fmt::format("max iterations must be positive, got {}", max_iterations));
  }
  if (!(gradient_tolerance > 0.0)) {
    throw DataError(fmt::format("gradient tolerance must be > 0, got {}",
                                gradient_tolerance));
  }
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double dot_product(const double* a, const double* b, Eigen::Index n) {
  double sum = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) sum += a[k] * b[k];
  return sum;
}

Vector decision_function(const LinearModel& model, const Matrix& features) {
  if (features.cols() != model.dim()) {
    throw DataError(fmt::format("model expects {} features, got {}",
                                model.dim(), features.cols()));
  }
  Vector scores(features.rows());
  for (Eigen::Index n = 0; n < features.rows(); ++n) {
    scores[n] = dot_product(features.row(n).data(), model.weights.data(),
                            model.dim()) +
                model.intercept;
  }
  return scores;
}

Vector predict_proba(const LinearModel& model, const Matrix& features) {
  return decision_function(model, features).unaryExpr(&sigmoid);
}

double objective(const LinearModel& model, const Matrix& features,
                 const Vector& targets, double l2_strength) {
  check_targets(features, targets);
  const Vector scores = decision_function(model, features);
  double total = 0.0;
  for (Eigen::Index n = 0; n < scores.size(); ++n) {
    const double sign = 2.0 * targets[n] - 1.0;
    total += softplus(-sign * scores[n]);
  }
  return total + 0.5 * l2_strength * model.weights.squaredNorm();
}

Vector gradient(const LinearModel& model, const Matrix& features,
                const Vector& targets, double l2_strength) {
  check_targets(features, targets);
  const Vector scores = decision_function(model, features);
  Vector residual(scores.size());
  for (Eigen::Index n = 0; n < scores.size(); ++n) {
    residual[n] = sigmoid(scores[n]) - targets[n];
  }
  const Eigen::Index m = model.dim();
  Vector grad(m + 1);
  grad.head(m) = features.transpose() * residual + l2_strength * model.weights;
  grad[m] = residual.sum();
  return grad;
}

LinearModel train_binary(const Matrix& features, const Vector& targets,
                         const TrainConfig& config, FitReport* report) {
  return train_binary(features, targets, config,
                      LinearModel{Vector::Zero(features.cols()), 0.0}, report);
}

LinearModel train_binary(const Matrix& features, const Vector& targets,
                         const TrainConfig& config, const LinearModel& initial,
                         FitReport* report) {
  config.validate();
  check_problem(features, targets);
  if (initial.dim() != features.cols()) {
    throw DataError(fmt::format("initial model has {} weights, features have {} columns",
                                initial.dim(), features.cols()));
  }
  const Eigen::Index m = features.cols();
  const double lambda = config.l2_strength;

  // Reused across evaluations.
  Vector scores(features.rows());
  Vector residual(features.rows());
  const ValueAndGradient fn = [&](const Vector& params, Vector& grad) {
    const auto w = params.head(m);
    const double b = params[m];
    double value = 0.0;
    for (Eigen::Index n = 0; n < features.rows(); ++n) {
      scores[n] = features.row(n).dot(w) + b;
      const double sign = 2.0 * targets[n] - 1.0;
      value += softplus(-sign * scores[n]);
      residual[n] = sigmoid(scores[n]) - targets[n];
    }
    value += 0.5 * lambda * w.squaredNorm();
    grad.head(m) = features.transpose() * residual + lambda * w;
    grad[m] = residual.sum();
    return value;
  };

  Vector x0(m + 1);
  x0.head(m) = initial.weights;
  x0[m] = initial.intercept;
  LbfgsOptions options;
  options.max_iterations = config.max_iterations;
  options.gradient_tolerance = config.gradient_tolerance;
  LbfgsResult fit = minimize_lbfgs(fn, std::move(x0), options);
  if (!std::isfinite(fit.value) || !fit.x.allFinite()) {
    throw NumericalError("logistic regression diverged");
  }
  if (report != nullptr) {
    report->iterations = fit.iterations;
    report->converged = fit.converged;
    report->objective = fit.value;
    report->gradient_inf_norm = fit.gradient_inf_norm;
    report->objective_trace = std::move(fit.trace);
  }
  return unpack(fit.x);
}

}  // namespace memechain
