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

#include "memechain/lbfgs.h"

#include <cmath>
#include <deque>

#include "memechain/error.h"

namespace memechain {
namespace {

struct CorrectionPair {
  Vector s;
  Vector y;
  double rho;
};

// Two-loop recursion: returns -H * grad for the implicit inverse Hessian.
Vector search_direction(const std::deque<CorrectionPair>& pairs,
                        const Vector& grad) {
  Vector q = grad;
  std::vector<double> alpha(pairs.size());
  for (std::size_t i = pairs.size(); i-- > 0;) {
    alpha[i] = pairs[i].rho * pairs[i].s.dot(q);
    q -= alpha[i] * pairs[i].y;
  }
  if (!pairs.empty()) {
    const CorrectionPair& last = pairs.back();
    q *= last.s.dot(last.y) / last.y.squaredNorm();
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double beta = pairs[i].rho * pairs[i].y.dot(q);
    q += (alpha[i] - beta) * pairs[i].s;
  }
  return -q;
}

}  // namespace

LbfgsResult minimize_lbfgs(const ValueAndGradient& fn, Vector x0,
                           const LbfgsOptions& options) {
  LbfgsResult result;
  result.x = std::move(x0);
  Vector grad(result.x.size());
  result.value = fn(result.x, grad);
  if (!std::isfinite(result.value) || !grad.allFinite()) {
    throw NumericalError("objective is not finite at the starting point");
  }
  result.trace.push_back(result.value);

  std::deque<CorrectionPair> pairs;
  Vector trial(result.x.size());
  Vector trial_grad(result.x.size());

  while (true) {
    result.gradient_inf_norm = grad.size() ? grad.cwiseAbs().maxCoeff() : 0.0;
    if (result.gradient_inf_norm <= options.gradient_tolerance) {
      result.converged = true;
      break;
    }
    if (result.iterations >= options.max_iterations) break;

    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      // Second attempt restarts from steepest descent.
      if (attempt == 1) {
        if (pairs.empty()) break;
        pairs.clear();
      }
      Vector direction = search_direction(pairs, grad);
      double slope = grad.dot(direction);
      if (!(slope < 0.0)) {
        pairs.clear();
        direction = -grad;
        slope = -grad.squaredNorm();
      }
      // Without curvature information, start with a unit-length step.
      double step = pairs.empty() ? std::min(1.0, 1.0 / direction.norm()) : 1.0;
      for (int halving = 0; halving < 60; ++halving) {
        trial = result.x + step * direction;
        const double value = fn(trial, trial_grad);
        if (std::isfinite(value) &&
            value <= result.value + options.armijo * step * slope) {
          Vector s = trial - result.x;
          Vector y = trial_grad - grad;
          const double sy = s.dot(y);
          if (sy > 1e-12 * s.norm() * y.norm()) {
            pairs.push_back({std::move(s), std::move(y), 1.0 / sy});
            if (static_cast<int>(pairs.size()) > options.history) {
              pairs.pop_front();
            }
          }
          result.x.swap(trial);
          grad.swap(trial_grad);
          result.value = value;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
    }
    if (!accepted) break;
    ++result.iterations;
    result.trace.push_back(result.value);
  }
  return result;
}

}  // namespace memechain
