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

#ifndef MEMECHAIN_LBFGS_H_
#define MEMECHAIN_LBFGS_H_

#include <functional>
#include <vector>

#include "memechain/matrix.h"

namespace memechain {

// Returns f(x) and writes the gradient into `grad` (already sized).
using ValueAndGradient = std::function<double(const Vector& x, Vector& grad)>;

struct LbfgsOptions {
  int max_iterations = 100;
  // Stop once the largest absolute gradient entry is at or below this.
  double gradient_tolerance = 1e-4;
  int history = 10;
  // Armijo sufficient-decrease constant.
  double armijo = 1e-4;
};

struct LbfgsResult {
  Vector x;
  double value = 0.0;
  double gradient_inf_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  // Objective at x0 followed by the value at every accepted iterate.
  std::vector<double> trace;
};

// Limited-memory BFGS with backtracking line search. Every accepted step
// satisfies the Armijo condition, so the trace is non-increasing. When no
// decrease is possible along either the quasi-Newton or the steepest
// descent direction, the current iterate is returned unconverged.
// Throws NumericalError if the objective is non-finite at x0.
LbfgsResult minimize_lbfgs(const ValueAndGradient& fn, Vector x0,
                           const LbfgsOptions& options);

}  // namespace memechain

#endif  // MEMECHAIN_LBFGS_H_
