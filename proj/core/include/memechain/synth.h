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

#ifndef MEMECHAIN_SYNTH_H_
#define MEMECHAIN_SYNTH_H_

#include <cstddef>
#include <cstdint>

#include "memechain/dataset.h"

namespace memechain {

struct SynthConfig {
  std::size_t n_examples = 1000;
  std::size_t feature_dim = 8;
  std::size_t n_labels = 4;
  // Probability that label k copies label k-1 instead of following its own
  // rule.
  double correlation = 0.5;
  // Probability of flipping a label drawn from a rule.
  double noise = 0.1;
  std::uint64_t seed = 0;
  // Paraphrase simulation: extra perturbed members per group and the
  // standard deviation of the text-embedding perturbation.
  std::size_t augment_copies = 0;
  double augment_sigma = 0.0;

  // Throws DataError when a field is out of range.
  void validate() const;
};

// Taxonomy "label_0", ..., "label_{n-1}".
Taxonomy synthetic_taxonomy(std::size_t n_labels);

// Planted multi-label problem. Features x ~ N(0, I) become the image
// embedding; the text embedding is all ones, so fuse() returns x exactly.
// Label k follows its own linear rule sign(u_k.x + c_k), flipped with
// probability `noise`, except that with probability `correlation` (k >= 1)
// it copies label k-1. Rule directions are orthonormal while
// n_labels <= feature_dim, which makes rule-drawn labels independent.
//
// With augment_copies > 0 every group gets that many paraphrase members,
// and every member of the group (the original included) has its text
// embedding perturbed by N(0, augment_sigma^2) noise, so the members are
// independent noisy views of the same planted features. The un-augmented
// draw does not depend on the augmentation settings.
Dataset generate(const SynthConfig& config);

}  // namespace memechain

#endif  // MEMECHAIN_SYNTH_H_
