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

#ifndef MEMECHAIN_FUSION_H_
#define MEMECHAIN_FUSION_H_

#include <span>
#include <string_view>
#include <vector>

#include "memechain/dataset.h"
#include "memechain/matrix.h"

namespace memechain {

enum class FeatureMode { kFused, kImageOnly, kTextOnly };

std::string_view feature_mode_name(FeatureMode mode);
// Accepts "fused", "image" and "text". Throws DataError otherwise.
FeatureMode parse_feature_mode(std::string_view name);

// Element-wise product image[k] * text[k]. Throws DataError on a dimension
// mismatch or a non-finite input.
std::vector<double> fuse(std::span<const double> image,
                         std::span<const double> text);

// N x d feature matrix in dataset order: fused embeddings, or the raw image
// or text embedding for the ablation modes.
Matrix featurize(const Dataset& ds, FeatureMode mode);

}  // namespace memechain

#endif  // MEMECHAIN_FUSION_H_
