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

#include "memechain/fusion.h"

#include <cmath>

#include <fmt/format.h>

#include "memechain/error.h"

namespace memechain {

std::string_view feature_mode_name(FeatureMode mode) {
  switch (mode) {
    case FeatureMode::kFused:
      return "fused";
    case FeatureMode::kImageOnly:
      return "image";
    case FeatureMode::kTextOnly:
      return "text";
  }
  return "fused";
}

FeatureMode parse_feature_mode(std::string_view name) {
  if (name == "fused") return FeatureMode::kFused;
  if (name == "image") return FeatureMode::kImageOnly;
  if (name == "text") return FeatureMode::kTextOnly;
  throw DataError(fmt::format("unknown feature mode '{}'", name));
}

std::vector<double> fuse(std::span<const double> image,
                         std::span<const double> text) {
  if (image.size() != text.size()) {
    throw DataError(fmt::format("cannot fuse embeddings of dimension {} and {}",
                                image.size(), text.size()));
  }
  std::vector<double> out(image.size());
  for (std::size_t k = 0; k < image.size(); ++k) {
    if (!std::isfinite(image[k]) || !std::isfinite(text[k])) {
      throw DataError("cannot fuse non-finite embedding values");
    }
    out[k] = image[k] * text[k];
  }
  return out;
}

Matrix featurize(const Dataset& ds, FeatureMode mode) {
  const auto rows = static_cast<Eigen::Index>(ds.size());
  const auto cols = static_cast<Eigen::Index>(ds.embedding_dim());
  Matrix features(rows, cols);
  for (Eigen::Index n = 0; n < rows; ++n) {
    const Example& e = ds[static_cast<std::size_t>(n)];
    std::span<const double> row;
    std::vector<double> fused;
    switch (mode) {
      case FeatureMode::kFused:
        fused = fuse(e.image_embedding, e.text_embedding);
        row = fused;
        break;
      case FeatureMode::kImageOnly:
        row = e.image_embedding;
        break;
      case FeatureMode::kTextOnly:
        row = e.text_embedding;
        break;
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      features(n, k) = row[static_cast<std::size_t>(k)];
    }
  }
  return features;
}

}  // namespace memechain
