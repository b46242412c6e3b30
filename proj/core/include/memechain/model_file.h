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

#ifndef MEMECHAIN_MODEL_FILE_H_
#define MEMECHAIN_MODEL_FILE_H_

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "memechain/calibrate.h"
#include "memechain/chain.h"

namespace memechain {

// How raw chain outputs become label sets. Sharpening is applied before
// group averaging and the threshold is tuned after averaging; both stages
// are recorded in the model file.
struct InferenceSettings {
  bool sharpen = true;
  // Average probabilities over each group (original plus paraphrases).
  // When false only original records are scored.
  bool average_groups = true;
  F1Average tune_metric = F1Average::kMicro;
  std::optional<Threshold> threshold;
};

struct ModelFile {
  ChainModel chain;
  InferenceSettings settings;
};

inline constexpr int kModelFormatVersion = 1;

// Line-oriented text format headed by "memechain-model <version>". Reals
// are written with 17 significant digits, so weights round-trip exactly.
void write_model(const ModelFile& model, std::ostream& out);
// Throws DataError naming the offending line.
ModelFile read_model(std::istream& in);

void save_model(const ModelFile& model, const std::filesystem::path& path);
ModelFile load_model(const std::filesystem::path& path);

}  // namespace memechain

#endif  // MEMECHAIN_MODEL_FILE_H_
