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

#ifndef MEMECHAIN_PIPELINE_H_
#define MEMECHAIN_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "memechain/calibrate.h"
#include "memechain/chain.h"
#include "memechain/dataset.h"
#include "memechain/logreg.h"
#include "memechain/model_file.h"

namespace memechain {

struct PipelineConfig {
  FeatureMode mode = FeatureMode::kFused;
  bool sharpen = true;
  // Train on paraphrase records too and average each group's
  // probabilities at inference. When false, paraphrases are dropped.
  bool augment = true;
  // Chain order; taxonomy order when empty.
  std::vector<std::size_t> order;
  TrainConfig train;
  double validation_fraction = 0.1;
  std::uint64_t split_seed = 0;
  F1Average tune_metric = F1Average::kMicro;
};

// Group-level scores after chain prediction, optional sharpening and
// optional group averaging.
struct GroupScores {
  ProbabilityMatrix probs;
  std::vector<std::string> groups;
  // Gold labels of each group's original record, when the data is labeled.
  std::optional<BinaryMatrix> gold;
};

GroupScores score_dataset(const ModelFile& model, const Dataset& ds);

struct TrainResult {
  ModelFile model;
  Dataset train_split;
  Dataset validation_split;
  MetricsReport validation;
  std::vector<FitReport> link_reports;
};

// Splits by group, trains the chain on the training part, then tunes the
// threshold on the averaged validation scores and stores it in the model.
TrainResult train_pipeline(const Dataset& ds, const PipelineConfig& config);

// Re-tunes the threshold of `model` on a labeled dataset.
Threshold tune_model(ModelFile& model, const Dataset& ds);

// Full inference followed by F1 scoring. Requires labels and a threshold.
MetricsReport evaluate(const ModelFile& model, const Dataset& ds);

struct Predictions {
  GroupScores scores;
  BinaryMatrix labels;
  Threshold threshold;
};

// Uses the model's threshold unless `override` is given.
Predictions predict(const ModelFile& model, const Dataset& ds,
                    std::optional<Threshold> override = std::nullopt);

}  // namespace memechain

#endif  // MEMECHAIN_PIPELINE_H_
