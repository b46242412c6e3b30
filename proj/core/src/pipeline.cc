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

#include "memechain/pipeline.h"

#include <unordered_map>

#include <fmt/format.h>

#include "memechain/error.h"
#include "memechain/fusion.h"

namespace memechain {
namespace {

// Gold rows for training. Paraphrase records without labels inherit the
// labels of their group's original.
BinaryMatrix training_gold(const Dataset& ds) {
  std::unordered_map<std::string_view, const Example*> originals;
  for (const Example& e : ds.examples()) {
    if (e.origin == Origin::kOriginal) originals.emplace(e.group, &e);
  }
  BinaryMatrix gold = BinaryMatrix::Zero(static_cast<Eigen::Index>(ds.size()),
                                         static_cast<Eigen::Index>(ds.taxonomy().size()));
  for (std::size_t n = 0; n < ds.size(); ++n) {
    const Example& e = ds[n];
    const auto* labels = e.gold ? &*e.gold : nullptr;
    if (labels == nullptr) {
      const Example* original = originals.at(e.group);
      if (original->gold) labels = &*original->gold;
    }
    if (labels == nullptr) {
      throw DataError(fmt::format("training example '{}' has no gold labels", e.id));
    }
    for (std::size_t j : *labels) {
      gold(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(j)) = 1;
    }
  }
  return gold;
}

void check_compatible(const ModelFile& model, const Dataset& ds) {
  if (ds.empty()) throw DataError("dataset has no examples");
  if (!(ds.taxonomy() == model.chain.taxonomy)) {
    throw DataError("dataset taxonomy differs from the model taxonomy");
  }
  if (ds.embedding_dim() != model.chain.feature_dim) {
    throw DataError(fmt::format("dataset embeddings have dimension {}, model expects {}",
                                ds.embedding_dim(), model.chain.feature_dim));
  }
}

}  // namespace

GroupScores score_dataset(const ModelFile& model, const Dataset& ds) {
  check_compatible(model, ds);
  const InferenceSettings& settings = model.settings;
  const Dataset view = settings.average_groups ? ds : ds.originals();

  ProbabilityMatrix probs =
      predict_chain(model.chain, featurize(view, model.chain.mode));
  if (settings.sharpen) probs = sharpen(probs);

  std::vector<std::string> groups;
  groups.reserve(view.size());
  for (const Example& e : view.examples()) groups.push_back(e.group);

  GroupScores scores;
  if (settings.average_groups) {
    GroupAverage averaged = average_groups(probs, groups);
    scores.probs = std::move(averaged.probs);
    scores.groups = std::move(averaged.groups);
  } else {
    scores.probs = std::move(probs);
    scores.groups = std::move(groups);
  }

  std::unordered_map<std::string_view, const Example*> originals;
  bool labeled = true;
  for (const Example& e : view.examples()) {
    if (e.origin != Origin::kOriginal) continue;
    originals.emplace(e.group, &e);
    labeled = labeled && e.gold.has_value();
  }
  if (labeled) {
    BinaryMatrix gold = BinaryMatrix::Zero(
        static_cast<Eigen::Index>(scores.groups.size()),
        static_cast<Eigen::Index>(ds.taxonomy().size()));
    for (std::size_t g = 0; g < scores.groups.size(); ++g) {
      for (std::size_t j : *originals.at(scores.groups[g])->gold) {
        gold(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(j)) = 1;
      }
    }
    scores.gold = std::move(gold);
  }
  return scores;
}

TrainResult train_pipeline(const Dataset& ds, const PipelineConfig& config) {
  config.train.validate();
  auto [train, validation] =
      split_train_validation(ds, config.validation_fraction, config.split_seed);
  const Dataset train_view = config.augment ? train : train.originals();

  const std::vector<std::size_t> order = config.order.empty()
                                             ? taxonomy_order(ds.taxonomy().size())
                                             : config.order;
  TrainResult result;
  result.model.chain =
      train_chain(featurize(train_view, config.mode), training_gold(train_view),
                  order, config.train, ds.taxonomy(), config.mode,
                  &result.link_reports);
  result.model.settings.sharpen = config.sharpen;
  result.model.settings.average_groups = config.augment;
  result.model.settings.tune_metric = config.tune_metric;

  const Threshold threshold = tune_model(result.model, validation);
  const GroupScores scores = score_dataset(result.model, validation);
  result.validation = f1_scores(apply_threshold(scores.probs, threshold), *scores.gold);
  result.train_split = std::move(train);
  result.validation_split = std::move(validation);
  return result;
}

Threshold tune_model(ModelFile& model, const Dataset& ds) {
  const GroupScores scores = score_dataset(model, ds);
  if (!scores.gold) throw DataError("threshold tuning needs labeled data");
  const Threshold threshold =
      tune_threshold(scores.probs, *scores.gold, model.settings.tune_metric);
  model.settings.threshold = threshold;
  return threshold;
}

MetricsReport evaluate(const ModelFile& model, const Dataset& ds) {
  if (!model.settings.threshold) {
    throw DataError("model has no tuned threshold");
  }
  const GroupScores scores = score_dataset(model, ds);
  if (!scores.gold) throw DataError("evaluation needs a labeled dataset");
  return f1_scores(apply_threshold(scores.probs, *model.settings.threshold),
                   *scores.gold);
}

Predictions predict(const ModelFile& model, const Dataset& ds,
                    std::optional<Threshold> override) {
  const std::optional<Threshold> threshold =
      override ? override : model.settings.threshold;
  if (!threshold) throw DataError("model has no tuned threshold");
  GroupScores scores = score_dataset(model, ds);
  BinaryMatrix labels = apply_threshold(scores.probs, *threshold);
  return Predictions{std::move(scores), std::move(labels), *threshold};
}

}  // namespace memechain
