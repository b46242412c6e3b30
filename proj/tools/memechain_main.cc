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

// memechain: classifier-chain training and evaluation over fused
// image/text embeddings.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "memechain/calibrate.h"
#include "memechain/dataset.h"
#include "memechain/error.h"
#include "memechain/model_file.h"
#include "memechain/pipeline.h"
#include "memechain/synth.h"

namespace memechain {
namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

namespace fs = std::filesystem;

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
  return out;
}

// Writes to `path`, or to stdout when the path is empty.
template <typename Writer>
void emit(const fs::path& path, Writer write) {
  if (path.empty()) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out = open_output(path);
  write(out);
  if (!out) throw DataError(fmt::format("write failed for '{}'", path.string()));
}

void write_report(const MetricsReport& report, const ModelFile& model,
                  std::ostream& out) {
  out << fmt::format("threshold={:.17g}\n", model.settings.threshold->value());
  out << "tune_metric=" << f1_average_name(model.settings.tune_metric) << '\n';
  write_metrics_report(report, model.chain.taxonomy, out);
}

// Dataset taxonomy: the explicit file when given, else the model's.
Taxonomy resolve_taxonomy(const std::string& path, const ModelFile& model) {
  return path.empty() ? model.chain.taxonomy : Taxonomy::load(path);
}

struct StatsOptions {
  std::string taxonomy, data, out;
};

void run_stats(const StatsOptions& o) {
  const Dataset ds = load_dataset(o.data, Taxonomy::load(o.taxonomy));
  const std::vector<std::size_t> counts = label_counts(ds);
  emit(o.out, [&](std::ostream& out) {
    out << "label,count\n";
    for (std::size_t j = 0; j < counts.size(); ++j) {
      out << csv_field(ds.taxonomy().name(j)) << ',' << counts[j] << '\n';
    }
  });
  std::cerr << fmt::format("{} records, {} groups\n", ds.size(),
                           ds.group_ids().size());
}

struct CoocOptions {
  std::string taxonomy, data, out;
};

void run_cooc(const CoocOptions& o) {
  const Dataset ds = load_dataset(o.data, Taxonomy::load(o.taxonomy)).originals();
  const CooccurrenceMatrix cooc = cooccurrence(gold_matrix(ds));
  emit(o.out, [&](std::ostream& out) {
    write_cooccurrence_csv(cooc, ds.taxonomy(), out);
  });
}

struct SynthOptions {
  SynthConfig config;
  std::pair<std::size_t, double> augment{0, 0.0};
  std::string out, taxonomy_out;
};

void run_synth(SynthOptions o) {
  o.config.augment_copies = o.augment.first;
  o.config.augment_sigma = o.augment.second;
  const Dataset ds = generate(o.config);
  save_dataset(ds, o.out);
  if (!o.taxonomy_out.empty()) {
    std::ofstream out = open_output(o.taxonomy_out);
    ds.taxonomy().write(out);
  }
}

struct TrainOptions {
  std::string taxonomy, train, model, report, dump_validation;
  std::string features = "fused";
  std::string metric = "micro";
  bool no_sharpen = false;
  bool no_augment = false;
  std::vector<std::size_t> order;
  double l2 = 1.0;
  int max_iterations = 100;
  double tolerance = 1e-4;
  double validation_fraction = 0.1;
  std::uint64_t split_seed = 0;
};

void run_train(const TrainOptions& o) {
  const Dataset ds = load_dataset(o.train, Taxonomy::load(o.taxonomy));
  PipelineConfig config;
  config.mode = parse_feature_mode(o.features);
  config.sharpen = !o.no_sharpen;
  config.augment = !o.no_augment;
  config.order = o.order;
  config.train.l2_strength = o.l2;
  config.train.max_iterations = o.max_iterations;
  config.train.gradient_tolerance = o.tolerance;
  config.validation_fraction = o.validation_fraction;
  config.split_seed = o.split_seed;
  config.tune_metric = parse_f1_average(o.metric);

  const TrainResult result = train_pipeline(ds, config);
  save_model(result.model, o.model);
  if (!o.report.empty()) {
    emit(o.report, [&](std::ostream& out) {
      write_report(result.validation, result.model, out);
    });
  }
  if (!o.dump_validation.empty()) save_dataset(result.validation_split, o.dump_validation);

  int unconverged = 0;
  for (const FitReport& r : result.link_reports) unconverged += r.converged ? 0 : 1;
  if (unconverged > 0) {
    std::cerr << fmt::format(
        "warning: {} of {} links stopped at the iteration limit\n", unconverged,
        result.link_reports.size());
  }
  std::cout << fmt::format(
      "validation groups={} threshold={:.3f} micro_f1={:.6f} macro_f1={:.6f}\n",
      result.validation.num_examples, result.model.settings.threshold->value(),
      result.validation.micro_f1, result.validation.macro_f1);
}

struct TuneOptions {
  std::string taxonomy, data, model, out, metric;
};

void run_tune(const TuneOptions& o) {
  ModelFile model = load_model(o.model);
  if (!o.metric.empty()) model.settings.tune_metric = parse_f1_average(o.metric);
  const Dataset ds = load_dataset(o.data, resolve_taxonomy(o.taxonomy, model));
  const Threshold t = tune_model(model, ds);
  save_model(model, o.out.empty() ? o.model : o.out);
  std::cout << fmt::format("threshold={:.3f}\n", t.value());
}

struct EvalOptions {
  std::string taxonomy, data, model, report;
};

void run_eval(const EvalOptions& o) {
  const ModelFile model = load_model(o.model);
  const Dataset ds = load_dataset(o.data, resolve_taxonomy(o.taxonomy, model));
  if (!ds.originals().fully_labeled()) {
    throw DataError(fmt::format("'{}' is unlabeled; eval needs gold labels", o.data));
  }
  const MetricsReport report = evaluate(model, ds);
  if (!o.report.empty()) {
    emit(o.report, [&](std::ostream& out) { write_report(report, model, out); });
  }
  std::cout << fmt::format("groups={} micro_f1={:.6f} macro_f1={:.6f}\n",
                           report.num_examples, report.micro_f1, report.macro_f1);
}

struct PredictOptions {
  std::string taxonomy, data, model, out;
  std::optional<double> threshold;
};

void run_predict(const PredictOptions& o) {
  const ModelFile model = load_model(o.model);
  const Dataset ds = load_dataset(o.data, resolve_taxonomy(o.taxonomy, model));
  std::optional<Threshold> override;
  if (o.threshold) override = Threshold(*o.threshold);
  const Predictions p = predict(model, ds, override);
  const Taxonomy& taxonomy = model.chain.taxonomy;
  emit(o.out, [&](std::ostream& out) {
    out << "group,labels";
    for (const std::string& name : taxonomy.labels()) out << ',' << csv_field(name);
    out << '\n';
    for (Eigen::Index g = 0; g < p.labels.rows(); ++g) {
      std::string names;
      for (Eigen::Index j = 0; j < p.labels.cols(); ++j) {
        if (p.labels(g, j) == 0) continue;
        if (!names.empty()) names += ';';
        names += taxonomy.name(static_cast<std::size_t>(j));
      }
      out << csv_field(p.scores.groups[static_cast<std::size_t>(g)]) << ','
          << csv_field(names);
      for (Eigen::Index j = 0; j < p.labels.cols(); ++j) {
        out << fmt::format(",{:.17g}", p.scores.probs(g, j));
      }
      out << '\n';
    }
  });
}

// Reads one flat "key = value" file shared by every subcommand: each
// top-level key is offered to all subcommands, and those without a matching
// option ignore it. Values given on the command line take precedence.
class FlatConfig : public CLI::ConfigINI {
 public:
  explicit FlatConfig(std::vector<std::string> subcommands)
      : subcommands_(std::move(subcommands)) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    std::vector<CLI::ConfigItem> items;
    for (CLI::ConfigItem& item : CLI::ConfigINI::from_config(input)) {
      if (!item.parents.empty() || item.name == "++" || item.name == "--") {
        items.push_back(std::move(item));
        continue;
      }
      for (const std::string& sub : subcommands_) {
        CLI::ConfigItem copy = item;
        copy.parents = {sub};
        items.push_back(std::move(copy));
      }
    }
    return items;
  }

 private:
  std::vector<std::string> subcommands_;
};

int run(int argc, char** argv) {
  CLI::App app{"Classifier-chain multi-label toolkit for fused image/text embeddings"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Flat key = value file; command-line flags override it");

  StatsOptions stats;
  auto* stats_cmd = app.add_subcommand("stats", "Per-label counts over original records");
  stats_cmd->add_option("--taxonomy", stats.taxonomy, "Label list, one per line")->required();
  stats_cmd->add_option("--data", stats.data, "Dataset file")->required();
  stats_cmd->add_option("--out", stats.out, "Output CSV (default stdout)");

  CoocOptions cooc;
  auto* cooc_cmd = app.add_subcommand("cooc", "Label co-occurrence probabilities as CSV");
  cooc_cmd->add_option("--taxonomy", cooc.taxonomy, "Label list")->required();
  cooc_cmd->add_option("--data", cooc.data, "Labeled dataset file")->required();
  cooc_cmd->add_option("--out", cooc.out, "Output CSV (default stdout)");

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic labeled dataset");
  synth_cmd->add_option("--out", synth.out, "Dataset file to write")->required();
  synth_cmd->add_option("--taxonomy-out", synth.taxonomy_out, "Also write the label list here");
  synth_cmd->add_option("--n", synth.config.n_examples, "Number of groups")
      ->capture_default_str();
  synth_cmd->add_option("--dim", synth.config.feature_dim, "Embedding dimension")
      ->capture_default_str();
  synth_cmd->add_option("--labels", synth.config.n_labels, "Number of labels")
      ->capture_default_str();
  synth_cmd->add_option("--correlation", synth.config.correlation,
                        "Probability that label k copies label k-1")
      ->capture_default_str();
  synth_cmd->add_option("--noise", synth.config.noise, "Label flip probability")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.config.seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("--augment", synth.augment,
                        "K SIGMA: add K perturbed paraphrase members per group");

  TrainOptions train;
  auto* train_cmd = app.add_subcommand(
      "train", "Train a chain, tune the threshold on a held-out split, write the model");
  train_cmd->add_option("--taxonomy", train.taxonomy, "Label list")->required();
  train_cmd->add_option("--train", train.train, "Labeled training dataset")->required();
  train_cmd->add_option("--model", train.model, "Model file to write")->required();
  train_cmd->add_option("--features", train.features, "fused | image | text")
      ->check(CLI::IsMember({"fused", "image", "text"}))
      ->capture_default_str();
  train_cmd->add_flag("--no-sharpen", train.no_sharpen,
                      "Skip the sigmoid applied to chain probabilities");
  train_cmd->add_flag("--no-augment", train.no_augment,
                      "Ignore paraphrase records and skip group averaging");
  train_cmd->add_option("--order", train.order, "Chain order as label indices")
      ->delimiter(',');
  train_cmd->add_option("--l2", train.l2, "L2 strength on weights")->capture_default_str();
  train_cmd->add_option("--max-iter", train.max_iterations, "Optimizer iteration limit")
      ->capture_default_str();
  train_cmd->add_option("--tol", train.tolerance, "Gradient infinity-norm tolerance")
      ->capture_default_str();
  train_cmd->add_option("--val-fraction", train.validation_fraction,
                        "Fraction of groups held out for threshold tuning")
      ->capture_default_str();
  train_cmd->add_option("--split-seed", train.split_seed, "Seed of the group split")
      ->capture_default_str();
  train_cmd->add_option("--metric", train.metric, "Tuning metric: micro | macro")
      ->check(CLI::IsMember({"micro", "macro"}))
      ->capture_default_str();
  train_cmd->add_option("--report", train.report, "Write the validation metrics report");
  train_cmd->add_option("--dump-validation", train.dump_validation,
                        "Write the held-out split as a dataset file");

  TuneOptions tune;
  auto* tune_cmd = app.add_subcommand("tune", "Re-tune a model's threshold on labeled data");
  tune_cmd->add_option("--model", tune.model, "Model file")->required();
  tune_cmd->add_option("--data", tune.data, "Labeled dataset")->required();
  tune_cmd->add_option("--taxonomy", tune.taxonomy, "Label list (default: the model's)");
  tune_cmd->add_option("--metric", tune.metric, "micro | macro (default: the model's)")
      ->check(CLI::IsMember({"micro", "macro"}));
  tune_cmd->add_option("--out", tune.out, "Model file to write (default: overwrite)");

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Micro/macro-F1 of a model on labeled data");
  eval_cmd->add_option("--model", eval.model, "Model file")->required();
  eval_cmd->add_option("--data", eval.data, "Labeled dataset")->required();
  eval_cmd->add_option("--taxonomy", eval.taxonomy, "Label list (default: the model's)");
  eval_cmd->add_option("--report", eval.report, "Write the metrics report");

  PredictOptions pred;
  auto* pred_cmd = app.add_subcommand("predict", "Per-group label sets and probabilities");
  pred_cmd->add_option("--model", pred.model, "Model file")->required();
  pred_cmd->add_option("--data", pred.data, "Dataset")->required();
  pred_cmd->add_option("--taxonomy", pred.taxonomy, "Label list (default: the model's)");
  pred_cmd->add_option("--out", pred.out, "Output CSV (default stdout)");
  pred_cmd->add_option("--threshold", pred.threshold, "Override the tuned threshold");

  std::vector<std::string> names;
  for (const CLI::App* sub : app.get_subcommands({})) names.push_back(sub->get_name());
  app.config_formatter(std::make_shared<FlatConfig>(std::move(names)));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*stats_cmd) run_stats(stats);
    if (*cooc_cmd) run_cooc(cooc);
    if (*synth_cmd) run_synth(synth);
    if (*train_cmd) run_train(train);
    if (*tune_cmd) run_tune(tune);
    if (*eval_cmd) run_eval(eval);
    if (*pred_cmd) run_predict(pred);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return kOk;
}

}  // namespace
}  // namespace memechain

int main(int argc, char** argv) { return memechain::run(argc, argv); }
