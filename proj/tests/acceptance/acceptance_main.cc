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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Reference values come from the independent oracles in
// tests/oracles.cc, never from the library under test.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "memechain/calibrate.h"
#include "memechain/chain.h"
#include "memechain/logreg.h"
#include "memechain/pipeline.h"
#include "memechain/synth.h"
#include "oracles.h"
#include "test_util.h"

namespace memechain {
namespace {

using testing::random_binary;
using testing::random_normal;
using testing::random_uniform;
using testing::read_file;
using testing::TempDir;
using testing::to_labels;
using testing::to_rows;

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<int> to_ints(const Vector& v) {
  std::vector<int> out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(static_cast<int>(v[i]));
  return out;
}

std::vector<int> column(const BinaryMatrix& g, Eigen::Index j) {
  std::vector<int> out;
  for (Eigen::Index n = 0; n < g.rows(); ++n) out.push_back(g(n, j));
  return out;
}

std::vector<double> packed(const LinearModel& m) {
  std::vector<double> p(m.weights.data(), m.weights.data() + m.dim());
  p.push_back(m.intercept);
  return p;
}

bool both_classes(const std::vector<int>& t) {
  const auto ones = std::count(t.begin(), t.end(), 1);
  return ones > 0 && ones < static_cast<long>(t.size());
}

Outcome optimizer_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240601);
  std::bernoulli_distribution coin(0.5);
  double worst_objective = 0.0;
  int problems = 0;
  for (; problems < 24; ++problems) {
    const Eigen::Index n = 2 + problems % 7, m = 1 + problems % 2;
    const Matrix x = random_normal(rng, n, m);
    Vector y(n);
    do {
      for (Eigen::Index i = 0; i < n; ++i) y[i] = coin(rng) ? 1.0 : 0.0;
    } while (!both_classes(to_ints(y)));
    const LinearModel fit = train_binary(x, y, TrainConfig{});
    const auto best = oracle::brute_force_logistic(to_rows(x), to_ints(y), 1.0);
    const double trained =
        oracle::logistic_objective(to_rows(x), to_ints(y), 1.0, packed(fit));
    worst_objective = std::max(worst_objective, std::abs(trained - best.value));
  }

  std::normal_distribution<double> normal;
  double worst_gradient = 0.0;
  for (int point = 0; point < 100; ++point) {
    const Eigen::Index n = 1 + point % 8, m = 1 + point % 2;
    const Matrix x = random_normal(rng, n, m);
    Vector y(n);
    for (Eigen::Index i = 0; i < n; ++i) y[i] = coin(rng) ? 1.0 : 0.0;
    LinearModel at{Vector(m), normal(rng)};
    for (Eigen::Index k = 0; k < m; ++k) at.weights[k] = normal(rng);
    const Vector g = gradient(at, x, y, 1.0);
    const auto fd = oracle::finite_difference_gradient(to_rows(x), to_ints(y), 1.0, packed(at));
    double diff = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < fd.size(); ++i) {
      diff += std::pow(g[static_cast<Eigen::Index>(i)] - fd[i], 2);
      norm += fd[i] * fd[i];
    }
    worst_gradient = std::max(worst_gradient, std::sqrt(diff) / std::max(std::sqrt(norm), 1e-12));
  }
  const double elapsed = seconds_since(start);
  return {worst_objective <= 1e-6 && worst_gradient <= 1e-5 && elapsed < 30.0,
          fmt::format("{} problems, max |objective gap| {:.2e} (<= 1e-6); 100 points, max "
                      "gradient rel. error {:.2e} (<= 1e-5); {:.1f} s (< 30 s)",
                      problems, worst_objective, worst_gradient, elapsed)};
}

Outcome chain_link_oracle() {
  std::mt19937_64 rng(7);
  Matrix x;
  BinaryMatrix gold;
  do {
    x = random_normal(rng, 4, 2);
    gold = random_binary(rng, 4, 2);
  } while (!both_classes(column(gold, 0)) || !both_classes(column(gold, 1)));
  const Taxonomy taxonomy(std::vector<std::string>{"first", "second"});
  const ChainModel chain = train_chain(x, gold, taxonomy_order(2), TrainConfig{}, taxonomy);

  // Link k sees the features plus the gold values of links 0..k-1.
  oracle::Rows inputs = to_rows(x);
  double worst = 0.0;
  for (Eigen::Index k = 0; k < 2; ++k) {
    if (k > 0) {
      for (std::size_t n = 0; n < inputs.size(); ++n) {
        inputs[n].push_back(gold(static_cast<Eigen::Index>(n), k - 1));
      }
    }
    const auto targets = column(gold, k);
    const auto best = k == 0 ? oracle::brute_force_logistic(inputs, targets, 1.0)
                             : oracle::brute_force_logistic(inputs, targets, 1.0, 6.0, 41, 21);
    const double trained = oracle::logistic_objective(
        inputs, targets, 1.0, packed(chain.links[static_cast<std::size_t>(k)]));
    worst = std::max(worst, std::abs(trained - best.value));
  }
  return {worst <= 1e-6,
          fmt::format("4x2 features, 2 labels: max per-link |objective gap| {:.2e} (<= 1e-6)",
                      worst)};
}

Outcome chain_reduction() {
  std::mt19937_64 rng(11);
  long mismatches = 0, compared = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index n = 50, d = 3 + trial % 4, labels = 2 + trial % 4;
    const Matrix x = random_normal(rng, n, d);
    const BinaryMatrix gold = random_binary(rng, n, labels);
    std::vector<std::size_t> order = taxonomy_order(static_cast<std::size_t>(labels));
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::string> names;
    for (Eigen::Index j = 0; j < labels; ++j) names.push_back(fmt::format("l{}", j));
    const ChainModel zeroed = zero_label_inputs(
        train_chain(x, gold, order, TrainConfig{}, Taxonomy(names)));
    const ProbabilityMatrix chained = predict_chain(zeroed, x);
    for (std::size_t k = 0; k < order.size(); ++k) {
      const LinearModel head{zeroed.links[k].weights.head(d), zeroed.links[k].intercept};
      const Vector independent = predict_proba(head, x);
      for (Eigen::Index i = 0; i < n; ++i) {
        ++compared;
        mismatches += chained(i, static_cast<Eigen::Index>(order[k])) != independent[i];
      }
    }
  }
  return {mismatches == 0,
          fmt::format("{} of {} entries differ from independent predict_proba (exact)",
                      mismatches, compared)};
}

Outcome threshold_optimality() {
  std::mt19937_64 rng(13);
  int mismatches = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 3 + trial % 29, labels = 1 + trial % 6;
    const Matrix probs = random_uniform(rng, n, labels);
    const BinaryMatrix gold = random_binary(rng, n, labels, 0.3);
    const bool micro = trial % 2 == 0;
    const Threshold tuned = tune_threshold(ProbabilityMatrix(probs), gold,
                                           micro ? F1Average::kMicro : F1Average::kMacro);
    mismatches += tuned.value() !=
                  oracle::exhaustive_best_threshold(to_rows(probs), to_labels(gold), micro);
  }
  return {mismatches == 0,
          fmt::format("{} of 50 matrices disagree with the exhaustive 181-point search", mismatches)};
}

Outcome metric_correctness() {
  BinaryMatrix gold(2, 2), pred(2, 2);
  gold << 1, 0, 1, 1;
  pred << 1, 1, 0, 1;
  const MetricsReport hand = f1_scores(pred, gold);
  const bool hand_ok = hand.micro_f1 == 2.0 / 3.0 && hand.macro_f1 == 2.0 / 3.0;

  std::mt19937_64 rng(17);
  int mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 1 + trial % 23, labels = 1 + trial % 7;
    const BinaryMatrix g = random_binary(rng, n, labels, 0.3);
    const BinaryMatrix p = random_binary(rng, n, labels, 0.4);
    const MetricsReport r = f1_scores(p, g);
    mismatches += r.micro_f1 != oracle::micro_f1(to_labels(p), to_labels(g)) ||
                  r.macro_f1 != oracle::macro_f1(to_labels(p), to_labels(g));
  }
  return {hand_ok && mismatches == 0,
          fmt::format("hand case micro={:.17g} macro={:.17g} (2/3 exactly: {}); {} of 100 "
                      "random matrices disagree with the pooled recount",
                      hand.micro_f1, hand.macro_f1, hand_ok ? "yes" : "no", mismatches)};
}

Outcome sharpen_commutation() {
  std::mt19937_64 rng(19);
  Matrix values = random_uniform(rng, 500, 8);
  // Include the grid points themselves and the interval ends.
  for (int i = 0; i < Threshold::kGridSize; ++i) {
    values(i, 0) = Threshold::grid_point(i).value();
  }
  values(0, 1) = 1.0;
  const ProbabilityMatrix p(values);
  const ProbabilityMatrix s = sharpen(p);
  int failures = 0;
  for (int i = 0; i < Threshold::kGridSize; ++i) {
    const Threshold t = Threshold::grid_point(i);
    failures += !(apply_threshold(s, Threshold(sigmoid(t.value()))) == apply_threshold(p, t));
  }
  return {failures == 0,
          fmt::format("{} of {} grid thresholds break the commutation (500x8 matrix, exact)",
                      failures, Threshold::kGridSize)};
}

SynthConfig correlated_config(std::uint64_t seed) {
  SynthConfig c;
  c.n_examples = 2000;
  c.feature_dim = 8;
  c.n_labels = 4;
  c.correlation = 0.9;
  c.noise = 0.1;
  c.seed = seed;
  return c;
}

double mean(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

std::string joined(const std::vector<double>& v) {
  std::string out;
  for (double x : v) out += fmt::format("{}{:.4f}", out.empty() ? "" : " ", x);
  return out;
}

// Chain whose links use the features only: one independent model per label.
ChainModel one_vs_rest(const Dataset& train, const ChainModel& shape) {
  const Matrix x = featurize(train, shape.mode);
  const BinaryMatrix gold = gold_matrix(train);
  ChainModel out = shape;
  for (std::size_t k = 0; k < out.links.size(); ++k) {
    const Vector y = gold.col(static_cast<Eigen::Index>(shape.order[k])).cast<double>();
    const LinearModel fit = train_binary(x, y, TrainConfig{});
    out.links[k].weights.setZero();
    out.links[k].weights.head(x.cols()) = fit.weights;
    out.links[k].intercept = fit.intercept;
  }
  return out;
}

std::vector<std::string> info_lines;

Outcome chain_beats_independent() {
  const auto start = Clock::now();
  std::vector<double> chain, zeroed, independent;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    // One seed drives the data, the test split and the validation split.
    const auto [rest, test] = split_train_validation(generate(correlated_config(seed)), 0.25, seed);
    PipelineConfig pipeline;
    pipeline.split_seed = seed;
    const TrainResult r = train_pipeline(rest, pipeline);
    chain.push_back(evaluate(r.model, test).micro_f1);

    ModelFile baseline = r.model;
    baseline.chain = zero_label_inputs(r.model.chain);
    tune_model(baseline, r.validation_split);
    zeroed.push_back(evaluate(baseline, test).micro_f1);

    ModelFile ovr = r.model;
    ovr.chain = one_vs_rest(r.train_split, r.model.chain);
    tune_model(ovr, r.validation_split);
    independent.push_back(evaluate(ovr, test).micro_f1);
  }
  const double elapsed = seconds_since(start);
  const double margin = mean(chain) - mean(zeroed);
  info_lines.push_back(fmt::format(
      "INFO  chain vs separately trained one-vs-rest: chain mean {:.4f}, one-vs-rest mean "
      "{:.4f} [{}] (not gated)",
      mean(chain), mean(independent), joined(independent)));
  return {margin >= 0.01 && elapsed < 120.0,
          fmt::format("mean test micro-F1 chain {:.4f} [{}] vs zeroed-chain {:.4f} [{}]: "
                      "margin {:.4f} (>= 0.01); {:.1f} s (< 120 s)",
                      mean(chain), joined(chain), mean(zeroed), joined(zeroed), margin,
                      elapsed)};
}

Outcome augmentation_averaging() {
  std::vector<double> averaged, unaugmented, single;
  int seeds_behind = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SynthConfig config = correlated_config(seed);
    config.augment_copies = 2;
    config.augment_sigma = 0.3;
    const auto [rest, test] = split_train_validation(generate(config), 0.25, seed);

    PipelineConfig pipeline;
    pipeline.split_seed = seed;
    const TrainResult augmented = train_pipeline(rest, pipeline);
    averaged.push_back(evaluate(augmented.model, test).micro_f1);

    PipelineConfig plain = pipeline;
    plain.augment = false;
    unaugmented.push_back(evaluate(train_pipeline(rest, plain).model, test).micro_f1);
    seeds_behind += averaged.back() < unaugmented.back();

    ModelFile one_member = augmented.model;
    one_member.settings.average_groups = false;
    tune_model(one_member, augmented.validation_split);
    single.push_back(evaluate(one_member, test).micro_f1);
  }
  const bool same_model_ok = mean(averaged) >= mean(single);
  return {seeds_behind == 0 && same_model_ok,
          fmt::format("averaged-group micro-F1 [{}] vs single-member pipeline [{}]: behind on "
                      "{} of 5 seeds; same model scoring one member per group [{}]: mean "
                      "{:.4f} vs averaged {:.4f}",
                      joined(averaged), joined(unaugmented), seeds_behind, joined(single),
                      mean(single), mean(averaged))};
}

int run_cli(const std::string& args, const std::filesystem::path& log) {
  const std::string command = std::string("\"") + MEMECHAIN_CLI + "\" " + args + " >>\"" +
                              log.string() + "\" 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome end_to_end_determinism() {
  const TempDir dir("acceptance");
  const auto log = dir / "log.txt";
  const auto p = [&](const std::string& name) { return (dir / name).string(); };
  if (run_cli("synth --out " + p("data.jsonl") + " --taxonomy-out " + p("tax.txt") +
                  " --n 600 --dim 8 --labels 4 --correlation 0.9 --seed 3 --augment 2 0.3",
              log) != 0) {
    return {false, "synth failed: " + read_file(log)};
  }
  std::ofstream(dir / "train.ini") << "taxonomy = " << p("tax.txt") << "\ntrain = "
                                   << p("data.jsonl") << "\nsplit-seed = 5\n";
  std::vector<std::string> models, train_reports, eval_reports;
  for (int round = 0; round < 2; ++round) {
    const std::string tag = std::to_string(round);
    if (run_cli("train --config " + p("train.ini") + " --model " + p("m" + tag) +
                    " --report " + p("train" + tag) + " --dump-validation " + p("val" + tag),
                log) != 0 ||
        run_cli("eval --model " + p("m" + tag) + " --data " + p("val" + tag) + " --report " +
                    p("eval" + tag),
                log) != 0) {
      return {false, "command failed: " + read_file(log)};
    }
    models.push_back(read_file(dir / ("m" + tag)));
    train_reports.push_back(read_file(dir / ("train" + tag)));
    eval_reports.push_back(read_file(dir / ("eval" + tag)));
  }
  const bool same = !models[0].empty() && models[0] == models[1] &&
                    train_reports[0] == train_reports[1] && eval_reports[0] == eval_reports[1];
  return {same, fmt::format("model files ({} bytes), train reports and eval reports {}",
                            models[0].size(), same ? "byte-identical" : "differ")};
}

}  // namespace
}  // namespace memechain

int main() {
  using namespace memechain;
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {"optimizer-oracle", optimizer_oracle},
      {"chain-per-link-oracle", chain_link_oracle},
      {"chain-reduction-identity", chain_reduction},
      {"threshold-optimality", threshold_optimality},
      {"metric-correctness", metric_correctness},
      {"sharpen-threshold-commutation", sharpen_commutation},
      {"chain-beats-independent", chain_beats_independent},
      {"augmentation-averaging", augmentation_averaging},
      {"end-to-end-determinism", end_to_end_determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome outcome;
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failures += outcome.pass ? 0 : 1;
    fmt::print("{} {}: {}\n", outcome.pass ? "PASS" : "FAIL", c.name, outcome.detail);
    std::fflush(stdout);
  }
  for (const std::string& line : info_lines) fmt::print("{}\n", line);
  fmt::print("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
