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

#ifndef MEMECHAIN_CALIBRATE_H_
#define MEMECHAIN_CALIBRATE_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "memechain/chain.h"
#include "memechain/dataset.h"
#include "memechain/matrix.h"

namespace memechain {

// Global decision threshold, restricted to the tuning range [0, 0.9].
class Threshold {
 public:
  static constexpr double kMax = 0.9;
  // Candidates 0.000, 0.005, ..., 0.900.
  static constexpr int kGridSize = 181;

  // Throws DataError outside [0, kMax].
  explicit Threshold(double value);

  // i-th grid candidate, i / 200 rounded once.
  static Threshold grid_point(int i);

  double value() const { return value_; }
  bool operator==(const Threshold&) const = default;

 private:
  double value_;
};

enum class F1Average { kMicro, kMacro };

std::string_view f1_average_name(F1Average metric);
// Accepts "micro" and "macro".
F1Average parse_f1_average(std::string_view name);

struct LabelScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
};

struct MetricsReport {
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  double micro_precision = 0.0;
  double micro_recall = 0.0;
  std::size_t num_examples = 0;
  std::vector<LabelScores> per_label;

  double score(F1Average metric) const {
    return metric == F1Average::kMicro ? micro_f1 : macro_f1;
  }
};

// Symmetric L x L matrix of joint label frequencies; the diagonal holds the
// marginals.
struct CooccurrenceMatrix {
  Matrix values;
};

struct GroupAverage {
  ProbabilityMatrix probs;
  // One id per output row, in order of first appearance.
  std::vector<std::string> groups;
};

// Mean row per group. The result does not depend on the order of rows
// within a group and a group of identical rows maps to that exact row.
GroupAverage average_groups(const ProbabilityMatrix& probs,
                            std::span<const std::string> groups);

// out(n, j) = 1 iff probs(n, j) > threshold.
BinaryMatrix apply_threshold(const ProbabilityMatrix& probs, Threshold threshold);

// Micro-F1 pools TP/FP/FN over every cell; macro-F1 averages per-label F1
// over all labels. Any ratio with a zero denominator is 0.
MetricsReport f1_scores(const BinaryMatrix& predicted, const BinaryMatrix& gold);

// Exhaustive search over the 181 grid thresholds. Ties go to the smallest
// threshold.
Threshold tune_threshold(const ProbabilityMatrix& probs, const BinaryMatrix& gold,
                         F1Average metric = F1Average::kMicro);

CooccurrenceMatrix cooccurrence(const BinaryMatrix& gold);

// Flat key=value lines; reals are printed with 17 significant digits.
void write_metrics_report(const MetricsReport& report, const Taxonomy& taxonomy,
                          std::ostream& out);

// CSV with a header row of label names and the label name in the first
// column of every row.
void write_cooccurrence_csv(const CooccurrenceMatrix& cooc,
                            const Taxonomy& taxonomy, std::ostream& out);

// Quotes a CSV field when it contains a comma, a quote or a line break.
std::string csv_field(std::string_view text);

}  // namespace memechain

#endif  // MEMECHAIN_CALIBRATE_H_
