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

#include "memechain/calibrate.h"

#include <algorithm>
#include <ostream>
#include <unordered_map>

#include <fmt/format.h>

#include "memechain/error.h"

namespace memechain {
namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

// Mean anchored at the smallest value: exact for identical values and
// independent of input order.
double symmetric_mean(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  const double low = values.front();
  double spread = 0.0;
  for (double v : values) spread += v - low;
  const double mean = low + spread / static_cast<double>(values.size());
  return std::clamp(mean, low, values.back());
}

}  // namespace

Threshold::Threshold(double value) : value_(value) {
  if (!(value >= 0.0 && value <= kMax)) {
    throw DataError(fmt::format("threshold {} outside [0, {}]", value, kMax));
  }
}

Threshold Threshold::grid_point(int i) {
  if (i < 0 || i >= kGridSize) {
    throw DataError(fmt::format("threshold grid index {} out of range", i));
  }
  return Threshold(static_cast<double>(i) / 200.0);
}

std::string_view f1_average_name(F1Average metric) {
  return metric == F1Average::kMicro ? "micro" : "macro";
}

F1Average parse_f1_average(std::string_view name) {
  if (name == "micro") return F1Average::kMicro;
  if (name == "macro") return F1Average::kMacro;
  throw DataError(fmt::format("unknown tuning metric '{}'", name));
}

GroupAverage average_groups(const ProbabilityMatrix& probs,
                            std::span<const std::string> groups) {
  if (probs.rows() == 0) throw DataError("cannot average an empty matrix");
  if (static_cast<std::size_t>(probs.rows()) != groups.size()) {
    throw DataError(fmt::format("{} group ids for {} probability rows",
                                groups.size(), probs.rows()));
  }
  GroupAverage result;
  std::vector<std::vector<Eigen::Index>> members;
  std::unordered_map<std::string_view, std::size_t> slot;
  for (std::size_t n = 0; n < groups.size(); ++n) {
    const auto [it, inserted] = slot.emplace(groups[n], members.size());
    if (inserted) {
      members.emplace_back();
      result.groups.push_back(groups[n]);
    }
    members[it->second].push_back(static_cast<Eigen::Index>(n));
  }
  Matrix averaged(static_cast<Eigen::Index>(members.size()), probs.cols());
  std::vector<double> column;
  for (std::size_t g = 0; g < members.size(); ++g) {
    for (Eigen::Index j = 0; j < probs.cols(); ++j) {
      column.clear();
      for (Eigen::Index n : members[g]) column.push_back(probs(n, j));
      averaged(static_cast<Eigen::Index>(g), j) = symmetric_mean(column);
    }
  }
  result.probs = ProbabilityMatrix(std::move(averaged));
  return result;
}

BinaryMatrix apply_threshold(const ProbabilityMatrix& probs, Threshold threshold) {
  const double t = threshold.value();
  return probs.values()
      .unaryExpr([t](double p) -> std::uint8_t { return p > t ? 1 : 0; });
}

MetricsReport f1_scores(const BinaryMatrix& predicted, const BinaryMatrix& gold) {
  if (predicted.rows() != gold.rows() || predicted.cols() != gold.cols()) {
    throw DataError(fmt::format("prediction shape {}x{} differs from gold {}x{}",
                                predicted.rows(), predicted.cols(), gold.rows(),
                                gold.cols()));
  }
  MetricsReport report;
  report.num_examples = static_cast<std::size_t>(gold.rows());
  report.per_label.resize(static_cast<std::size_t>(gold.cols()));
  std::size_t tp = 0, fp = 0, fn = 0;
  for (Eigen::Index j = 0; j < gold.cols(); ++j) {
    LabelScores& s = report.per_label[static_cast<std::size_t>(j)];
    for (Eigen::Index n = 0; n < gold.rows(); ++n) {
      const bool p = predicted(n, j) != 0;
      const bool g = gold(n, j) != 0;
      s.true_positives += p && g;
      s.false_positives += p && !g;
      s.false_negatives += !p && g;
    }
    s.support = s.true_positives + s.false_negatives;
    s.precision = ratio(s.true_positives, s.true_positives + s.false_positives);
    s.recall = ratio(s.true_positives, s.support);
    s.f1 = ratio(2 * s.true_positives,
                 2 * s.true_positives + s.false_positives + s.false_negatives);
    tp += s.true_positives;
    fp += s.false_positives;
    fn += s.false_negatives;
  }
  report.micro_precision = ratio(tp, tp + fp);
  report.micro_recall = ratio(tp, tp + fn);
  report.micro_f1 = ratio(2 * tp, 2 * tp + fp + fn);
  double f1_sum = 0.0;
  for (const LabelScores& s : report.per_label) f1_sum += s.f1;
  report.macro_f1 =
      report.per_label.empty() ? 0.0 : f1_sum / static_cast<double>(report.per_label.size());
  return report;
}

Threshold tune_threshold(const ProbabilityMatrix& probs, const BinaryMatrix& gold,
                         F1Average metric) {
  if (probs.rows() == 0) throw DataError("cannot tune a threshold on no examples");
  if (probs.rows() != gold.rows() || probs.cols() != gold.cols()) {
    throw DataError("probability and gold matrices differ in shape");
  }
  Threshold best = Threshold::grid_point(0);
  double best_score = -1.0;
  for (int i = 0; i < Threshold::kGridSize; ++i) {
    const Threshold t = Threshold::grid_point(i);
    const double score = f1_scores(apply_threshold(probs, t), gold).score(metric);
    if (score > best_score) {
      best_score = score;
      best = t;
    }
  }
  return best;
}

CooccurrenceMatrix cooccurrence(const BinaryMatrix& gold) {
  if (gold.rows() == 0) throw DataError("co-occurrence needs at least one example");
  const Matrix g = gold.cast<double>();
  CooccurrenceMatrix cooc;
  cooc.values = (g.transpose() * g) / static_cast<double>(gold.rows());
  return cooc;
}

void write_metrics_report(const MetricsReport& report, const Taxonomy& taxonomy,
                          std::ostream& out) {
  if (report.per_label.size() != taxonomy.size()) {
    throw DataError("metrics report does not match the taxonomy");
  }
  out << fmt::format("num_examples={}\n", report.num_examples);
  out << fmt::format("micro_f1={:.17g}\n", report.micro_f1);
  out << fmt::format("macro_f1={:.17g}\n", report.macro_f1);
  out << fmt::format("micro_precision={:.17g}\n", report.micro_precision);
  out << fmt::format("micro_recall={:.17g}\n", report.micro_recall);
  out << fmt::format("num_labels={}\n", taxonomy.size());
  for (std::size_t j = 0; j < taxonomy.size(); ++j) {
    const LabelScores& s = report.per_label[j];
    out << fmt::format("label.{}.name={}\n", j, taxonomy.name(j));
    out << fmt::format("label.{}.precision={:.17g}\n", j, s.precision);
    out << fmt::format("label.{}.recall={:.17g}\n", j, s.recall);
    out << fmt::format("label.{}.f1={:.17g}\n", j, s.f1);
    out << fmt::format("label.{}.support={}\n", j, s.support);
  }
}

void write_cooccurrence_csv(const CooccurrenceMatrix& cooc,
                            const Taxonomy& taxonomy, std::ostream& out) {
  const auto size = static_cast<Eigen::Index>(taxonomy.size());
  if (cooc.values.rows() != size || cooc.values.cols() != size) {
    throw DataError("co-occurrence matrix does not match the taxonomy");
  }
  out << "label";
  for (const std::string& name : taxonomy.labels()) out << ',' << csv_field(name);
  out << '\n';
  for (Eigen::Index i = 0; i < size; ++i) {
    out << csv_field(taxonomy.name(static_cast<std::size_t>(i)));
    for (Eigen::Index j = 0; j < size; ++j) {
      out << fmt::format(",{:.17g}", cooc.values(i, j));
    }
    out << '\n';
  }
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(text);
  }
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace memechain
