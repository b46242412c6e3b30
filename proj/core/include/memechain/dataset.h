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

#ifndef MEMECHAIN_DATASET_H_
#define MEMECHAIN_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "memechain/matrix.h"

namespace memechain {

// Ordered set of label names. A label's index is its position in the list
// and never changes for the life of a model.
class Taxonomy {
 public:
  Taxonomy() = default;
  // Throws DataError on an empty list, an empty name or a duplicate name.
  explicit Taxonomy(std::vector<std::string> labels);

  // One label name per line. Blank lines are ignored, surrounding
  // whitespace is trimmed.
  static Taxonomy parse(std::istream& in);
  static Taxonomy load(const std::filesystem::path& path);
  void write(std::ostream& out) const;

  std::size_t size() const { return labels_.size(); }
  const std::string& name(std::size_t index) const { return labels_.at(index); }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<std::size_t> find(std::string_view name) const;

  bool operator==(const Taxonomy& other) const {
    return labels_ == other.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

// The 22 persuasion techniques of the SemEval-2021 Task 6 meme corpus,
// ordered by training-set frequency. Also shipped as data/taxonomy.txt.
Taxonomy persuasion_taxonomy();

enum class Origin { kOriginal, kParaphrase };

std::string_view origin_name(Origin origin);

struct Example {
  std::string id;
  // Shared by an original and its paraphrases.
  std::string group;
  std::vector<double> image_embedding;
  std::vector<double> text_embedding;
  Origin origin = Origin::kOriginal;
  // Sorted taxonomy indices; absent for unlabeled records, possibly empty.
  std::optional<std::vector<std::size_t>> gold;

  bool operator==(const Example&) const = default;
};

// Immutable collection of examples over one taxonomy.
//
// Invariants checked on construction (DataError otherwise):
//   - every example has equal image and text dimensions, shared by all
//     examples, and only finite embedding values;
//   - ids are non-empty and unique, groups are non-empty;
//   - gold indices are in range, sorted and unique;
//   - every group has exactly one original.
class Dataset {
 public:
  Dataset() = default;
  Dataset(Taxonomy taxonomy, std::vector<Example> examples);

  const Taxonomy& taxonomy() const { return taxonomy_; }
  std::span<const Example> examples() const { return examples_; }
  const Example& operator[](std::size_t i) const { return examples_[i]; }
  std::size_t size() const { return examples_.size(); }
  bool empty() const { return examples_.empty(); }

  // Common embedding dimension; 0 for an empty dataset.
  std::size_t embedding_dim() const { return dim_; }

  // True when every example carries gold labels.
  bool fully_labeled() const;

  // Distinct group ids in order of first appearance.
  std::vector<std::string> group_ids() const;

  // Copy holding only the examples for which `keep` returns true.
  template <typename Pred>
  Dataset filter(Pred keep) const {
    std::vector<Example> kept;
    for (const Example& e : examples_) {
      if (keep(e)) kept.push_back(e);
    }
    return Dataset(taxonomy_, std::move(kept));
  }

  // Only origin=original records.
  Dataset originals() const;

  bool operator==(const Dataset& other) const {
    return taxonomy_ == other.taxonomy_ && examples_ == other.examples_;
  }

 private:
  Taxonomy taxonomy_;
  std::vector<Example> examples_;
  std::size_t dim_ = 0;
};

// Reads the line-delimited dataset format: one flat JSON object per line
// with keys id, group, origin, image_embedding, text_embedding and the
// optional labels array of label names. Errors carry the 1-based line.
Dataset parse_dataset(std::istream& in, const Taxonomy& taxonomy);
Dataset load_dataset(const std::filesystem::path& path,
                     const Taxonomy& taxonomy);

// Writes one record per line. Embeddings round-trip bit-exactly.
void serialize_dataset(const Dataset& ds, std::ostream& out);
void save_dataset(const Dataset& ds, const std::filesystem::path& path);

// Group-aware split. The validation side receives ceil(fraction * #groups)
// whole groups picked by a seeded shuffle; both sides keep dataset order.
// Returns {train, validation}.
std::pair<Dataset, Dataset> split_train_validation(const Dataset& ds,
                                                   double fraction,
                                                   std::uint64_t seed);

// Per-label support over origin=original examples.
std::vector<std::size_t> label_counts(const Dataset& ds);

// N x L indicator matrix of gold labels, rows in dataset order.
BinaryMatrix gold_matrix(const Dataset& ds);

}  // namespace memechain

#endif  // MEMECHAIN_DATASET_H_
