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

#include "memechain/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <unordered_set>

#include <fmt/format.h>

#include "json.hpp"
#include "memechain/error.h"

namespace memechain {
namespace {

using Json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Unbiased draw from [0, bound) on top of the standardized mt19937_64
// stream, so splits are identical across standard libraries.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

std::vector<double> read_embedding(const Json& record, const char* key) {
  const auto it = record.find(key);
  if (it == record.end()) {
    throw DataError(fmt::format("missing key '{}'", key));
  }
  if (!it->is_array()) {
    throw DataError(fmt::format("'{}' must be an array of numbers", key));
  }
  std::vector<double> values;
  values.reserve(it->size());
  for (const Json& v : *it) {
    if (!v.is_number()) {
      throw DataError(fmt::format("'{}' must be an array of numbers", key));
    }
    values.push_back(v.get<double>());
  }
  return values;
}

std::string read_string(const Json& record, const char* key) {
  const auto it = record.find(key);
  if (it == record.end()) {
    throw DataError(fmt::format("missing key '{}'", key));
  }
  if (!it->is_string()) {
    throw DataError(fmt::format("'{}' must be a string", key));
  }
  return it->get<std::string>();
}

Example read_record(const Json& record, const Taxonomy& taxonomy) {
  if (!record.is_object()) throw DataError("record is not a JSON object");
  for (const auto& [key, value] : record.items()) {
    if (key != "id" && key != "group" && key != "origin" &&
        key != "image_embedding" && key != "text_embedding" &&
        key != "labels") {
      throw DataError(fmt::format("unexpected key '{}'", key));
    }
  }
  Example e;
  e.id = read_string(record, "id");
  e.group = read_string(record, "group");
  const std::string origin = read_string(record, "origin");
  if (origin == "original") {
    e.origin = Origin::kOriginal;
  } else if (origin == "paraphrase") {
    e.origin = Origin::kParaphrase;
  } else {
    throw DataError(fmt::format("unknown origin '{}'", origin));
  }
  e.image_embedding = read_embedding(record, "image_embedding");
  e.text_embedding = read_embedding(record, "text_embedding");
  if (e.image_embedding.size() != e.text_embedding.size()) {
    throw DataError(fmt::format(
        "dimension mismatch: image embedding has {} values, text embedding {}",
        e.image_embedding.size(), e.text_embedding.size()));
  }
  if (const auto it = record.find("labels"); it != record.end()) {
    if (!it->is_array()) throw DataError("'labels' must be an array");
    std::vector<std::size_t> gold;
    for (const Json& name : *it) {
      if (!name.is_string()) throw DataError("label names must be strings");
      const auto idx = taxonomy.find(name.get<std::string>());
      if (!idx) {
        throw DataError(
            fmt::format("unknown label '{}'", name.get<std::string>()));
      }
      gold.push_back(*idx);
    }
    std::sort(gold.begin(), gold.end());
    if (std::adjacent_find(gold.begin(), gold.end()) != gold.end()) {
      throw DataError("duplicate label in record");
    }
    e.gold = std::move(gold);
  }
  return e;
}

}  // namespace

Taxonomy::Taxonomy(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  if (labels_.empty()) throw DataError("taxonomy has no labels");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) throw DataError("taxonomy has an empty label name");
    if (!index_.emplace(labels_[i], i).second) {
      throw DataError(fmt::format("duplicate label '{}'", labels_[i]));
    }
  }
}

Taxonomy Taxonomy::parse(std::istream& in) {
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view name = trim(line);
    if (!name.empty()) labels.emplace_back(name);
  }
  return Taxonomy(std::move(labels));
}

Taxonomy Taxonomy::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError(fmt::format("cannot open taxonomy file '{}'", path.string()));
  }
  try {
    return parse(in);
  } catch (const DataError& e) {
    throw DataError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void Taxonomy::write(std::ostream& out) const {
  for (const std::string& label : labels_) out << label << '\n';
}

std::optional<std::size_t> Taxonomy::find(std::string_view name) const {
  const auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Taxonomy persuasion_taxonomy() {
  return Taxonomy({
      "Smears",
      "Loaded Language",
      "Name calling/Labeling",
      "Glittering generalities (Virtue)",
      "Appeal to (Strong) Emotions",
      "Appeal to fear/prejudice",
      "Exaggeration/Minimisation",
      "Transfer",
      "Slogans",
      "Doubt",
      "Flag-waving",
      "Causal Oversimplification",
      "Misrepresentation of Someone's Position",
      "Whataboutism",
      "Black-and-white Fallacy/Dictatorship",
      "Thought-terminating cliché",
      "Reductio ad hitlerum",
      "Appeal to authority",
      "Repetition",
      "Obfuscation, Intentional vagueness, Confusion",
      "Bandwagon",
      "Presenting Irrelevant Data (Red Herring)",
  });
}

std::string_view origin_name(Origin origin) {
  return origin == Origin::kOriginal ? "original" : "paraphrase";
}

Dataset::Dataset(Taxonomy taxonomy, std::vector<Example> examples)
    : taxonomy_(std::move(taxonomy)), examples_(std::move(examples)) {
  std::unordered_set<std::string_view> ids;
  std::unordered_map<std::string_view, int> originals;
  for (std::size_t n = 0; n < examples_.size(); ++n) {
    const Example& e = examples_[n];
    if (e.id.empty()) throw DataError(fmt::format("example {} has an empty id", n));
    if (e.group.empty()) {
      throw DataError(fmt::format("example '{}' has an empty group", e.id));
    }
    if (!ids.insert(e.id).second) {
      throw DataError(fmt::format("duplicate id '{}'", e.id));
    }
    if (e.image_embedding.size() != e.text_embedding.size()) {
      throw DataError(fmt::format(
          "example '{}': dimension mismatch between image ({}) and text ({})",
          e.id, e.image_embedding.size(), e.text_embedding.size()));
    }
    if (n == 0) {
      dim_ = e.image_embedding.size();
    } else if (e.image_embedding.size() != dim_) {
      throw DataError(fmt::format(
          "example '{}': embedding dimension {} differs from dataset dimension {}",
          e.id, e.image_embedding.size(), dim_));
    }
    for (const auto* emb : {&e.image_embedding, &e.text_embedding}) {
      for (double v : *emb) {
        if (!std::isfinite(v)) {
          throw DataError(
              fmt::format("example '{}': non-finite embedding value", e.id));
        }
      }
    }
    if (e.gold) {
      const auto& g = *e.gold;
      for (std::size_t k = 0; k < g.size(); ++k) {
        if (g[k] >= taxonomy_.size()) {
          throw DataError(fmt::format(
              "example '{}': label index {} outside taxonomy", e.id, g[k]));
        }
        if (k > 0 && g[k - 1] >= g[k]) {
          throw DataError(fmt::format(
              "example '{}': gold indices must be sorted and unique", e.id));
        }
      }
    }
    int& count = originals[e.group];
    if (e.origin == Origin::kOriginal) ++count;
  }
  for (const auto& [group, count] : originals) {
    if (count != 1) {
      throw DataError(fmt::format("group '{}' has {} original records, expected 1",
                                  group, count));
    }
  }
}

bool Dataset::fully_labeled() const {
  return std::all_of(examples_.begin(), examples_.end(),
                     [](const Example& e) { return e.gold.has_value(); });
}

std::vector<std::string> Dataset::group_ids() const {
  std::vector<std::string> groups;
  std::unordered_set<std::string_view> seen;
  for (const Example& e : examples_) {
    if (seen.insert(e.group).second) groups.push_back(e.group);
  }
  return groups;
}

Dataset Dataset::originals() const {
  return filter([](const Example& e) { return e.origin == Origin::kOriginal; });
}

Dataset parse_dataset(std::istream& in, const Taxonomy& taxonomy) {
  std::vector<Example> examples;
  std::unordered_set<std::string> ids;
  std::optional<std::size_t> dim;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      Json record;
      try {
        record = Json::parse(line);
      } catch (const Json::parse_error& e) {
        throw DataError(fmt::format("malformed record: {}", e.what()));
      }
      Example e = read_record(record, taxonomy);
      if (!ids.insert(e.id).second) {
        throw DataError(fmt::format("duplicate id '{}'", e.id));
      }
      if (!dim) {
        dim = e.image_embedding.size();
      } else if (*dim != e.image_embedding.size()) {
        throw DataError(fmt::format(
            "dimension mismatch: embedding dimension {} differs from {} on earlier lines",
            e.image_embedding.size(), *dim));
      }
      examples.push_back(std::move(e));
    } catch (const DataError& e) {
      throw DataError(fmt::format("line {}: {}", line_no, e.what()));
    }
  }
  if (in.bad()) throw DataError("read error while parsing dataset");
  return Dataset(taxonomy, std::move(examples));
}

Dataset load_dataset(const std::filesystem::path& path,
                     const Taxonomy& taxonomy) {
  std::ifstream in(path);
  if (!in) {
    throw DataError(fmt::format("cannot open dataset file '{}'", path.string()));
  }
  try {
    return parse_dataset(in, taxonomy);
  } catch (const DataError& e) {
    throw DataError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void serialize_dataset(const Dataset& ds, std::ostream& out) {
  for (const Example& e : ds.examples()) {
    Json record;
    record["id"] = e.id;
    record["group"] = e.group;
    record["origin"] = origin_name(e.origin);
    record["image_embedding"] = e.image_embedding;
    record["text_embedding"] = e.text_embedding;
    if (e.gold) {
      Json labels = Json::array();
      for (std::size_t j : *e.gold) labels.push_back(ds.taxonomy().name(j));
      record["labels"] = std::move(labels);
    }
    out << record.dump() << '\n';
  }
}

void save_dataset(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw DataError(fmt::format("cannot write dataset file '{}'", path.string()));
  }
  serialize_dataset(ds, out);
  if (!out) {
    throw DataError(fmt::format("write failed for '{}'", path.string()));
  }
}

std::pair<Dataset, Dataset> split_train_validation(const Dataset& ds,
                                                   double fraction,
                                                   std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw DataError(fmt::format("split fraction {} outside (0, 1)", fraction));
  }
  std::vector<std::string> groups = ds.group_ids();
  if (groups.size() < 2) {
    throw DataError(fmt::format("cannot split {} group(s); need at least 2",
                                groups.size()));
  }
  std::mt19937_64 rng(seed);
  for (std::size_t i = groups.size() - 1; i > 0; --i) {
    std::swap(groups[i], groups[draw_below(rng, i + 1)]);
  }
  // The epsilon absorbs representation error in products like 0.1 * 290.
  auto n_val = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(groups.size()) - 1e-9));
  n_val = std::clamp<std::size_t>(n_val, 1, groups.size() - 1);
  const std::unordered_set<std::string_view> validation(
      groups.begin(), groups.begin() + static_cast<std::ptrdiff_t>(n_val));
  return {
      ds.filter([&](const Example& e) { return !validation.contains(e.group); }),
      ds.filter([&](const Example& e) { return validation.contains(e.group); }),
  };
}

std::vector<std::size_t> label_counts(const Dataset& ds) {
  std::vector<std::size_t> counts(ds.taxonomy().size(), 0);
  for (const Example& e : ds.examples()) {
    if (e.origin != Origin::kOriginal) continue;
    if (!e.gold) {
      throw DataError(fmt::format("example '{}' has no gold labels", e.id));
    }
    for (std::size_t j : *e.gold) ++counts[j];
  }
  return counts;
}

BinaryMatrix gold_matrix(const Dataset& ds) {
  BinaryMatrix gold = BinaryMatrix::Zero(static_cast<Eigen::Index>(ds.size()),
                                         static_cast<Eigen::Index>(ds.taxonomy().size()));
  for (std::size_t n = 0; n < ds.size(); ++n) {
    const Example& e = ds[n];
    if (!e.gold) {
      throw DataError(fmt::format("example '{}' has no gold labels", e.id));
    }
    for (std::size_t j : *e.gold) {
      gold(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(j)) = 1;
    }
  }
  return gold;
}

}  // namespace memechain
