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

#include "memechain/model_file.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include <fmt/format.h>

#include "memechain/error.h"

namespace memechain {
namespace {

constexpr std::string_view kMagic = "memechain-model";

std::vector<std::string_view> split_words(std::string_view text) {
  std::vector<std::string_view> words;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto start = text.find_first_not_of(' ', pos);
    if (start == std::string_view::npos) break;
    const auto end = std::min(text.find(' ', start), text.size());
    words.push_back(text.substr(start, end - start));
    pos = end;
  }
  return words;
}

// Sequential reader over "key value" lines.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Returns the text after `key ` on the next line.
  std::string expect(std::string_view key) {
    if (!std::getline(in_, line_)) {
      throw DataError(fmt::format("unexpected end of model file, expected '{}'", key));
    }
    ++line_no_;
    if (!line_.empty() && line_.back() == '\r') line_.pop_back();
    const std::string_view view = line_;
    if (view == key) return {};
    if (view.size() <= key.size() || view.substr(0, key.size()) != key ||
        view[key.size()] != ' ') {
      fail(fmt::format("expected '{}'", key));
    }
    return std::string(view.substr(key.size() + 1));
  }

  [[noreturn]] void fail(std::string_view what) const {
    throw DataError(fmt::format("model file line {}: {}", line_no_, what));
  }

  double real(std::string_view text) const {
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() ||
        !std::isfinite(value)) {
      fail(fmt::format("'{}' is not a finite number", text));
    }
    return value;
  }

  std::size_t count(std::string_view text) const {
    std::size_t value = 0;
    const auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      fail(fmt::format("'{}' is not a non-negative integer", text));
    }
    return value;
  }

  bool flag(std::string_view text) const {
    if (text == "1") return true;
    if (text == "0") return false;
    fail(fmt::format("'{}' is not 0 or 1", text));
  }

  template <typename Parse>
  auto convert(Parse parse, const std::string& text) const {
    try {
      return parse(text);
    } catch (const DataError& e) {
      fail(e.what());
    }
  }

 private:
  std::istream& in_;
  std::string line_;
  std::size_t line_no_ = 0;
};

}  // namespace

void write_model(const ModelFile& model, std::ostream& out) {
  const ChainModel& chain = model.chain;
  chain.validate();
  out << kMagic << ' ' << kModelFormatVersion << '\n';
  out << "num_labels " << chain.taxonomy.size() << '\n';
  for (const std::string& name : chain.taxonomy.labels()) {
    out << "label " << name << '\n';
  }
  out << "feature_dim " << chain.feature_dim << '\n';
  out << "feature_mode " << feature_mode_name(chain.mode) << '\n';
  out << "order";
  for (std::size_t label : chain.order) out << ' ' << label;
  out << '\n';
  const InferenceSettings& s = model.settings;
  out << "sharpen " << (s.sharpen ? 1 : 0) << '\n';
  out << "sharpen_stage before_average\n";
  out << "average_groups " << (s.average_groups ? 1 : 0) << '\n';
  out << "threshold_stage after_average\n";
  out << "tune_metric " << f1_average_name(s.tune_metric) << '\n';
  if (s.threshold) {
    out << fmt::format("threshold {:.17g}\n", s.threshold->value());
  } else {
    out << "threshold none\n";
  }
  for (std::size_t k = 0; k < chain.links.size(); ++k) {
    const LinearModel& link = chain.links[k];
    out << fmt::format("link {} label {} inputs {}\n", k, chain.order[k], link.dim());
    out << fmt::format("intercept {:.17g}\n", link.intercept);
    out << "weights";
    for (Eigen::Index i = 0; i < link.dim(); ++i) {
      out << fmt::format(" {:.17g}", link.weights[i]);
    }
    out << '\n';
  }
  out << "end\n";
}

ModelFile read_model(std::istream& in) {
  LineReader reader(in);
  const std::string version = reader.expect(kMagic);
  if (reader.count(version) != static_cast<std::size_t>(kModelFormatVersion)) {
    reader.fail(fmt::format("unsupported model format version {}", version));
  }
  ModelFile model;
  ChainModel& chain = model.chain;
  const std::size_t num_labels = reader.count(reader.expect("num_labels"));
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < num_labels; ++j) labels.push_back(reader.expect("label"));
  chain.taxonomy = reader.convert(
      [&](const std::string&) { return Taxonomy(labels); }, std::string());
  chain.feature_dim = reader.count(reader.expect("feature_dim"));
  chain.mode = reader.convert(
      [](const std::string& t) { return parse_feature_mode(t); },
      reader.expect("feature_mode"));
  const std::string order_line = reader.expect("order");
  for (std::string_view word : split_words(order_line)) {
    chain.order.push_back(reader.count(word));
  }
  reader.convert(
      [&](const std::string&) {
        check_permutation(chain.order, num_labels);
        return 0;
      },
      std::string());

  InferenceSettings& s = model.settings;
  s.sharpen = reader.flag(reader.expect("sharpen"));
  if (reader.expect("sharpen_stage") != "before_average") {
    reader.fail("unsupported sharpen stage");
  }
  s.average_groups = reader.flag(reader.expect("average_groups"));
  if (reader.expect("threshold_stage") != "after_average") {
    reader.fail("unsupported threshold stage");
  }
  s.tune_metric = reader.convert(
      [](const std::string& t) { return parse_f1_average(t); },
      reader.expect("tune_metric"));
  const std::string threshold = reader.expect("threshold");
  if (threshold != "none") {
    s.threshold = reader.convert(
        [&](const std::string& t) { return Threshold(reader.real(t)); }, threshold);
  }

  for (std::size_t k = 0; k < num_labels; ++k) {
    const std::string header_line = reader.expect("link");
    const auto header = split_words(header_line);
    if (header.size() != 5 || header[1] != "label" || header[3] != "inputs" ||
        reader.count(header[0]) != k) {
      reader.fail(fmt::format("malformed header for link {}", k));
    }
    if (k >= chain.order.size() || reader.count(header[2]) != chain.order[k]) {
      reader.fail(fmt::format("link {} target disagrees with the chain order", k));
    }
    const std::size_t inputs = reader.count(header[4]);
    if (inputs != chain.feature_dim + k) {
      reader.fail(fmt::format("link {} has {} inputs, expected {}", k, inputs,
                              chain.feature_dim + k));
    }
    LinearModel link;
    link.intercept = reader.real(reader.expect("intercept"));
    const std::string weights_line = reader.expect("weights");
    const auto words = split_words(weights_line);
    if (words.size() != inputs) {
      reader.fail(fmt::format("link {} lists {} weights, header says {}", k,
                              words.size(), inputs));
    }
    link.weights.resize(static_cast<Eigen::Index>(inputs));
    for (std::size_t i = 0; i < inputs; ++i) {
      link.weights[static_cast<Eigen::Index>(i)] = reader.real(words[i]);
    }
    chain.links.push_back(std::move(link));
  }
  reader.expect("end");
  reader.convert(
      [&](const std::string&) {
        chain.validate();
        return 0;
      },
      std::string());
  return model;
}

void save_model(const ModelFile& model, const std::filesystem::path& path) {
  std::ostringstream buffer;
  write_model(model, buffer);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError(fmt::format("cannot write model file '{}'", path.string()));
  }
  out << buffer.str();
  if (!out) throw DataError(fmt::format("write failed for '{}'", path.string()));
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError(fmt::format("cannot open model file '{}'", path.string()));
  }
  try {
    return read_model(in);
  } catch (const DataError& e) {
    throw DataError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace memechain
