#include "castor/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "castor/error.hpp"
#include "castor/rng.hpp"

namespace castor {

SeriesBatch::SeriesBatch(std::size_t count, std::size_t length)
    : values_(count * length, 0.0), count_{count}, length_{length} {}

SeriesBatch::SeriesBatch(std::vector<double> values, std::size_t length)
    : values_{std::move(values)}, length_{length} {
  if (length_ == 0 || values_.size() % length_ != 0) {
    throw Error{ErrorCode::InvalidDataset, "value count is not a multiple of the series length"};
  }
  count_ = values_.size() / length_;
}

void SeriesBatch::push_back(std::span<const double> series) {
  if (count_ == 0 && length_ == 0) {
    length_ = series.size();
  }
  if (series.size() != length_) {
    throw Error{ErrorCode::SeriesLengthMismatch,
                "expected length " + std::to_string(length_) + ", got " +
                    std::to_string(series.size())};
  }
  values_.insert(values_.end(), series.begin(), series.end());
  ++count_;
}

std::vector<double> first_order_difference(std::span<const double> series) {
  if (series.size() < 3) {
    throw Error{ErrorCode::SeriesTooShort,
                "first-order difference needs at least 3 values, got " +
                    std::to_string(series.size())};
  }
  std::vector<double> out(series.size() - 1);
  for (std::size_t i{0}; i + 1 < series.size(); ++i) {
    out[i] = series[i + 1] - series[i];
  }
  return out;
}

SeriesBatch first_order_difference(const SeriesBatch& batch) {
  if (batch.length() < 3) {
    throw Error{ErrorCode::SeriesTooShort,
                "first-order difference needs at least 3 values, got " +
                    std::to_string(batch.length())};
  }
  SeriesBatch out{batch.size(), batch.length() - 1};
  for (std::size_t i{0}; i < batch.size(); ++i) {
    const auto src{batch[i]};
    auto dst{out[i]};
    for (std::size_t t{0}; t < dst.size(); ++t) {
      dst[t] = src[t + 1] - src[t];
    }
  }
  return out;
}

LabeledDataset::LabeledDataset(SeriesBatch series, std::vector<int> labels,
                               std::vector<std::string> vocabulary)
    : series_{std::move(series)}, labels_{std::move(labels)}, vocabulary_{std::move(vocabulary)} {
  if (series_.size() < 2) {
    throw Error{ErrorCode::InvalidDataset,
                "need at least 2 samples, got " + std::to_string(series_.size())};
  }
  if (series_.length() < 2) {
    throw Error{ErrorCode::InvalidDataset, "series must have at least 2 values"};
  }
  if (labels_.size() != series_.size()) {
    throw Error{ErrorCode::InvalidDataset, "label count does not match sample count"};
  }
  if (vocabulary_.size() < 2) {
    throw Error{ErrorCode::InvalidDataset,
                "need at least 2 classes, got " + std::to_string(vocabulary_.size())};
  }
  for (const int label : labels_) {
    if (label < 0 || static_cast<std::size_t>(label) >= vocabulary_.size()) {
      throw Error{ErrorCode::InvalidDataset, "label index out of vocabulary range"};
    }
  }
  for (const double v : series_.values()) {
    if (!std::isfinite(v)) {
      throw Error{ErrorCode::InvalidDataset, "non-finite value in series"};
    }
  }
  if (series_.length() >= 3) {
    differenced_ = first_order_difference(series_);
  }
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
  SeriesBatch series{indices.size(), series_.length()};
  std::vector<int> labels;
  labels.reserve(indices.size());
  for (std::size_t i{0}; i < indices.size(); ++i) {
    std::ranges::copy(series_[indices[i]], series[i].begin());
    labels.push_back(labels_[indices[i]]);
  }
  // Keep the full vocabulary so class indices stay aligned with the parent.
  LabeledDataset out;
  out.series_ = std::move(series);
  out.labels_ = std::move(labels);
  out.vocabulary_ = vocabulary_;
  if (out.series_.length() >= 3) {
    out.differenced_ = first_order_difference(out.series_);
  }
  return out;
}

LabeledDataset LabeledDataset::with_labels(std::vector<int> labels) const {
  return LabeledDataset{series_, std::move(labels), vocabulary_};
}

namespace {

bool is_separator(char c) { return c == '\t' || c == ',' || c == ' ' || c == '\r'; }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i{0};
  while (i < line.size()) {
    while (i < line.size() && is_separator(line[i])) {
      ++i;
    }
    if (i >= line.size()) {
      break;
    }
    const std::size_t start{i};
    while (i < line.size() && !is_separator(line[i])) {
      ++i;
    }
    fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

}  // namespace

LabeledDataset parse_ucr(std::istream& in, const std::string& source_name) {
  std::vector<double> values;
  std::vector<int> labels;
  std::vector<std::string> vocabulary;
  std::unordered_map<std::string, int> label_index;
  std::size_t length{0};
  std::size_t line_number{0};
  std::string line;

  while (std::getline(in, line)) {
    ++line_number;
    const auto fields{split_fields(line)};
    if (fields.empty() || fields.front().front() == '#') {
      continue;
    }
    const std::size_t m{fields.size() - 1};
    if (length == 0) {
      length = m;
    } else if (m != length) {
      throw Error{ErrorCode::RaggedDataset,
                  source_name + ":" + std::to_string(line_number) + ": expected " +
                      std::to_string(length) + " values, got " + std::to_string(m)};
    }
    const std::string token{fields.front()};
    auto [it, inserted]{label_index.try_emplace(token, static_cast<int>(vocabulary.size()))};
    if (inserted) {
      vocabulary.push_back(token);
    }
    labels.push_back(it->second);

    for (std::size_t f{1}; f < fields.size(); ++f) {
      const auto field{fields[f]};
      double v{0.0};
      const auto [ptr, ec]{std::from_chars(field.data(), field.data() + field.size(), v)};
      if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw Error{ErrorCode::ParseError, source_name + ":" + std::to_string(line_number) +
                                               ": column " + std::to_string(f + 1) +
                                               ": not a number: '" + std::string{field} + "'"};
      }
      if (!std::isfinite(v)) {
        throw Error{ErrorCode::ParseError, source_name + ":" + std::to_string(line_number) +
                                               ": column " + std::to_string(f + 1) +
                                               ": non-finite value"};
      }
      values.push_back(v);
    }
  }
  if (labels.empty() || length == 0) {
    throw Error{ErrorCode::InvalidDataset, source_name + ": no samples"};
  }
  return LabeledDataset{SeriesBatch{std::move(values), length}, std::move(labels),
                        std::move(vocabulary)};
}

LabeledDataset load_ucr_tsv(const std::filesystem::path& path) {
  std::ifstream in{path};
  if (!in) {
    throw Error{ErrorCode::IoError, "cannot open " + path.string()};
  }
  return parse_ucr(in, path.string());
}

void write_ucr(const LabeledDataset& dataset, std::ostream& out) {
  char buffer[64];
  for (std::size_t i{0}; i < dataset.size(); ++i) {
    out << dataset.vocabulary()[static_cast<std::size_t>(dataset.labels()[i])];
    for (const double v : dataset.series()[i]) {
      const auto [ptr, ec]{std::to_chars(buffer, buffer + sizeof buffer, v)};
      out << '\t' << std::string_view{buffer, static_cast<std::size_t>(ptr - buffer)};
    }
    out << '\n';
  }
}

void write_ucr_tsv(const LabeledDataset& dataset, const std::filesystem::path& path) {
  std::ofstream out{path};
  if (!out) {
    throw Error{ErrorCode::IoError, "cannot write " + path.string()};
  }
  write_ucr(dataset, out);
  if (!out) {
    throw Error{ErrorCode::IoError, "write failed for " + path.string()};
  }
}

std::vector<std::size_t> FoldAssignment::train_indices(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i{0}; i < fold_of.size(); ++i) {
    if (fold_of[i] != fold) {
      out.push_back(i);
    }
  }
  return out;
}

std::vector<std::size_t> FoldAssignment::test_indices(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i{0}; i < fold_of.size(); ++i) {
    if (fold_of[i] == fold) {
      out.push_back(i);
    }
  }
  return out;
}

FoldAssignment stratified_kfold(const LabeledDataset& dataset, int folds, std::uint64_t seed) {
  const std::size_t n{dataset.size()};
  if (folds < 2 || static_cast<std::size_t>(folds) > n) {
    throw Error{ErrorCode::InvalidFoldCount,
                "fold count " + std::to_string(folds) + " must be in [2, " + std::to_string(n) +
                    "]"};
  }
  FoldAssignment out;
  out.folds = folds;
  out.fold_of.assign(n, -1);

  std::vector<std::vector<std::size_t>> members(dataset.num_classes());
  for (std::size_t i{0}; i < n; ++i) {
    members[static_cast<std::size_t>(dataset.labels()[i])].push_back(i);
  }
  out.stratified = std::ranges::all_of(members, [&](const auto& m) {
    return m.empty() || m.size() >= static_cast<std::size_t>(folds);
  });

  Rng rng{seed};
  if (!out.stratified) {
    std::vector<std::size_t> order(n);
    for (std::size_t i{0}; i < n; ++i) {
      order[i] = i;
    }
    rng.shuffle(std::span{order});
    for (std::size_t r{0}; r < n; ++r) {
      out.fold_of[order[r]] = static_cast<int>(r % static_cast<std::size_t>(folds));
    }
    return out;
  }

  // Deal each shuffled class round-robin, continuing where the previous class
  // stopped so fold sizes also stay within one of each other.
  std::size_t next_fold{0};
  for (auto& m : members) {
    rng.shuffle(std::span{m});
    for (const std::size_t i : m) {
      out.fold_of[i] = static_cast<int>(next_fold);
      next_fold = (next_fold + 1) % static_cast<std::size_t>(folds);
    }
  }
  return out;
}

}  // namespace castor
