#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace castor {

// A batch of equal-length univariate series stored row-major.
class SeriesBatch {
 public:
  SeriesBatch() = default;
  SeriesBatch(std::size_t count, std::size_t length);
  SeriesBatch(std::vector<double> values, std::size_t length);

  std::size_t size() const noexcept { return count_; }
  std::size_t length() const noexcept { return length_; }
  bool empty() const noexcept { return count_ == 0; }

  std::span<const double> operator[](std::size_t i) const {
    return {values_.data() + i * length_, length_};
  }
  std::span<double> operator[](std::size_t i) {
    return {values_.data() + i * length_, length_};
  }

  void push_back(std::span<const double> series);

  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
  std::size_t count_{0};
  std::size_t length_{0};
};

// T'_i = T_{i+1} - T_i; throws SeriesTooShort when the input has fewer than 3 values.
std::vector<double> first_order_difference(std::span<const double> series);
SeriesBatch first_order_difference(const SeriesBatch& batch);

class LabeledDataset {
 public:
  LabeledDataset() = default;
  // Validates the invariants (n >= 2, >= 2 classes, finite values, m >= 2).
  LabeledDataset(SeriesBatch series, std::vector<int> labels,
                 std::vector<std::string> vocabulary);

  std::size_t size() const noexcept { return series_.size(); }
  std::size_t series_length() const noexcept { return series_.length(); }
  std::size_t num_classes() const noexcept { return vocabulary_.size(); }

  const SeriesBatch& series() const noexcept { return series_; }
  // First-order differences, computed once at construction; empty when m < 3.
  const SeriesBatch& differenced() const noexcept { return differenced_; }
  const std::vector<int>& labels() const noexcept { return labels_; }
  const std::vector<std::string>& vocabulary() const noexcept { return vocabulary_; }

  LabeledDataset subset(std::span<const std::size_t> indices) const;
  LabeledDataset with_labels(std::vector<int> labels) const;

 private:
  SeriesBatch series_;
  SeriesBatch differenced_;
  std::vector<int> labels_;
  std::vector<std::string> vocabulary_;
};

LabeledDataset load_ucr_tsv(const std::filesystem::path& path);
LabeledDataset parse_ucr(std::istream& in, const std::string& source_name = "<stream>");

// Writes one sample per line: label token, then values, tab separated, at
// round-trip precision.
void write_ucr_tsv(const LabeledDataset& dataset, const std::filesystem::path& path);
void write_ucr(const LabeledDataset& dataset, std::ostream& out);

struct FoldAssignment {
  std::vector<int> fold_of;
  int folds{0};
  // Set when some class had fewer members than folds and the split fell back
  // to an unstratified shuffle.
  bool stratified{true};

  std::vector<std::size_t> train_indices(int fold) const;
  std::vector<std::size_t> test_indices(int fold) const;
};

FoldAssignment stratified_kfold(const LabeledDataset& dataset, int folds, std::uint64_t seed);

}  // namespace castor
