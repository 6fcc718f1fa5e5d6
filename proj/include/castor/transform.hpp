#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "castor/dataset.hpp"
#include "castor/params.hpp"

namespace castor {

enum class FeatureKind : std::uint8_t { Min = 0, Max = 1, Occurrence = 2 };

std::string_view to_string(FeatureKind kind);

struct FeatureSlot {
  Representation representation;
  std::size_t group;
  std::size_t exponent;
  FeatureKind kind;
  std::size_t shapelet;

  bool operator==(const FeatureSlot&) const = default;
};

// Column order: representation (original, differenced), then group, then
// exponent, then [k min | k max | k occurrence].
class FeatureLayout {
 public:
  FeatureLayout() = default;
  explicit FeatureLayout(const CastorParams& params);

  std::size_t size() const noexcept { return size_; }
  FeatureSlot slot(std::size_t column) const;
  std::size_t column(const FeatureSlot& slot) const;
  // e.g. "original/g3/e1/min/s7"
  std::string name(std::size_t column) const;

 private:
  struct Block {
    Representation representation;
    std::size_t groups;
    std::size_t exponents;
    std::size_t shapelets;
    std::size_t offset;
  };
  std::vector<Block> blocks_;
  std::size_t size_{0};
};

struct FeatureMatrix {
  std::size_t rows{0};
  std::size_t cols{0};
  std::vector<double> values;  // row-major
  FeatureLayout layout;

  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols)
      : rows{rows}, cols{cols}, values(rows * cols, 0.0) {}

  std::span<double> row(std::size_t i) { return {values.data() + i * cols, cols}; }
  std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
  double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values[i * cols + j]; }
};

// k x o distances of one (group, exponent) against one series; row j is
// shapelet j's profile.
struct GroupProfileBlock {
  std::size_t rows{0};
  std::size_t cols{0};
  std::vector<double> values;

  GroupProfileBlock() = default;
  GroupProfileBlock(std::size_t rows, std::size_t cols)
      : rows{rows}, cols{cols}, values(rows * cols, 0.0) {}

  std::span<const double> row(std::size_t j) const { return {values.data() + j * cols, cols}; }
  std::span<double> row(std::size_t j) { return {values.data() + j * cols, cols}; }
  double operator()(std::size_t j, std::size_t i) const { return values[j * cols + i]; }
  double& operator()(std::size_t j, std::size_t i) { return values[j * cols + i]; }
};

// Shapelet indices below are 0-based. Column argmin/argmax ties go to the
// lowest shapelet index.

// Sum over columns won by `shapelet` under argmin of 1 (hard) or the column minimum (soft).
double min_aggregate(std::size_t shapelet, const GroupProfileBlock& block, CountMode mode);
// Same with argmax and the column maximum.
double max_aggregate(std::size_t shapelet, const GroupProfileBlock& block, CountMode mode);
// Number of columns i with block(shapelet, i) < thresholds[shapelet]; competing
// mode only counts columns the shapelet also wins under argmin.
double occurrence(std::size_t shapelet, const GroupProfileBlock& block,
                  std::span<const double> thresholds, OccurrenceMode mode);

// Profiles of every shapelet of (group, exponent) in `bank` against `series`.
GroupProfileBlock group_profile_block(const RepresentationBank& bank, std::size_t group,
                                      std::size_t exponent, std::span<const double> series);

// Applies fitted parameters to raw series; the differenced representation is
// derived internally. Output is identical for any thread count.
FeatureMatrix transform(const SeriesBatch& series, const CastorParams& params,
                        std::size_t threads = 1);

}  // namespace castor
