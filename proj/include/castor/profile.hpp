#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace castor {

// Windows whose spread falls below this are treated as constant.
inline constexpr double kMinSpread{1e-13};

constexpr std::size_t effective_length(std::size_t length, std::size_t dilation) noexcept {
  return (length - 1) * dilation + 1;
}

struct DilatedShapelet {
  std::vector<double> values;
  std::size_t dilation{1};
  bool normalized{false};

  std::size_t length() const noexcept { return values.size(); }
  std::size_t effective_length() const noexcept {
    return castor::effective_length(values.size(), dilation);
  }
};

// Builds a shapelet, z-normalizing the values when `normalized` is set.
// Throws InvalidShapeletLength unless the length is odd and >= 3.
DilatedShapelet make_shapelet(std::vector<double> values, std::size_t dilation, bool normalized);

using DistanceProfile = std::vector<double>;

// <t_s, t_{s+d}, ..., t_{s+(l-1)d}> with a 1-based start s.
std::vector<double> extract_dilated_subsequence(std::span<const double> series,
                                                std::size_t dilation, std::size_t start,
                                                std::size_t length);

// floor(((l-1)d+1)/2); the profile then has exactly m entries.
std::size_t standard_padding(std::size_t length, std::size_t dilation);

// m + 2p - ((l-1)d+1) + 1
std::size_t profile_length(std::size_t series_length, std::size_t length, std::size_t dilation,
                           std::size_t padding);

// In-place z-normalization with population std; constant input becomes zeros.
void znormalize(std::span<double> values);

// All dilated windows of one padded series, prepared once and shared by every
// shapelet with the same (length, dilation). Row j holds window offset j for
// each start position, so the kernels stream contiguously over positions.
class WindowMatrix {
 public:
  WindowMatrix() = default;

  void build(std::span<const double> series, std::size_t length, std::size_t dilation,
             std::size_t padding, bool normalize);

  std::size_t positions() const noexcept { return positions_; }
  std::size_t length() const noexcept { return length_; }
  std::size_t dilation() const noexcept { return dilation_; }
  bool normalized() const noexcept { return normalized_; }

  const double* values() const noexcept { return values_.data(); }
  const double* mask() const noexcept { return mask_.data(); }
  // l / c for each start position, c being the in-bounds count.
  const double* scale() const noexcept { return scale_.data(); }
  // Positions whose windows lie entirely inside the series.
  std::size_t full_begin() const noexcept { return full_begin_; }
  std::size_t full_end() const noexcept { return full_end_; }

 private:
  std::vector<double> values_;
  std::vector<double> mask_;
  std::vector<double> scale_;
  std::size_t positions_{0};
  std::size_t full_begin_{0};
  std::size_t full_end_{0};
  std::size_t length_{0};
  std::size_t dilation_{0};
  bool normalized_{false};
};

// Fast path: writes windows.positions() distances into `out`.
void distance_profile(std::span<const double> shapelet, const WindowMatrix& windows,
                      std::span<double> out);

// Padded, dilated, boundary-scaled profile of `shapelet` against `series`.
// Windows are z-normalized over their in-bounds values when shapelet.normalized.
DistanceProfile distance_profile(const DilatedShapelet& shapelet, std::span<const double> series,
                                 std::size_t padding);

}  // namespace castor
