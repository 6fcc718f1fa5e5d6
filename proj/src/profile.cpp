#include "castor/profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "castor/error.hpp"
#include "castor/kernels.hpp"

namespace castor {

DilatedShapelet make_shapelet(std::vector<double> values, std::size_t dilation, bool normalized) {
  if (values.size() < 3 || values.size() % 2 == 0) {
    throw Error{ErrorCode::InvalidShapeletLength,
                "shapelet length must be odd and >= 3, got " + std::to_string(values.size())};
  }
  if (dilation == 0) {
    throw Error{ErrorCode::InvalidConfig, "dilation must be positive"};
  }
  if (normalized) {
    znormalize(values);
  }
  return DilatedShapelet{std::move(values), dilation, normalized};
}

std::vector<double> extract_dilated_subsequence(std::span<const double> series,
                                                std::size_t dilation, std::size_t start,
                                                std::size_t length) {
  if (start < 1 || dilation < 1 || length < 1 ||
      start + (length - 1) * dilation > series.size()) {
    throw Error{ErrorCode::SubsequenceOutOfBounds,
                "start " + std::to_string(start) + ", dilation " + std::to_string(dilation) +
                    ", length " + std::to_string(length) + " exceeds series of length " +
                    std::to_string(series.size())};
  }
  std::vector<double> out(length);
  for (std::size_t j{0}; j < length; ++j) {
    out[j] = series[start - 1 + j * dilation];
  }
  return out;
}

std::size_t standard_padding(std::size_t length, std::size_t dilation) {
  if (length % 2 == 0) {
    throw Error{ErrorCode::InvalidShapeletLength,
                "padding symmetry requires an odd shapelet length, got " + std::to_string(length)};
  }
  return effective_length(length, dilation) / 2;
}

std::size_t profile_length(std::size_t series_length, std::size_t length, std::size_t dilation,
                           std::size_t padding) {
  const std::size_t span{effective_length(length, dilation)};
  if (span > series_length + 2 * padding) {
    throw Error{ErrorCode::ShapeletTooLong,
                "effective length " + std::to_string(span) + " exceeds padded series length " +
                    std::to_string(series_length + 2 * padding)};
  }
  return series_length + 2 * padding - span + 1;
}

void znormalize(std::span<double> values) {
  if (values.empty()) {
    return;
  }
  const auto count{static_cast<double>(values.size())};
  double mean{0.0};
  for (const double v : values) {
    mean += v;
  }
  mean /= count;
  double var{0.0};
  for (const double v : values) {
    var += (v - mean) * (v - mean);
  }
  const double std{std::sqrt(var / count)};
  if (std < kMinSpread) {
    std::ranges::fill(values, 0.0);
    return;
  }
  for (double& v : values) {
    v = (v - mean) / std;
  }
}

void WindowMatrix::build(std::span<const double> series, std::size_t length,
                         std::size_t dilation, std::size_t padding, bool normalize) {
  const std::size_t m{series.size()};
  const std::size_t o{profile_length(m, length, dilation, padding)};
  positions_ = o;
  length_ = length;
  dilation_ = dilation;
  normalized_ = normalize;
  values_.assign(length * o, 0.0);
  mask_.assign(length * o, 0.0);
  scale_.resize(o);
  full_begin_ = 0;
  full_end_ = 0;

  std::vector<double> window(length);
  std::vector<std::size_t> slot(length);
  for (std::size_t s{0}; s < o; ++s) {
    std::size_t c{0};
    for (std::size_t j{0}; j < length; ++j) {
      const std::size_t idx{s + j * dilation};
      if (idx >= padding && idx < padding + m) {
        window[c] = series[idx - padding];
        slot[c] = j;
        ++c;
      }
    }
    if (c == 0) {
      throw Error{ErrorCode::InternalPaddingError,
                  "window at position " + std::to_string(s + 1) + " lies entirely in the padding"};
    }
    if (normalize) {
      znormalize(std::span{window}.first(c));
    }
    for (std::size_t q{0}; q < c; ++q) {
      values_[slot[q] * o + s] = window[q];
      mask_[slot[q] * o + s] = 1.0;
    }
    scale_[s] = static_cast<double>(length) / static_cast<double>(c);
    if (c == length) {
      if (full_end_ == 0) {
        full_begin_ = s;
      }
      full_end_ = s + 1;
    }
  }
}

void distance_profile(std::span<const double> shapelet, const WindowMatrix& windows,
                      std::span<double> out) {
  if (shapelet.size() != windows.length() || out.size() != windows.positions()) {
    throw Error{ErrorCode::FeatureDimensionMismatch, "shapelet/window/output size mismatch"};
  }
  kernels::active_table().profile(shapelet.data(), shapelet.size(), windows.values(),
                                  windows.mask(), windows.scale(), windows.positions(),
                                  windows.full_begin(), windows.full_end(), out.data());
}

DistanceProfile distance_profile(const DilatedShapelet& shapelet, std::span<const double> series,
                                 std::size_t padding) {
  WindowMatrix windows;
  windows.build(series, shapelet.length(), shapelet.dilation, padding, shapelet.normalized);
  DistanceProfile out(windows.positions());
  distance_profile(shapelet.values, windows, out);
  return out;
}

}  // namespace castor
