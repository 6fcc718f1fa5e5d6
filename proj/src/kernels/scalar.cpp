#include <cmath>

#include "castor/kernels.hpp"

namespace castor::kernels {
namespace {

template <bool Masked>
void profile_range(const double* shapelet, std::size_t length, const double* windows,
                   const double* mask, const double* scale, std::size_t positions,
                   std::size_t begin, std::size_t end, double* out) {
  for (std::size_t s{begin}; s < end; ++s) {
    double acc{0.0};
    for (std::size_t j{0}; j < length; ++j) {
      const double d{shapelet[j] - windows[j * positions + s]};
      if constexpr (Masked) {
        acc = acc + mask[j * positions + s] * (d * d);
      } else {
        acc = acc + d * d;
      }
    }
    out[s] = scale[s] * std::sqrt(acc);
  }
}

void profile_scalar(const double* shapelet, std::size_t length, const double* windows,
                    const double* mask, const double* scale, std::size_t positions,
                    std::size_t full_begin, std::size_t full_end, double* out) {
  profile_range<true>(shapelet, length, windows, mask, scale, positions, 0, full_begin, out);
  profile_range<false>(shapelet, length, windows, mask, scale, positions, full_begin, full_end,
                       out);
  profile_range<true>(shapelet, length, windows, mask, scale, positions, full_end, positions,
                      out);
}

void extrema_scalar(const double* block, std::size_t rows, std::size_t cols, double* min_value,
                    std::int32_t* argmin, double* max_value, std::int32_t* argmax) {
  for (std::size_t i{0}; i < cols; ++i) {
    double lo{block[i]};
    double hi{block[i]};
    std::int32_t lo_row{0};
    std::int32_t hi_row{0};
    for (std::size_t r{1}; r < rows; ++r) {
      const double v{block[r * cols + i]};
      if (v < lo) {
        lo = v;
        lo_row = static_cast<std::int32_t>(r);
      }
      if (v > hi) {
        hi = v;
        hi_row = static_cast<std::int32_t>(r);
      }
    }
    min_value[i] = lo;
    argmin[i] = lo_row;
    max_value[i] = hi;
    argmax[i] = hi_row;
  }
}

std::int64_t count_below_scalar(const double* values, std::size_t count, double threshold) {
  std::int64_t total{0};
  for (std::size_t i{0}; i < count; ++i) {
    total += values[i] < threshold ? 1 : 0;
  }
  return total;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", &profile_scalar, &extrema_scalar, &count_below_scalar};
  return table;
}

}  // namespace castor::kernels
