#include <arm_neon.h>

#include <cmath>

#include "castor/kernels.hpp"

namespace castor::kernels::detail {
namespace {

constexpr std::size_t kLanes{2};

template <bool Masked>
inline float64x2_t accumulate(float64x2_t acc, float64x2_t shapelet_value, const double* windows,
                              const double* mask) {
  const float64x2_t d{vsubq_f64(shapelet_value, vld1q_f64(windows))};
  if constexpr (Masked) {
    return vaddq_f64(acc, vmulq_f64(vld1q_f64(mask), vmulq_f64(d, d)));
  } else {
    return vaddq_f64(acc, vmulq_f64(d, d));
  }
}

template <bool Masked>
void profile_range(const double* shapelet, std::size_t length, const double* windows,
                   const double* mask, const double* scale, std::size_t positions,
                   std::size_t begin, std::size_t end, double* out) {
  std::size_t s{begin};
  for (; s + 2 * kLanes <= end; s += 2 * kLanes) {
    float64x2_t a0{vdupq_n_f64(0.0)};
    float64x2_t a1{vdupq_n_f64(0.0)};
    for (std::size_t j{0}; j < length; ++j) {
      const float64x2_t v{vdupq_n_f64(shapelet[j])};
      const double* w{windows + j * positions + s};
      const double* m{mask + j * positions + s};
      a0 = accumulate<Masked>(a0, v, w, m);
      a1 = accumulate<Masked>(a1, v, w + kLanes, m + kLanes);
    }
    vst1q_f64(out + s, vmulq_f64(vld1q_f64(scale + s), vsqrtq_f64(a0)));
    vst1q_f64(out + s + kLanes, vmulq_f64(vld1q_f64(scale + s + kLanes), vsqrtq_f64(a1)));
  }
  for (; s < end; ++s) {
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

void profile_neon(const double* shapelet, std::size_t length, const double* windows,
                  const double* mask, const double* scale, std::size_t positions,
                  std::size_t full_begin, std::size_t full_end, double* out) {
  profile_range<true>(shapelet, length, windows, mask, scale, positions, 0, full_begin, out);
  profile_range<false>(shapelet, length, windows, mask, scale, positions, full_begin, full_end,
                       out);
  profile_range<true>(shapelet, length, windows, mask, scale, positions, full_end, positions,
                      out);
}

void extrema_neon(const double* block, std::size_t rows, std::size_t cols, double* min_value,
                  std::int32_t* argmin, double* max_value, std::int32_t* argmax) {
  std::size_t i{0};
  for (; i + kLanes <= cols; i += kLanes) {
    float64x2_t lo{vld1q_f64(block + i)};
    float64x2_t hi{lo};
    uint64x2_t lo_row{vdupq_n_u64(0)};
    uint64x2_t hi_row{vdupq_n_u64(0)};
    for (std::size_t r{1}; r < rows; ++r) {
      const float64x2_t v{vld1q_f64(block + r * cols + i)};
      const uint64x2_t row{vdupq_n_u64(r)};
      const uint64x2_t below{vcltq_f64(v, lo)};
      const uint64x2_t above{vcgtq_f64(v, hi)};
      lo = vbslq_f64(below, v, lo);
      lo_row = vbslq_u64(below, row, lo_row);
      hi = vbslq_f64(above, v, hi);
      hi_row = vbslq_u64(above, row, hi_row);
    }
    vst1q_f64(min_value + i, lo);
    vst1q_f64(max_value + i, hi);
    argmin[i] = static_cast<std::int32_t>(vgetq_lane_u64(lo_row, 0));
    argmin[i + 1] = static_cast<std::int32_t>(vgetq_lane_u64(lo_row, 1));
    argmax[i] = static_cast<std::int32_t>(vgetq_lane_u64(hi_row, 0));
    argmax[i + 1] = static_cast<std::int32_t>(vgetq_lane_u64(hi_row, 1));
  }
  for (; i < cols; ++i) {
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

std::int64_t count_below_neon(const double* values, std::size_t count, double threshold) {
  const float64x2_t t{vdupq_n_f64(threshold)};
  uint64x2_t lanes{vdupq_n_u64(0)};
  std::size_t i{0};
  for (; i + kLanes <= count; i += kLanes) {
    // Lanes are all-ones when below; shifting gives 1 per hit.
    lanes = vaddq_u64(lanes, vshrq_n_u64(vcltq_f64(vld1q_f64(values + i), t), 63));
  }
  auto total{static_cast<std::int64_t>(vgetq_lane_u64(lanes, 0) + vgetq_lane_u64(lanes, 1))};
  for (; i < count; ++i) {
    total += values[i] < threshold ? 1 : 0;
  }
  return total;
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable table{"neon", &profile_neon, &extrema_neon, &count_below_neon};
  return table;
}

}  // namespace castor::kernels::detail
