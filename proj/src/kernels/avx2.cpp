// Built with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include <cmath>

#include "castor/kernels.hpp"

namespace castor::kernels::detail {
namespace {

constexpr std::size_t kLanes{4};

template <bool Masked>
inline __m256d accumulate(__m256d acc, __m256d shapelet_value, const double* windows,
                          const double* mask) {
  const __m256d d{_mm256_sub_pd(shapelet_value, _mm256_loadu_pd(windows))};
  if constexpr (Masked) {
    return _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(mask), _mm256_mul_pd(d, d)));
  } else {
    return _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
}

inline void store(double* out, const double* scale, __m256d acc) {
  _mm256_storeu_pd(out, _mm256_mul_pd(_mm256_loadu_pd(scale), _mm256_sqrt_pd(acc)));
}

template <bool Masked>
void profile_range(const double* shapelet, std::size_t length, const double* windows,
                   const double* mask, const double* scale, std::size_t positions,
                   std::size_t begin, std::size_t end, double* out) {
  std::size_t s{begin};
  for (; s + 4 * kLanes <= end; s += 4 * kLanes) {
    __m256d a0{_mm256_setzero_pd()};
    __m256d a1{_mm256_setzero_pd()};
    __m256d a2{_mm256_setzero_pd()};
    __m256d a3{_mm256_setzero_pd()};
    for (std::size_t j{0}; j < length; ++j) {
      const __m256d v{_mm256_set1_pd(shapelet[j])};
      const double* w{windows + j * positions + s};
      const double* m{mask + j * positions + s};
      a0 = accumulate<Masked>(a0, v, w, m);
      a1 = accumulate<Masked>(a1, v, w + kLanes, m + kLanes);
      a2 = accumulate<Masked>(a2, v, w + 2 * kLanes, m + 2 * kLanes);
      a3 = accumulate<Masked>(a3, v, w + 3 * kLanes, m + 3 * kLanes);
    }
    store(out + s, scale + s, a0);
    store(out + s + kLanes, scale + s + kLanes, a1);
    store(out + s + 2 * kLanes, scale + s + 2 * kLanes, a2);
    store(out + s + 3 * kLanes, scale + s + 3 * kLanes, a3);
  }
  for (; s + kLanes <= end; s += kLanes) {
    __m256d acc{_mm256_setzero_pd()};
    for (std::size_t j{0}; j < length; ++j) {
      acc = accumulate<Masked>(acc, _mm256_set1_pd(shapelet[j]), windows + j * positions + s,
                               mask + j * positions + s);
    }
    store(out + s, scale + s, acc);
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

void profile_avx2(const double* shapelet, std::size_t length, const double* windows,
                  const double* mask, const double* scale, std::size_t positions,
                  std::size_t full_begin, std::size_t full_end, double* out) {
  profile_range<true>(shapelet, length, windows, mask, scale, positions, 0, full_begin, out);
  profile_range<false>(shapelet, length, windows, mask, scale, positions, full_begin, full_end,
                       out);
  profile_range<true>(shapelet, length, windows, mask, scale, positions, full_end, positions,
                      out);
}

// Columns [begin, begin + 4 * Vectors) with Vectors independent compare chains.
template <std::size_t Vectors>
void extrema_columns(const double* block, std::size_t rows, std::size_t cols, std::size_t begin,
                     double* min_value, std::int32_t* argmin, double* max_value,
                     std::int32_t* argmax) {
  __m256d lo[Vectors];
  __m256d hi[Vectors];
  __m256d lo_row[Vectors];
  __m256d hi_row[Vectors];
  for (std::size_t q{0}; q < Vectors; ++q) {
    lo[q] = _mm256_loadu_pd(block + begin + q * kLanes);
    hi[q] = lo[q];
    lo_row[q] = _mm256_setzero_pd();
    hi_row[q] = _mm256_setzero_pd();
  }
  for (std::size_t r{1}; r < rows; ++r) {
    const __m256d row{_mm256_set1_pd(static_cast<double>(r))};
    const double* src{block + r * cols + begin};
    for (std::size_t q{0}; q < Vectors; ++q) {
      const __m256d v{_mm256_loadu_pd(src + q * kLanes)};
      const __m256d below{_mm256_cmp_pd(v, lo[q], _CMP_LT_OQ)};
      const __m256d above{_mm256_cmp_pd(v, hi[q], _CMP_GT_OQ)};
      lo[q] = _mm256_blendv_pd(lo[q], v, below);
      lo_row[q] = _mm256_blendv_pd(lo_row[q], row, below);
      hi[q] = _mm256_blendv_pd(hi[q], v, above);
      hi_row[q] = _mm256_blendv_pd(hi_row[q], row, above);
    }
  }
  for (std::size_t q{0}; q < Vectors; ++q) {
    const std::size_t i{begin + q * kLanes};
    _mm256_storeu_pd(min_value + i, lo[q]);
    _mm256_storeu_pd(max_value + i, hi[q]);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(argmin + i), _mm256_cvtpd_epi32(lo_row[q]));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(argmax + i), _mm256_cvtpd_epi32(hi_row[q]));
  }
}

void extrema_avx2(const double* block, std::size_t rows, std::size_t cols, double* min_value,
                  std::int32_t* argmin, double* max_value, std::int32_t* argmax) {
  std::size_t i{0};
  for (; i + 4 * kLanes <= cols; i += 4 * kLanes) {
    extrema_columns<4>(block, rows, cols, i, min_value, argmin, max_value, argmax);
  }
  for (; i + kLanes <= cols; i += kLanes) {
    extrema_columns<1>(block, rows, cols, i, min_value, argmin, max_value, argmax);
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

std::int64_t count_below_avx2(const double* values, std::size_t count, double threshold) {
  const __m256d t{_mm256_set1_pd(threshold)};
  std::int64_t total{0};
  std::size_t i{0};
  for (; i + kLanes <= count; i += kLanes) {
    const __m256d below{_mm256_cmp_pd(_mm256_loadu_pd(values + i), t, _CMP_LT_OQ)};
    total += __builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(below)));
  }
  for (; i < count; ++i) {
    total += values[i] < threshold ? 1 : 0;
  }
  return total;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{"avx2", &profile_avx2, &extrema_avx2, &count_below_avx2};
  return table;
}

}  // namespace castor::kernels::detail
