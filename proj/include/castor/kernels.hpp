#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

// Inner-loop kernels with a scalar reference and SIMD variants. Every variant
// performs the same IEEE operations in the same order, so results are
// bit-identical across variants (the build disables FMA contraction).
namespace castor::kernels {

// out[s] = scale[s] * sqrt(sum_j mask[j][s] * (shapelet[j] - windows[j][s])^2)
// windows and mask are length x positions, row j holding offset j of every window.
// Positions in [full_begin, full_end) have an all-ones mask column; multiplying
// by 1.0 is exact, so kernels skip the mask there.
using ProfileFn = void (*)(const double* shapelet, std::size_t length, const double* windows,
                           const double* mask, const double* scale, std::size_t positions,
                           std::size_t full_begin, std::size_t full_end, double* out);

// Column-wise extrema of a rows x cols row-major block. Ties go to the lowest row.
using ExtremaFn = void (*)(const double* block, std::size_t rows, std::size_t cols,
                           double* min_value, std::int32_t* argmin, double* max_value,
                           std::int32_t* argmax);

// Number of values strictly below threshold.
using CountBelowFn = std::int64_t (*)(const double* values, std::size_t count, double threshold);

struct KernelTable {
  std::string_view name;
  ProfileFn profile;
  ExtremaFn extrema;
  CountBelowFn count_below;
};

const KernelTable& scalar_table();

// Variants compiled in and supported by the running CPU, scalar first.
std::vector<const KernelTable*> available_tables();

// The widest supported variant, unless CASTOR_KERNELS names another one
// ("scalar", "avx2", "neon"). Resolved once per process.
const KernelTable& active_table();

namespace detail {
#if defined(CASTOR_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(CASTOR_HAVE_NEON)
const KernelTable& neon_table();
#endif
}  // namespace detail

}  // namespace castor::kernels
