#include "castor/transform.hpp"

#include <cstdint>
#include <string>

#include "castor/error.hpp"
#include "castor/kernels.hpp"
#include "castor/parallel.hpp"

namespace castor {

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::Min: return "min";
    case FeatureKind::Max: return "max";
    case FeatureKind::Occurrence: return "occurrence";
  }
  return "unknown";
}

FeatureLayout::FeatureLayout(const CastorParams& params) {
  for (const auto& bank : params.banks) {
    blocks_.push_back({bank.representation, bank.groups, bank.exponents, bank.shapelets, size_});
    size_ += bank.num_features();
  }
}

FeatureSlot FeatureLayout::slot(std::size_t column) const {
  for (const auto& block : blocks_) {
    const std::size_t width{block.groups * block.exponents * block.shapelets * 3};
    if (column < block.offset + width) {
      std::size_t rest{column - block.offset};
      const std::size_t per_group{block.exponents * block.shapelets * 3};
      const std::size_t group{rest / per_group};
      rest %= per_group;
      const std::size_t exponent{rest / (block.shapelets * 3)};
      rest %= block.shapelets * 3;
      return {block.representation, group, exponent,
              static_cast<FeatureKind>(rest / block.shapelets), rest % block.shapelets};
    }
  }
  throw Error{ErrorCode::FeatureDimensionMismatch,
              "column " + std::to_string(column) + " outside layout of " + std::to_string(size_)};
}

std::size_t FeatureLayout::column(const FeatureSlot& slot) const {
  for (const auto& block : blocks_) {
    if (block.representation == slot.representation) {
      return block.offset +
             ((slot.group * block.exponents + slot.exponent) * 3 +
              static_cast<std::size_t>(slot.kind)) *
                 block.shapelets +
             slot.shapelet;
    }
  }
  throw Error{ErrorCode::FeatureDimensionMismatch, "representation not in layout"};
}

std::string FeatureLayout::name(std::size_t column) const {
  const FeatureSlot s{slot(column)};
  return std::string{to_string(s.representation)} + "/g" + std::to_string(s.group) + "/e" +
         std::to_string(s.exponent) + "/" + std::string{to_string(s.kind)} + "/s" +
         std::to_string(s.shapelet);
}

namespace {

struct ColumnExtrema {
  std::vector<double> min_value;
  std::vector<double> max_value;
  std::vector<std::int32_t> argmin;
  std::vector<std::int32_t> argmax;

  void compute(const GroupProfileBlock& block) {
    min_value.resize(block.cols);
    max_value.resize(block.cols);
    argmin.resize(block.cols);
    argmax.resize(block.cols);
    kernels::active_table().extrema(block.values.data(), block.rows, block.cols,
                                    min_value.data(), argmin.data(), max_value.data(),
                                    argmax.data());
  }
};

}  // namespace

double min_aggregate(std::size_t shapelet, const GroupProfileBlock& block, CountMode mode) {
  ColumnExtrema ext;
  ext.compute(block);
  double total{0.0};
  for (std::size_t i{0}; i < block.cols; ++i) {
    if (static_cast<std::size_t>(ext.argmin[i]) == shapelet) {
      total += mode == CountMode::Hard ? 1.0 : ext.min_value[i];
    }
  }
  return total;
}

double max_aggregate(std::size_t shapelet, const GroupProfileBlock& block, CountMode mode) {
  ColumnExtrema ext;
  ext.compute(block);
  double total{0.0};
  for (std::size_t i{0}; i < block.cols; ++i) {
    if (static_cast<std::size_t>(ext.argmax[i]) == shapelet) {
      total += mode == CountMode::Hard ? 1.0 : ext.max_value[i];
    }
  }
  return total;
}

// With dp stored k x m, entry (shapelet j, step i) is block(j, i).
double occurrence(std::size_t shapelet, const GroupProfileBlock& block,
                  std::span<const double> thresholds, OccurrenceMode mode) {
  const double lambda{thresholds[shapelet]};
  const auto row{block.row(shapelet)};
  double count{0.0};
  if (mode == OccurrenceMode::Independent) {
    for (const double v : row) {
      count += v < lambda ? 1.0 : 0.0;
    }
    return count;
  }
  ColumnExtrema ext;
  ext.compute(block);
  for (std::size_t i{0}; i < block.cols; ++i) {
    if (static_cast<std::size_t>(ext.argmin[i]) == shapelet && row[i] < lambda) {
      count += 1.0;
    }
  }
  return count;
}

namespace {

// Per-worker buffers reused across samples.
struct Workspace {
  WindowMatrix raw;
  WindowMatrix normalized;
  GroupProfileBlock block;
  ColumnExtrema extrema;
  std::vector<double> differenced;
};

void fill_block(const RepresentationBank& bank, std::size_t group, std::size_t exponent,
                const WindowMatrix& raw, const WindowMatrix& normalized,
                GroupProfileBlock& block) {
  const std::size_t d{RepresentationBank::dilation(exponent)};
  const std::size_t o{profile_length(bank.series_length, bank.shapelet_length, d,
                                     standard_padding(bank.shapelet_length, d))};
  if (block.rows != bank.shapelets || block.cols != o) {
    block = GroupProfileBlock{bank.shapelets, o};
  }
  for (std::size_t j{0}; j < bank.shapelets; ++j) {
    const std::size_t entry{bank.index(group, j, exponent)};
    distance_profile(bank.shapelet_values(entry), bank.normalized[entry] ? normalized : raw,
                     block.row(j));
  }
}

bool exponent_uses(const RepresentationBank& bank, std::size_t exponent, bool normalized) {
  for (std::size_t g{0}; g < bank.groups; ++g) {
    for (std::size_t j{0}; j < bank.shapelets; ++j) {
      if ((bank.normalized[bank.index(g, j, exponent)] != 0) == normalized) {
        return true;
      }
    }
  }
  return false;
}

constexpr std::size_t kMaxInlineShapelets{64};

// Writes the 3k features of one (group, exponent) block starting at `out`.
void emit_features(const RepresentationBank& bank, std::size_t group, std::size_t exponent,
                   const GroupProfileBlock& block, ColumnExtrema& ext,
                   const CastorConfig& config, double* out) {
  const std::size_t k{bank.shapelets};
  ext.compute(block);
  double* mins{out};
  double* maxs{out + k};
  double* occ{out + 2 * k};
  for (std::size_t i{0}; i < block.cols; ++i) {
    mins[ext.argmin[i]] += config.min_mode == CountMode::Hard ? 1.0 : ext.min_value[i];
    maxs[ext.argmax[i]] += config.max_mode == CountMode::Hard ? 1.0 : ext.max_value[i];
  }
  const double* lambda{bank.thresholds.data() + bank.index(group, 0, exponent)};
  const std::size_t stride{bank.exponents};  // thresholds of one group step by E per shapelet
  if (config.occurrence == OccurrenceMode::Independent) {
    const auto count_below{kernels::active_table().count_below};
    for (std::size_t j{0}; j < k; ++j) {
      occ[j] = static_cast<double>(
          count_below(block.values.data() + j * block.cols, block.cols, lambda[j * stride]));
    }
  } else {
    // The column winner holds the column minimum, so one pass over columns suffices.
    std::int64_t counts[kMaxInlineShapelets]{};
    std::vector<std::int64_t> heap;
    std::int64_t* c{counts};
    if (k > kMaxInlineShapelets) {
      heap.assign(k, 0);
      c = heap.data();
    }
    for (std::size_t i{0}; i < block.cols; ++i) {
      const auto j{static_cast<std::size_t>(ext.argmin[i])};
      c[j] += ext.min_value[i] < lambda[j * stride] ? 1 : 0;
    }
    for (std::size_t j{0}; j < k; ++j) {
      occ[j] = static_cast<double>(c[j]);
    }
  }
}

}  // namespace

GroupProfileBlock group_profile_block(const RepresentationBank& bank, std::size_t group,
                                      std::size_t exponent, std::span<const double> series) {
  if (series.size() != bank.series_length) {
    throw Error{ErrorCode::SeriesLengthMismatch,
                "expected length " + std::to_string(bank.series_length) + ", got " +
                    std::to_string(series.size())};
  }
  const std::size_t l{bank.shapelet_length};
  const std::size_t d{RepresentationBank::dilation(exponent)};
  const std::size_t p{standard_padding(l, d)};
  WindowMatrix raw;
  WindowMatrix normalized;
  raw.build(series, l, d, p, false);
  normalized.build(series, l, d, p, true);
  GroupProfileBlock block;
  fill_block(bank, group, exponent, raw, normalized, block);
  return block;
}

FeatureMatrix transform(const SeriesBatch& series, const CastorParams& params,
                        std::size_t threads) {
  if (series.length() != params.series_length) {
    throw Error{ErrorCode::SeriesLengthMismatch,
                "expected length " + std::to_string(params.series_length) + ", got " +
                    std::to_string(series.length())};
  }
  FeatureMatrix out{series.size(), params.num_features()};
  out.layout = FeatureLayout{params};

  // Which window variants each (bank, exponent) needs.
  struct ExponentPlan {
    bool raw;
    bool normalized;
  };
  std::vector<std::vector<ExponentPlan>> plans;
  for (const auto& bank : params.banks) {
    auto& plan{plans.emplace_back(bank.exponents)};
    for (std::size_t e{0}; e < bank.exponents; ++e) {
      plan[e] = {exponent_uses(bank, e, false), exponent_uses(bank, e, true)};
    }
  }

  const std::size_t workers{resolve_threads(threads)};
  std::vector<Workspace> workspaces(workers);
  parallel_for(
      series.size(), workers,
      [&](std::size_t begin, std::size_t end, std::size_t worker) {
        Workspace& ws{workspaces[worker]};
        for (std::size_t n{begin}; n < end; ++n) {
          const auto original{series[n]};
          double* row{out.row(n).data()};
          for (std::size_t b{0}; b < params.banks.size(); ++b) {
            const auto& bank{params.banks[b]};
            std::span<const double> input{original};
            if (bank.representation == Representation::Differenced) {
              ws.differenced.resize(original.size() - 1);
              for (std::size_t t{0}; t + 1 < original.size(); ++t) {
                ws.differenced[t] = original[t + 1] - original[t];
              }
              input = ws.differenced;
            }
            const std::size_t l{bank.shapelet_length};
            for (std::size_t e{0}; e < bank.exponents; ++e) {
              const std::size_t d{RepresentationBank::dilation(e)};
              const std::size_t p{standard_padding(l, d)};
              if (plans[b][e].raw) {
                ws.raw.build(input, l, d, p, false);
              }
              if (plans[b][e].normalized) {
                ws.normalized.build(input, l, d, p, true);
              }
              for (std::size_t g{0}; g < bank.groups; ++g) {
                fill_block(bank, g, e, ws.raw, ws.normalized, ws.block);
                const std::size_t column{
                    out.layout.column({bank.representation, g, e, FeatureKind::Min, 0})};
                emit_features(bank, g, e, ws.block, ws.extrema, params.config, row + column);
              }
            }
          }
        }
      },
      4);
  return out;
}

}  // namespace castor
