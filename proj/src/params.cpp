#include "castor/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "castor/error.hpp"
#include "castor/parallel.hpp"
#include "castor/rng.hpp"

namespace castor {

std::string_view to_string(CountMode mode) { return mode == CountMode::Hard ? "hard" : "soft"; }

std::string_view to_string(OccurrenceMode mode) {
  return mode == OccurrenceMode::Independent ? "independent" : "competing";
}

std::string_view to_string(NormScope scope) {
  return scope == NormScope::Group ? "group" : "shapelet";
}

std::string_view to_string(Representation rep) {
  return rep == Representation::Original ? "original" : "differenced";
}

CountMode parse_count_mode(std::string_view text) {
  if (text == "hard") return CountMode::Hard;
  if (text == "soft") return CountMode::Soft;
  throw Error{ErrorCode::InvalidConfig, "count mode must be hard or soft, got " + std::string{text}};
}

OccurrenceMode parse_occurrence_mode(std::string_view text) {
  if (text == "independent") return OccurrenceMode::Independent;
  if (text == "competing") return OccurrenceMode::Competing;
  throw Error{ErrorCode::InvalidConfig,
              "occurrence mode must be independent or competing, got " + std::string{text}};
}

NormScope parse_norm_scope(std::string_view text) {
  if (text == "group") return NormScope::Group;
  if (text == "shapelet") return NormScope::Shapelet;
  throw Error{ErrorCode::InvalidConfig,
              "normalization scope must be group or shapelet, got " + std::string{text}};
}

void CastorConfig::validate() const {
  if (shapelet_length < 3 || shapelet_length % 2 == 0) {
    throw Error{ErrorCode::InvalidShapeletLength,
                "shapelet length must be odd and >= 3 (symmetric padding), got " +
                    std::to_string(shapelet_length)};
  }
  if (groups < 1 || shapelets < 1) {
    throw Error{ErrorCode::InvalidConfig, "groups and shapelets must be >= 1"};
  }
  if (use_diff && groups % 2 != 0) {
    throw Error{ErrorCode::InvalidConfig,
                "groups must be even when differenced groups are enabled, got " +
                    std::to_string(groups)};
  }
  const auto in_unit{[](double v) { return v >= 0.0 && v <= 1.0; }};
  if (!in_unit(rho_lower) || !in_unit(rho_upper) || rho_lower > rho_upper) {
    throw Error{ErrorCode::InvalidConfig, "need 0 <= lower <= upper <= 1"};
  }
  if (!in_unit(rho_norm)) {
    throw Error{ErrorCode::InvalidConfig, "normalization probability must be in [0, 1]"};
  }
}

std::size_t num_exponents(std::size_t series_length, std::size_t shapelet_length) {
  if (shapelet_length == 0 || series_length < shapelet_length) {
    throw Error{ErrorCode::ShapeletLongerThanSeries,
                "shapelet length " + std::to_string(shapelet_length) +
                    " exceeds series length " + std::to_string(series_length)};
  }
  // floor(log2(m / l)) is the largest e with l * 2^e <= m.
  std::size_t e{0};
  while (shapelet_length << (e + 1) <= series_length) {
    ++e;
  }
  std::size_t exponents{e + 1};
  while (exponents > 1 &&
         effective_length(shapelet_length, std::size_t{1} << (exponents - 1)) > series_length) {
    --exponents;
  }
  return exponents;
}

DilatedShapelet RepresentationBank::shapelet(std::size_t group, std::size_t shapelet,
                                             std::size_t exponent) const {
  const std::size_t entry{index(group, shapelet, exponent)};
  const auto v{shapelet_values(entry)};
  return DilatedShapelet{{v.begin(), v.end()}, dilation(exponent), normalized[entry] != 0};
}

std::size_t CastorParams::num_features() const noexcept {
  std::size_t total{0};
  for (const auto& bank : banks) {
    total += bank.num_features();
  }
  return total;
}

double sample_threshold(const DilatedShapelet& shapelet, std::span<const double> series,
                        double rho_lower, double rho_upper, Rng& rng) {
  auto profile{distance_profile(shapelet, series,
                                standard_padding(shapelet.length(), shapelet.dilation))};
  const auto o{static_cast<std::int64_t>(profile.size())};
  const auto rank_of{[o](double rho) {
    const auto r{static_cast<std::int64_t>(std::floor(rho * static_cast<double>(o)))};
    return std::clamp<std::int64_t>(r, 1, o);
  }};
  const std::int64_t rank{rng.between(rank_of(rho_lower), rank_of(rho_upper))};
  const auto nth{profile.begin() + (rank - 1)};
  std::nth_element(profile.begin(), nth, profile.end());
  return *nth;
}

namespace {

// Key for the per-group normalization coin; distinct from any shapelet index.
constexpr std::uint64_t kNormKey{std::numeric_limits<std::uint64_t>::max()};

struct ClassIndex {
  std::vector<std::vector<std::size_t>> members;
  std::vector<std::size_t> position;  // position of sample i within its class list

  explicit ClassIndex(const LabeledDataset& dataset)
      : members(dataset.num_classes()), position(dataset.size()) {
    for (std::size_t i{0}; i < dataset.size(); ++i) {
      auto& list{members[static_cast<std::size_t>(dataset.labels()[i])]};
      position[i] = list.size();
      list.push_back(i);
    }
  }
};

void fit_group(RepresentationBank& bank, std::size_t group, const SeriesBatch& series,
               const LabeledDataset& dataset, const ClassIndex& classes,
               const CastorConfig& config) {
  const auto rep{static_cast<std::uint64_t>(bank.representation)};
  const std::size_t l{bank.shapelet_length};
  const std::size_t m{bank.series_length};

  Rng norm_rng{derive_seed(config.seed, {rep, group, kNormKey})};
  const bool group_normalized{norm_rng.bernoulli(config.rho_norm)};

  for (std::size_t j{0}; j < bank.shapelets; ++j) {
    for (std::size_t e{0}; e < bank.exponents; ++e) {
      Rng rng{derive_seed(config.seed, {rep, group, j, e})};
      const bool normalized{config.norm_scope == NormScope::Group
                                ? group_normalized
                                : rng.bernoulli(config.rho_norm)};
      const std::size_t dilation{RepresentationBank::dilation(e)};
      const std::size_t span{effective_length(l, dilation)};

      const std::size_t donor{rng.below(series.size())};
      const std::size_t start{1 + rng.below(m - span + 1)};

      const auto& same_class{
          classes.members[static_cast<std::size_t>(dataset.labels()[donor])]};
      std::size_t partner{donor};
      if (same_class.size() > 1) {
        std::size_t pick{rng.below(same_class.size() - 1)};
        if (pick >= classes.position[donor]) {
          ++pick;
        }
        partner = same_class[pick];
      }

      const DilatedShapelet shapelet{make_shapelet(
          extract_dilated_subsequence(series[donor], dilation, start, l), dilation, normalized)};
      const std::size_t entry{bank.index(group, j, e)};
      std::ranges::copy(shapelet.values, bank.values.begin() +
                                             static_cast<std::ptrdiff_t>(entry * l));
      bank.normalized[entry] = normalized ? 1 : 0;
      bank.thresholds[entry] =
          sample_threshold(shapelet, series[partner], config.rho_lower, config.rho_upper, rng);
      bank.provenance[entry] = {donor, start, partner};
    }
  }
}

RepresentationBank make_bank(Representation rep, std::size_t groups, std::size_t series_length,
                             const CastorConfig& config) {
  RepresentationBank bank;
  bank.representation = rep;
  bank.groups = groups;
  bank.shapelets = config.shapelets;
  bank.shapelet_length = config.shapelet_length;
  bank.series_length = series_length;
  bank.exponents = num_exponents(series_length, config.shapelet_length);
  bank.values.assign(bank.entries() * bank.shapelet_length, 0.0);
  bank.thresholds.assign(bank.entries(), 0.0);
  bank.normalized.assign(bank.entries(), 0);
  bank.provenance.resize(bank.entries());
  return bank;
}

}  // namespace

CastorParams fit_params(const LabeledDataset& dataset, const CastorConfig& config,
                        std::size_t threads) {
  config.validate();
  if (dataset.size() == 0) {
    throw Error{ErrorCode::InvalidDataset, "empty dataset"};
  }
  const std::size_t m{dataset.series_length()};

  CastorParams params;
  params.config = config;
  params.series_length = m;
  const std::size_t original_groups{config.use_diff ? config.groups / 2 : config.groups};
  params.banks.push_back(make_bank(Representation::Original, original_groups, m, config));
  if (config.use_diff) {
    if (m < 3) {
      throw Error{ErrorCode::SeriesTooShort, "differenced groups need series of length >= 3"};
    }
    params.banks.push_back(
        make_bank(Representation::Differenced, config.groups / 2, m - 1, config));
  }

  const ClassIndex classes{dataset};
  struct Task {
    std::size_t bank;
    std::size_t group;
  };
  std::vector<Task> tasks;
  for (std::size_t b{0}; b < params.banks.size(); ++b) {
    for (std::size_t g{0}; g < params.banks[b].groups; ++g) {
      tasks.push_back({b, g});
    }
  }
  parallel_for(tasks.size(), threads, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t t{begin}; t < end; ++t) {
      auto& bank{params.banks[tasks[t].bank]};
      const SeriesBatch& series{bank.representation == Representation::Original
                                    ? dataset.series()
                                    : dataset.differenced()};
      fit_group(bank, tasks[t].group, series, dataset, classes, config);
    }
  });
  return params;
}

}  // namespace castor
