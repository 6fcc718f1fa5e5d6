#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "castor/dataset.hpp"
#include "castor/profile.hpp"

namespace castor {

class Rng;

enum class CountMode : std::uint8_t { Hard = 0, Soft = 1 };
enum class OccurrenceMode : std::uint8_t { Independent = 0, Competing = 1 };
// Whether the z-normalization coin is flipped once per group or per shapelet.
enum class NormScope : std::uint8_t { Group = 0, Shapelet = 1 };
enum class Representation : std::uint8_t { Original = 0, Differenced = 1 };

std::string_view to_string(CountMode mode);
std::string_view to_string(OccurrenceMode mode);
std::string_view to_string(NormScope scope);
std::string_view to_string(Representation rep);

CountMode parse_count_mode(std::string_view text);
OccurrenceMode parse_occurrence_mode(std::string_view text);
NormScope parse_norm_scope(std::string_view text);

struct CastorConfig {
  std::size_t groups{128};
  std::size_t shapelets{16};
  std::size_t shapelet_length{9};
  double rho_lower{0.01};
  double rho_upper{0.2};
  double rho_norm{0.5};
  bool use_diff{true};
  CountMode min_mode{CountMode::Soft};
  CountMode max_mode{CountMode::Hard};
  OccurrenceMode occurrence{OccurrenceMode::Independent};
  NormScope norm_scope{NormScope::Group};
  std::uint64_t seed{0};

  // Throws InvalidShapeletLength / InvalidConfig.
  void validate() const;

  bool operator==(const CastorConfig&) const = default;
};

// floor(log2(m / l)) + 1, reduced until the widest dilation fits in m.
std::size_t num_exponents(std::size_t series_length, std::size_t shapelet_length);

// Shapelets and occurrence thresholds for one input representation.
// Entries are indexed [group][shapelet][exponent]; exponent slot e has dilation 2^e.
struct RepresentationBank {
  Representation representation{Representation::Original};
  std::size_t groups{0};
  std::size_t shapelets{0};
  std::size_t exponents{0};
  std::size_t shapelet_length{0};
  std::size_t series_length{0};

  std::vector<double> values;          // entries x shapelet_length
  std::vector<double> thresholds;      // entries
  std::vector<std::uint8_t> normalized;  // entries

  // Sampling provenance (donor, 1-based start, partner); not persisted.
  struct Provenance {
    std::size_t donor;
    std::size_t start;
    std::size_t partner;
  };
  std::vector<Provenance> provenance;

  std::size_t entries() const noexcept { return groups * shapelets * exponents; }
  std::size_t index(std::size_t group, std::size_t shapelet, std::size_t exponent) const noexcept {
    return (group * shapelets + shapelet) * exponents + exponent;
  }
  static constexpr std::size_t dilation(std::size_t exponent) noexcept {
    return std::size_t{1} << exponent;
  }
  std::span<const double> shapelet_values(std::size_t entry) const noexcept {
    return {values.data() + entry * shapelet_length, shapelet_length};
  }
  DilatedShapelet shapelet(std::size_t group, std::size_t shapelet, std::size_t exponent) const;
  std::size_t num_features() const noexcept { return groups * exponents * shapelets * 3; }

  bool operator==(const RepresentationBank& other) const {
    return representation == other.representation && groups == other.groups &&
           shapelets == other.shapelets && exponents == other.exponents &&
           shapelet_length == other.shapelet_length && series_length == other.series_length &&
           values == other.values && thresholds == other.thresholds &&
           normalized == other.normalized;
  }
};

struct CastorParams {
  CastorConfig config;
  std::size_t series_length{0};
  std::vector<RepresentationBank> banks;  // original first, then differenced

  std::size_t num_features() const noexcept;
  bool operator==(const CastorParams&) const = default;
};

// Draws a threshold from the ascending standard-padded profile of `shapelet`
// against `series`: a uniform 1-based rank in
// [max(1, floor(lower * o)), max(1, floor(upper * o))], clamped to [1, o].
double sample_threshold(const DilatedShapelet& shapelet, std::span<const double> series,
                        double rho_lower, double rho_upper, Rng& rng);

// Samples the parameter bank. Every (representation, group, shapelet,
// exponent) entry draws from its own substream, so results do not depend on
// `threads`.
CastorParams fit_params(const LabeledDataset& dataset, const CastorConfig& config,
                        std::size_t threads = 1);

}  // namespace castor
