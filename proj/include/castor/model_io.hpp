#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"

#include "castor/classifier.hpp"
#include "castor/params.hpp"

namespace castor {

struct CastorModel {
  CastorParams params;
  std::optional<RidgeModel> classifier;

  bool operator==(const CastorModel&) const = default;
};

inline constexpr char kModelMagic[8]{'C', 'A', 'S', 'T', 'O', 'R', '0', '1'};
inline constexpr std::uint32_t kModelFormatVersion{1};

// Little-endian container; see docs/formats.md for the byte layout.
std::string serialize_model(const CastorModel& model);
CastorModel deserialize_model(std::string_view bytes);

void save_model(const CastorModel& model, const std::filesystem::path& path);
CastorModel load_model(const std::filesystem::path& path);

// Same tree as the binary container, for inspection.
nlohmann::json model_to_json(const CastorModel& model);
nlohmann::json config_to_json(const CastorConfig& config);

}  // namespace castor
