#include "castor/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "castor/error.hpp"
#include "castor/transform.hpp"

namespace castor {
namespace {

constexpr std::uint64_t kFnvOffset{0xcbf29ce484222325ULL};
constexpr std::uint64_t kFnvPrime{0x100000001b3ULL};

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h{kFnvOffset};
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= kFnvPrime;
  }
  return h;
}

class ByteWriter {
 public:
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) { little_endian(v); }
  void u64(std::uint64_t v) { little_endian(v); }
  void f64(double v) { little_endian(std::bit_cast<std::uint64_t>(v)); }
  void f64s(const std::vector<double>& values) {
    for (const double v : values) {
      f64(v);
    }
  }
  void string(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.append(s);
  }
  void bytes(std::string_view b) { out_.append(b); }

  std::string& buffer() { return out_; }

 private:
  template <typename T>
  void little_endian(T v) {
    for (std::size_t i{0}; i < sizeof(T); ++i) {
      out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
  }

  std::string out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_{bytes} {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }
  std::uint32_t u32() { return little_endian<std::uint32_t>(); }
  std::uint64_t u64() { return little_endian<std::uint64_t>(); }
  double f64() { return std::bit_cast<double>(little_endian<std::uint64_t>()); }
  std::vector<double> f64s(std::uint64_t count) {
    require(count, 8);
    std::vector<double> out(count);
    for (double& v : out) {
      v = f64();
    }
    return out;
  }
  std::string string() {
    const std::uint32_t size{u32()};
    return std::string{take(size)};
  }
  std::string_view take(std::uint64_t size) {
    if (size > bytes_.size() - pos_) {
      throw Error{ErrorCode::InvalidModelFile, "truncated model file"};
    }
    const std::string_view out{bytes_.substr(pos_, size)};
    pos_ += size;
    return out;
  }
  std::size_t position() const { return pos_; }
  bool done() const { return pos_ == bytes_.size(); }

  // Rejects counts that could not fit in the remaining bytes.
  void require(std::uint64_t count, std::uint64_t width) const {
    if (width != 0 && count > (bytes_.size() - pos_) / width) {
      throw Error{ErrorCode::InvalidModelFile, "array length exceeds file size"};
    }
  }

 private:
  template <typename T>
  T little_endian() {
    const auto raw{take(sizeof(T))};
    T v{0};
    for (std::size_t i{0}; i < sizeof(T); ++i) {
      v |= static_cast<T>(static_cast<unsigned char>(raw[i])) << (8 * i);
    }
    return v;
  }

  std::string_view bytes_;
  std::size_t pos_{0};
};

template <typename Enum>
Enum checked_enum(std::uint8_t raw, std::uint8_t max, const char* what) {
  if (raw > max) {
    throw Error{ErrorCode::InvalidModelFile, std::string{"bad "} + what + " tag"};
  }
  return static_cast<Enum>(raw);
}

void write_config(ByteWriter& w, const CastorConfig& c) {
  w.u64(c.groups);
  w.u64(c.shapelets);
  w.u64(c.shapelet_length);
  w.f64(c.rho_lower);
  w.f64(c.rho_upper);
  w.f64(c.rho_norm);
  w.u8(c.use_diff ? 1 : 0);
  w.u8(static_cast<std::uint8_t>(c.min_mode));
  w.u8(static_cast<std::uint8_t>(c.max_mode));
  w.u8(static_cast<std::uint8_t>(c.occurrence));
  w.u8(static_cast<std::uint8_t>(c.norm_scope));
  w.u64(c.seed);
}

CastorConfig read_config(ByteReader& r) {
  CastorConfig c;
  c.groups = r.u64();
  c.shapelets = r.u64();
  c.shapelet_length = r.u64();
  c.rho_lower = r.f64();
  c.rho_upper = r.f64();
  c.rho_norm = r.f64();
  c.use_diff = r.u8() != 0;
  c.min_mode = checked_enum<CountMode>(r.u8(), 1, "min mode");
  c.max_mode = checked_enum<CountMode>(r.u8(), 1, "max mode");
  c.occurrence = checked_enum<OccurrenceMode>(r.u8(), 1, "occurrence mode");
  c.norm_scope = checked_enum<NormScope>(r.u8(), 1, "normalization scope");
  c.seed = r.u64();
  return c;
}

void write_bank(ByteWriter& w, const RepresentationBank& b) {
  w.u8(static_cast<std::uint8_t>(b.representation));
  w.u64(b.groups);
  w.u64(b.shapelets);
  w.u64(b.exponents);
  w.u64(b.shapelet_length);
  w.u64(b.series_length);
  w.f64s(b.values);
  w.f64s(b.thresholds);
  for (const std::uint8_t flag : b.normalized) {
    w.u8(flag);
  }
}

RepresentationBank read_bank(ByteReader& r) {
  RepresentationBank b;
  b.representation = checked_enum<Representation>(r.u8(), 1, "representation");
  b.groups = r.u64();
  b.shapelets = r.u64();
  b.exponents = r.u64();
  b.shapelet_length = r.u64();
  b.series_length = r.u64();
  if (b.exponents > 62 || b.shapelet_length == 0) {
    throw Error{ErrorCode::InvalidModelFile, "bad bank dimensions"};
  }
  // Overflow-safe entry count against the remaining bytes.
  r.require(b.groups, 1);
  r.require(b.shapelets, 1);
  r.require(b.groups * b.shapelets, b.exponents);
  const std::size_t entries{b.entries()};
  r.require(entries, b.shapelet_length);
  b.values = r.f64s(entries * b.shapelet_length);
  b.thresholds = r.f64s(entries);
  const auto flags{r.take(entries)};
  b.normalized.assign(flags.begin(), flags.end());
  return b;
}

void write_classifier(ByteWriter& w, const RidgeModel& m) {
  w.u32(static_cast<std::uint32_t>(m.vocabulary.size()));
  for (const auto& token : m.vocabulary) {
    w.string(token);
  }
  w.u8(static_cast<std::uint8_t>(m.scaler.kind));
  w.u64(m.scaler.size());
  w.f64s(m.scaler.mean);
  w.f64s(m.scaler.std);
  w.f64s(m.scaler.zero_fraction);
  w.f64s(m.scaler.epsilon);
  w.u32(static_cast<std::uint32_t>(m.alphas.size()));
  w.f64s(m.alphas);
  w.f64s(m.loocv_errors);
  w.f64(m.alpha);
  w.u64(m.features);
  w.u32(static_cast<std::uint32_t>(m.outputs));
  w.f64s(m.intercepts);
  w.f64s(m.weights);
}

RidgeModel read_classifier(ByteReader& r) {
  RidgeModel m;
  const std::uint32_t classes{r.u32()};
  r.require(classes, 4);
  for (std::uint32_t c{0}; c < classes; ++c) {
    m.vocabulary.push_back(r.string());
  }
  m.scaler.kind = checked_enum<ScalerKind>(r.u8(), 2, "scaler");
  const std::uint64_t scaler_size{r.u64()};
  m.scaler.mean = r.f64s(scaler_size);
  m.scaler.std = r.f64s(scaler_size);
  m.scaler.zero_fraction = r.f64s(scaler_size);
  m.scaler.epsilon = r.f64s(scaler_size);
  const std::uint32_t alphas{r.u32()};
  m.alphas = r.f64s(alphas);
  m.loocv_errors = r.f64s(alphas);
  m.alpha = r.f64();
  m.features = r.u64();
  m.outputs = r.u32();
  m.intercepts = r.f64s(m.outputs);
  r.require(m.outputs, 1);
  r.require(m.features, m.outputs == 0 ? 1 : m.outputs);
  m.weights = r.f64s(m.outputs * m.features);
  return m;
}

}  // namespace

std::string serialize_model(const CastorModel& model) {
  ByteWriter w;
  w.bytes({kModelMagic, sizeof kModelMagic});
  w.u32(kModelFormatVersion);
  write_config(w, model.params.config);
  w.u64(model.params.series_length);
  w.u32(static_cast<std::uint32_t>(model.params.banks.size()));
  for (const auto& bank : model.params.banks) {
    write_bank(w, bank);
  }
  w.u8(model.classifier ? 1 : 0);
  if (model.classifier) {
    write_classifier(w, *model.classifier);
  }
  w.u64(fnv1a(w.buffer()));
  return std::move(w.buffer());
}

CastorModel deserialize_model(std::string_view bytes) {
  if (bytes.size() < sizeof kModelMagic + 12 ||
      std::memcmp(bytes.data(), kModelMagic, sizeof kModelMagic) != 0) {
    throw Error{ErrorCode::InvalidModelFile, "missing CASTOR01 magic"};
  }
  const std::string_view body{bytes.substr(0, bytes.size() - 8)};
  ByteReader trailer{bytes.substr(bytes.size() - 8)};
  if (trailer.u64() != fnv1a(body)) {
    throw Error{ErrorCode::InvalidModelFile, "checksum mismatch"};
  }

  ByteReader r{body};
  r.take(sizeof kModelMagic);
  const std::uint32_t version{r.u32()};
  if (version != kModelFormatVersion) {
    throw Error{ErrorCode::InvalidModelFile,
                "unsupported format version " + std::to_string(version)};
  }
  CastorModel model;
  model.params.config = read_config(r);
  model.params.series_length = r.u64();
  const std::uint32_t banks{r.u32()};
  if (banks > 2) {
    throw Error{ErrorCode::InvalidModelFile, "too many representation banks"};
  }
  for (std::uint32_t b{0}; b < banks; ++b) {
    model.params.banks.push_back(read_bank(r));
  }
  if (r.u8() != 0) {
    model.classifier = read_classifier(r);
  }
  if (!r.done()) {
    throw Error{ErrorCode::InvalidModelFile, "trailing bytes after model"};
  }
  return model;
}

void save_model(const CastorModel& model, const std::filesystem::path& path) {
  const std::string bytes{serialize_model(model)};
  std::ofstream out{path, std::ios::binary | std::ios::trunc};
  if (!out) {
    throw Error{ErrorCode::IoError, "cannot write " + path.string()};
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error{ErrorCode::IoError, "write failed for " + path.string()};
  }
}

CastorModel load_model(const std::filesystem::path& path) {
  std::ifstream in{path, std::ios::binary};
  if (!in) {
    throw Error{ErrorCode::IoError, "cannot open " + path.string()};
  }
  const std::string bytes{std::istreambuf_iterator<char>{in}, std::istreambuf_iterator<char>{}};
  return deserialize_model(bytes);
}

nlohmann::json config_to_json(const CastorConfig& c) {
  return {
      {"groups", c.groups},
      {"shapelets", c.shapelets},
      {"shapelet_length", c.shapelet_length},
      {"rho_lower", c.rho_lower},
      {"rho_upper", c.rho_upper},
      {"rho_norm", c.rho_norm},
      {"use_diff", c.use_diff},
      {"min_mode", to_string(c.min_mode)},
      {"max_mode", to_string(c.max_mode)},
      {"occurrence", to_string(c.occurrence)},
      {"norm_scope", to_string(c.norm_scope)},
      {"seed", c.seed},
  };
}

nlohmann::json model_to_json(const CastorModel& model) {
  nlohmann::json banks = nlohmann::json::array();
  for (const auto& b : model.params.banks) {
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t g{0}; g < b.groups; ++g) {
      for (std::size_t j{0}; j < b.shapelets; ++j) {
        for (std::size_t e{0}; e < b.exponents; ++e) {
          const std::size_t idx{b.index(g, j, e)};
          const auto v{b.shapelet_values(idx)};
          entries.push_back({{"group", g},
                             {"shapelet", j},
                             {"exponent", e},
                             {"dilation", RepresentationBank::dilation(e)},
                             {"normalized", b.normalized[idx] != 0},
                             {"threshold", b.thresholds[idx]},
                             {"values", std::vector<double>(v.begin(), v.end())}});
        }
      }
    }
    banks.push_back({{"representation", to_string(b.representation)},
                     {"groups", b.groups},
                     {"shapelets", b.shapelets},
                     {"exponents", b.exponents},
                     {"shapelet_length", b.shapelet_length},
                     {"series_length", b.series_length},
                     {"entries", std::move(entries)}});
  }
  nlohmann::json out{{"format", "CASTOR01"},
                     {"version", kModelFormatVersion},
                     {"config", config_to_json(model.params.config)},
                     {"series_length", model.params.series_length},
                     {"num_features", model.params.num_features()},
                     {"banks", std::move(banks)}};
  if (model.classifier) {
    const RidgeModel& m{*model.classifier};
    out["classifier"] = {{"vocabulary", m.vocabulary},
                         {"scaler",
                          {{"kind", to_string(m.scaler.kind)},
                           {"mean", m.scaler.mean},
                           {"std", m.scaler.std},
                           {"zero_fraction", m.scaler.zero_fraction},
                           {"epsilon", m.scaler.epsilon}}},
                         {"alphas", m.alphas},
                         {"loocv_errors", m.loocv_errors},
                         {"alpha", m.alpha},
                         {"features", m.features},
                         {"outputs", m.outputs},
                         {"intercepts", m.intercepts},
                         {"weights", m.weights}};
  } else {
    out["classifier"] = nullptr;
  }
  return out;
}

}  // namespace castor
