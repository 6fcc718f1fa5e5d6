#include "doctest.h"

#include <cstring>
#include <filesystem>

#include "castor/error.hpp"
#include "castor/model_io.hpp"
#include "castor/pipeline.hpp"

using namespace castor;

namespace {

struct Fixture {
  LabeledDataset data;
  CastorModel model;

  Fixture() {
    SyntheticSpec spec;
    spec.samples = 20;
    spec.length = 48;
    spec.classes = 3;
    data = generate_synthetic(spec);
    PipelineOptions options;
    options.config.groups = 4;
    options.config.shapelets = 4;
    options.config.seed = 5;
    options.threads = 1;
    model = fit_model(data, options);
  }
};

ErrorCode load_error(const std::string& bytes) {
  try {
    deserialize_model(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidConfig;
}

}  // namespace

TEST_CASE("model round trip through bytes and disk") {
  const Fixture fx;
  const std::string bytes{serialize_model(fx.model)};
  CHECK(bytes.compare(0, 8, "CASTOR01") == 0);
  const auto back{deserialize_model(bytes)};
  CHECK(back == fx.model);
  CHECK(serialize_model(back) == bytes);

  const auto path{std::filesystem::temp_directory_path() / "castor_roundtrip.bin"};
  save_model(fx.model, path);
  const auto loaded{load_model(path)};
  std::filesystem::remove(path);
  const auto a{predict(fx.model, fx.data.series(), 1)};
  const auto b{predict(loaded, fx.data.series(), 1)};
  CHECK(a.labels == b.labels);
  CHECK(std::memcmp(a.scores.data(), b.scores.data(), a.scores.size() * sizeof(double)) == 0);
}

TEST_CASE("params-only models round trip") {
  Fixture fx;
  fx.model.classifier.reset();
  const auto back{deserialize_model(serialize_model(fx.model))};
  CHECK(back == fx.model);
  CHECK_THROWS_AS(predict(back, fx.data.series(), 1), Error);
}

TEST_CASE("corrupted containers are rejected") {
  const Fixture fx;
  const std::string bytes{serialize_model(fx.model)};
  CHECK(load_error(bytes.substr(0, bytes.size() - 1)) == ErrorCode::InvalidModelFile);
  CHECK(load_error(bytes.substr(0, 20)) == ErrorCode::InvalidModelFile);
  std::string flipped{bytes};
  flipped[bytes.size() / 2] ^= 0x10;
  CHECK(load_error(flipped) == ErrorCode::InvalidModelFile);
  std::string magic{bytes};
  magic[0] = 'X';
  CHECK(load_error(magic) == ErrorCode::InvalidModelFile);
  CHECK(load_error("") == ErrorCode::InvalidModelFile);
  CHECK_THROWS_AS(load_model("/nonexistent/model.bin"), Error);
}

TEST_CASE("JSON export mirrors the container") {
  const Fixture fx;
  const auto j = model_to_json(fx.model);
  CHECK(j.at("format") == "CASTOR01");
  CHECK(j.at("config").at("groups") == 4);
  CHECK(j.at("banks").size() == 2);
  CHECK(j.at("classifier").at("vocabulary").size() == 3);
  CHECK(j.at("banks")[0].at("entries").size() == fx.model.params.banks[0].entries());
}
