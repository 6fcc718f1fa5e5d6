#include "doctest.h"

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "castor/cli.hpp"
#include "json.hpp"

using namespace castor;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::initializer_list<std::string> args) {
  std::vector<const char*> argv{"castor"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code{run_cli(static_cast<int>(argv.size()), argv.data(), out, err)};
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in{p, std::ios::binary};
  return {std::istreambuf_iterator<char>{in}, {}};
}

struct TempDir {
  fs::path path;
  TempDir() : path{fs::temp_directory_path() / ("castor_cli_" + std::to_string(::getpid()))} {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("generate, fit twice, predict, export") {
  const TempDir dir;
  const auto data{dir / "train.tsv"};
  REQUIRE(cli({"generate", "-n", "30", "-m", "48", "--seed", "1", "-o", data}).code == 0);
  const auto a{cli({"fit", data, "-o", dir / "a.bin", "--seed", "7", "--groups", "4",
                    "--shapelets", "4", "--threads", "1"})};
  REQUIRE(a.code == 0);
  CHECK(a.out.find("features: ") != std::string::npos);
  REQUIRE(cli({"fit", data, "-o", dir / "b.bin", "--seed", "7", "--groups", "4", "--shapelets",
               "4", "--threads", "2"})
              .code == 0);
  CHECK(slurp(dir / "a.bin") == slurp(dir / "b.bin"));

  const auto p{cli({"predict", dir / "a.bin", data, "-o", dir / "pred.csv"})};
  REQUIRE(p.code == 0);
  CHECK(p.out.find("accuracy: ") != std::string::npos);
  CHECK(slurp(dir / "pred.csv").starts_with("index,predicted,actual,score_1,score_2\n"));

  const auto e{cli({"export-json", dir / "a.bin"})};
  REQUIRE(e.code == 0);
  CHECK(nlohmann::json::parse(e.out).at("format") == "CASTOR01");

  REQUIRE(cli({"transform", dir / "a.bin", data, "-o", dir / "features.csv"}).code == 0);
  CHECK(slurp(dir / "features.csv").starts_with("label,original/g0/e0/min/s0,"));
}

TEST_CASE("exit codes") {
  const TempDir dir;
  const auto data{dir / "train.tsv"};
  REQUIRE(cli({"generate", "-n", "10", "-m", "40", "-o", data}).code == 0);
  const auto even{cli({"fit", data, "-o", dir / "m.bin", "--shapelet-length", "8"})};
  CHECK(even.code == kExitUsage);
  CHECK(even.err.find("odd") != std::string::npos);
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"fit"}).code == kExitUsage);
  CHECK(cli({"fit", data, "-o", dir / "m.bin", "--min-mode", "medium"}).code == kExitUsage);
  CHECK(cli({"ablate", data, "--axis", "nope"}).code == kExitUsage);
  CHECK(cli({"fit", dir / "missing.tsv", "-o", dir / "m.bin"}).code == kExitData);
  std::ofstream{dir / "ragged.tsv"} << "1\t1\t2\t3\n2\t1\t2\n";
  CHECK(cli({"fit", dir / "ragged.tsv", "-o", dir / "m.bin"}).code == kExitData);
  std::ofstream{dir / "junk.bin"} << "not a model";
  CHECK(cli({"predict", dir / "junk.bin", data}).code == kExitData);
  CHECK(cli({"fit", data, "-o", dir / "m.bin", "--shapelet-length", "41"}).code == kExitData);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("evaluate reports") {
  const TempDir dir;
  const auto data{dir / "d.tsv"};
  REQUIRE(cli({"generate", "-n", "4", "-m", "40", "-o", data}).code == 0);
  const auto r{cli({"evaluate", data, "--folds", "2", "--repeats", "1", "--groups", "2",
                    "--shapelets", "2", "--json", dir / "r.json", "--csv", dir / "r.csv"})};
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "r.json"));
  CHECK(j.at("results").size() == 2);
  CHECK(r.out.find("runs: 2") != std::string::npos);
  const auto again{cli({"evaluate", data, "--folds", "2", "--repeats", "1", "--groups", "2",
                        "--shapelets", "2", "--json", dir / "r2.json"})};
  REQUIRE(again.code == 0);
  auto a = nlohmann::json::parse(slurp(dir / "r2.json"));
  auto b = j;
  for (auto* x : {&a, &b}) {
    x->erase("total_seconds");
    for (auto& row : (*x)["results"]) {
      for (const char* key : {"params_seconds", "transform_seconds", "classifier_seconds",
                              "predict_seconds"}) {
        row.erase(key);
      }
    }
  }
  CHECK(a == b);
}

TEST_CASE("ablate and bench emit CSV") {
  const TempDir dir;
  const auto data{dir / "d.tsv"};
  REQUIRE(cli({"generate", "-n", "8", "-m", "40", "-o", data}).code == 0);
  const auto a{cli({"ablate", data, "--axis", "occurrence", "--folds", "2", "--repeats", "1",
                    "--groups", "2", "--shapelets", "2"})};
  REQUIRE(a.code == 0);
  CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 3);
  const auto b{cli({"bench", data, "--axis", "m", "--factors", "1,2", "--runs", "1",
                    "--groups", "2", "--shapelets", "2"})};
  REQUIRE(b.code == 0);
  CHECK(b.out.starts_with("factor,n,m,seconds\n1,8,40,"));
  CHECK(b.err.find("slope: ") != std::string::npos);
  CHECK(cli({"bench", data, "--axis", "q"}).code == kExitUsage);
}
