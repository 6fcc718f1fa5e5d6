#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <map>
#include <sstream>

#include "castor/dataset.hpp"
#include "castor/error.hpp"
#include "castor/pipeline.hpp"

using namespace castor;

namespace {

LabeledDataset parse(const std::string& text) {
  std::istringstream in{text};
  return parse_ucr(in, "test");
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected castor::Error");
  return ErrorCode::InvalidConfig;
}

}  // namespace

TEST_CASE("parse two-line tab file") {
  const auto data{parse("1\t0.0\t1.0\t2.0\n2\t2.0\t1.0\t0.0\n")};
  CHECK(data.size() == 2);
  CHECK(data.series_length() == 3);
  CHECK(data.vocabulary() == std::vector<std::string>{"1", "2"});
  CHECK(data.labels() == std::vector<int>{0, 1});
  CHECK(data.series()[1][0] == 2.0);
}

TEST_CASE("vocabulary follows first appearance, comma separators and CRLF accepted") {
  const auto data{parse("b,1,2,3\r\na,3,2,1\r\n\nb,0,0,1\r\n")};
  CHECK(data.vocabulary() == std::vector<std::string>{"b", "a"});
  CHECK(data.labels() == std::vector<int>{0, 1, 0});
}

TEST_CASE("ragged rows are rejected") {
  CHECK(code_of([] { parse("1\t1\t2\t3\t4\n2\t1\t2\t3\t4\t5\n"); }) == ErrorCode::RaggedDataset);
}

TEST_CASE("malformed values and degenerate datasets") {
  CHECK(code_of([] { parse("1\t1\tx\t3\n2\t1\t2\t3\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse("1\t1\t2\t3\n1\t1\t2\t3\n"); }) == ErrorCode::InvalidDataset);
  CHECK(code_of([] { parse("1\t1\t2\t3\n"); }) == ErrorCode::InvalidDataset);
  CHECK(code_of([] { parse("1\t1\tnan\t3\n2\t1\t2\t3\n"); }) != ErrorCode::IoError);
  CHECK(code_of([] { load_ucr_tsv("/nonexistent/file.tsv"); }) == ErrorCode::IoError);
}

TEST_CASE("generator output round-trips through the TSV writer") {
  SyntheticSpec spec;
  spec.samples = 10;
  spec.length = 40;
  const auto data{generate_synthetic(spec)};
  std::stringstream buf;
  write_ucr(data, buf);
  const auto back{parse_ucr(buf)};
  CHECK(back.size() == 10);
  CHECK(back.series().values() == data.series().values());
  for (std::size_t i{0}; i < back.size(); ++i) {
    CHECK(back.vocabulary()[back.labels()[i]] == data.vocabulary()[data.labels()[i]]);
  }
}

TEST_CASE("first-order difference") {
  const std::vector<double> a{1, 2, 3, 4};
  CHECK(first_order_difference(a) == std::vector<double>{1, 1, 1});
  const std::vector<double> b{0, 5, 1};
  CHECK(first_order_difference(b) == std::vector<double>{5, -4});
  const std::vector<double> c{7, 7, 7, 7};
  CHECK(first_order_difference(c) == std::vector<double>{0, 0, 0});
  const std::vector<double> tiny{1, 2};
  CHECK(code_of([&] { first_order_difference(tiny); }) == ErrorCode::SeriesTooShort);
}

namespace {

LabeledDataset counted(std::vector<int> labels) {
  SeriesBatch series{labels.size(), 4};
  for (std::size_t i{0}; i < labels.size(); ++i) {
    for (std::size_t t{0}; t < 4; ++t) series[i][t] = static_cast<double>(i + t);
  }
  return LabeledDataset{std::move(series), std::move(labels), {"a", "b"}};
}

}  // namespace

TEST_CASE("stratified folds: 10 samples, 2 classes, 5 folds") {
  const auto data{counted({0, 0, 0, 0, 0, 1, 1, 1, 1, 1})};
  const auto folds{stratified_kfold(data, 5, 3)};
  CHECK(folds.stratified);
  for (int f{0}; f < 5; ++f) {
    const auto test{folds.test_indices(f)};
    REQUIRE(test.size() == 2);
    CHECK(data.labels()[test[0]] != data.labels()[test[1]]);
    CHECK(folds.train_indices(f).size() == 8);
  }
  CHECK(stratified_kfold(data, 5, 3).fold_of == folds.fold_of);
}

TEST_CASE("stratified folds: class counts {5,4}, 3 folds stay within one") {
  const auto data{counted({0, 0, 0, 0, 0, 1, 1, 1, 1})};
  for (std::uint64_t seed{0}; seed < 20; ++seed) {
    const auto folds{stratified_kfold(data, 3, seed)};
    for (int c{0}; c < 2; ++c) {
      std::vector<int> per(3, 0);
      for (std::size_t i{0}; i < data.size(); ++i) {
        if (data.labels()[i] == c) ++per[folds.fold_of[i]];
      }
      CHECK(*std::ranges::max_element(per) - *std::ranges::min_element(per) <= 1);
    }
  }
}

TEST_CASE("fold count validation and unstratified fallback") {
  const auto data{counted({0, 0, 0, 1, 1, 1})};
  CHECK(code_of([&] { stratified_kfold(data, 1, 0); }) == ErrorCode::InvalidFoldCount);
  CHECK(code_of([&] { stratified_kfold(data, 7, 0); }) == ErrorCode::InvalidFoldCount);
  const auto folds{stratified_kfold(data, 4, 0)};
  CHECK_FALSE(folds.stratified);
  std::map<int, int> sizes;
  for (int f : folds.fold_of) ++sizes[f];
  CHECK(sizes.size() == 4);
}

TEST_CASE("subset keeps the full vocabulary") {
  const auto data{counted({0, 1, 0, 1})};
  const std::vector<std::size_t> idx{0, 2};
  const auto sub{data.subset(idx)};
  CHECK(sub.vocabulary() == data.vocabulary());
  CHECK(sub.size() == 2);
  CHECK(sub.differenced().length() == 3);
}
