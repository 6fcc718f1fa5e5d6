#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "castor/classifier.hpp"
#include "castor/dataset.hpp"
#include "castor/model_io.hpp"
#include "castor/params.hpp"

namespace castor {

struct PipelineOptions {
  CastorConfig config;
  ClassifierOptions classifier;
  std::size_t threads{0};
};

// Seed of the fit for (repeat, fold); `fit` alone uses repeat 0, fold 0.
std::uint64_t fit_seed(std::uint64_t master, std::size_t repeat, std::size_t fold);
std::uint64_t fold_seed(std::uint64_t master, std::size_t repeat);

struct FitTimings {
  double params_seconds{0.0};
  double transform_seconds{0.0};
  double classifier_seconds{0.0};
};

// params -> transform -> scaler -> ridge. options.config.seed is used as is.
CastorModel fit_model(const LabeledDataset& train, const PipelineOptions& options,
                      FitTimings* timings = nullptr);

Prediction predict(const CastorModel& model, const SeriesBatch& series, std::size_t threads = 0);

struct FoldResult {
  std::size_t repeat{0};
  std::size_t fold{0};
  std::size_t train_size{0};
  std::size_t test_size{0};
  double accuracy{0.0};
  FitTimings timings;
  double predict_seconds{0.0};
};

struct RunReport {
  CastorConfig config;
  ScalerKind scaler{ScalerKind::Sparse};
  std::vector<double> alphas;
  std::uint64_t seed{0};
  std::size_t folds{0};
  std::size_t repeats{0};
  bool stratified{true};
  std::size_t num_features{0};
  std::vector<FoldResult> results;
  double mean_accuracy{0.0};
  double std_accuracy{0.0};
  double total_seconds{0.0};

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

// Repeated stratified k-fold. folds == 1 trains and tests on the full set.
// Per repeat, folds come from fold_seed(seed, repeat) and each fit uses
// fit_seed(seed, repeat, fold), so every config evaluated with the same seed
// sees the same splits.
RunReport evaluate(const LabeledDataset& dataset, const PipelineOptions& options,
                   std::size_t folds, std::size_t repeats);

struct SyntheticSpec {
  std::size_t classes{2};
  std::size_t samples{100};
  std::size_t length{128};
  std::uint64_t seed{1};
  double amplitude{3.0};
  double noise{1.0};
};

// White noise plus one class-specific template per sample, placed uniformly
// inside the class's own region; see docs/formats.md for the recipe.
LabeledDataset generate_synthetic(const SyntheticSpec& spec);

// ---- ablation ----

struct AblationPoint {
  std::string label;
  CastorConfig config;
};

struct AblationGrid {
  std::size_t product{2048};
  std::vector<double> lower_grid{0.01, 0.025, 0.05, 0.1};
  std::vector<double> upper_grid{0.1, 0.15, 0.2};
  std::vector<double> norm_grid{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<std::size_t> length_grid{7, 9, 11};
  std::vector<std::size_t> group_grid{16, 32, 64};
};

// Axes: gk, counting, occurrence, rho, norm, diff. Throws InvalidConfig for others.
std::vector<AblationPoint> ablation_points(const std::string& axis, const CastorConfig& base,
                                           const AblationGrid& grid = {});

struct AblationRow {
  std::string label;
  double mean_accuracy{0.0};
  double std_accuracy{0.0};
  double seconds{0.0};
};

std::vector<AblationRow> run_ablation(const LabeledDataset& dataset,
                                      const std::vector<AblationPoint>& points,
                                      const PipelineOptions& base, std::size_t folds,
                                      std::size_t repeats);

// ---- scaling benchmark ----

enum class ScaleAxis { Samples, Length };

// Each sample repeated `factor` times (consecutively).
LabeledDataset replicate_samples(const LabeledDataset& dataset, std::size_t factor);
// Each series concatenated with itself `factor` times.
LabeledDataset tile_series(const LabeledDataset& dataset, std::size_t factor);

struct BenchRow {
  std::size_t factor{1};
  std::size_t samples{0};
  std::size_t length{0};
  double seconds{0.0};  // median over runs of fit_params + transform
};

struct BenchResult {
  std::vector<BenchRow> rows;
  double slope{0.0};  // least-squares slope of log(seconds) on log(factor)
};

BenchResult run_bench(const LabeledDataset& dataset, const CastorConfig& config, ScaleAxis axis,
                      const std::vector<std::size_t>& factors, std::size_t threads,
                      std::size_t runs = 3);

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace castor
