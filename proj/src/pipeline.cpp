#include "castor/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "castor/error.hpp"
#include "castor/rng.hpp"
#include "castor/transform.hpp"

namespace castor {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr std::uint64_t kFoldKey{0x666f6c64};  // "fold"
constexpr std::uint64_t kFitKey{0x666974};     // "fit"

}  // namespace

std::uint64_t fit_seed(std::uint64_t master, std::size_t repeat, std::size_t fold) {
  return derive_seed(master, {kFitKey, repeat, fold});
}

std::uint64_t fold_seed(std::uint64_t master, std::size_t repeat) {
  return derive_seed(master, {kFoldKey, repeat});
}

CastorModel fit_model(const LabeledDataset& train, const PipelineOptions& options,
                      FitTimings* timings) {
  FitTimings local;
  auto start{Clock::now()};
  CastorModel model;
  model.params = fit_params(train, options.config, options.threads);
  local.params_seconds = seconds_since(start);

  start = Clock::now();
  const FeatureMatrix features{transform(train.series(), model.params, options.threads)};
  local.transform_seconds = seconds_since(start);

  start = Clock::now();
  model.classifier =
      fit_classifier(features, train.labels(), train.vocabulary(), options.classifier);
  local.classifier_seconds = seconds_since(start);
  if (timings) {
    *timings = local;
  }
  return model;
}

Prediction predict(const CastorModel& model, const SeriesBatch& series, std::size_t threads) {
  if (!model.classifier) {
    throw Error{ErrorCode::InvalidModelFile, "model has no fitted classifier"};
  }
  return predict(*model.classifier, transform(series, model.params, threads));
}

RunReport evaluate(const LabeledDataset& dataset, const PipelineOptions& options,
                   std::size_t folds, std::size_t repeats) {
  if (folds < 1) {
    throw Error{ErrorCode::InvalidFoldCount, "fold count must be >= 1"};
  }
  if (repeats < 1) {
    throw Error{ErrorCode::InvalidConfig, "repeat count must be >= 1"};
  }
  options.config.validate();
  const auto start{Clock::now()};

  RunReport report;
  report.config = options.config;
  report.scaler = options.classifier.scaler;
  report.alphas = options.classifier.alphas;
  report.seed = options.config.seed;
  report.folds = folds;
  report.repeats = repeats;

  for (std::size_t r{0}; r < repeats; ++r) {
    FoldAssignment assignment;
    if (folds > 1) {
      assignment = stratified_kfold(dataset, static_cast<int>(folds), fold_seed(report.seed, r));
      report.stratified = report.stratified && assignment.stratified;
    }
    for (std::size_t f{0}; f < folds; ++f) {
      std::vector<std::size_t> train_idx;
      std::vector<std::size_t> test_idx;
      if (folds == 1) {
        train_idx.resize(dataset.size());
        for (std::size_t i{0}; i < dataset.size(); ++i) {
          train_idx[i] = i;
        }
        test_idx = train_idx;
      } else {
        train_idx = assignment.train_indices(static_cast<int>(f));
        test_idx = assignment.test_indices(static_cast<int>(f));
      }
      const LabeledDataset train{dataset.subset(train_idx)};
      const LabeledDataset test{dataset.subset(test_idx)};

      PipelineOptions fold_options{options};
      fold_options.config.seed = fit_seed(report.seed, r, f);
      FoldResult result;
      result.repeat = r;
      result.fold = f;
      result.train_size = train.size();
      result.test_size = test.size();
      const CastorModel model{fit_model(train, fold_options, &result.timings)};
      report.num_features = model.params.num_features();

      const auto predict_start{Clock::now()};
      const Prediction prediction{predict(model, test.series(), options.threads)};
      result.predict_seconds = seconds_since(predict_start);
      result.accuracy = accuracy(prediction.labels, test.labels());
      report.results.push_back(result);
    }
  }

  double sum{0.0};
  for (const auto& r : report.results) {
    sum += r.accuracy;
  }
  report.mean_accuracy = sum / static_cast<double>(report.results.size());
  double sq{0.0};
  for (const auto& r : report.results) {
    sq += (r.accuracy - report.mean_accuracy) * (r.accuracy - report.mean_accuracy);
  }
  report.std_accuracy = std::sqrt(sq / static_cast<double>(report.results.size()));
  report.total_seconds = seconds_since(start);
  return report;
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : results) {
    rows.push_back({{"repeat", r.repeat},
                    {"fold", r.fold},
                    {"train_size", r.train_size},
                    {"test_size", r.test_size},
                    {"accuracy", r.accuracy},
                    {"params_seconds", r.timings.params_seconds},
                    {"transform_seconds", r.timings.transform_seconds},
                    {"classifier_seconds", r.timings.classifier_seconds},
                    {"predict_seconds", r.predict_seconds}});
  }
  return {{"config", config_to_json(config)},
          {"scaler", to_string(scaler)},
          {"alphas", alphas},
          {"seed", seed},
          {"folds", folds},
          {"repeats", repeats},
          {"stratified", stratified},
          {"num_features", num_features},
          {"results", std::move(rows)},
          {"mean_accuracy", mean_accuracy},
          {"std_accuracy", std_accuracy},
          {"total_seconds", total_seconds}};
}

std::string RunReport::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "repeat,fold,train_size,test_size,accuracy,params_seconds,transform_seconds,"
         "classifier_seconds,predict_seconds\n";
  for (const auto& r : results) {
    out << r.repeat << ',' << r.fold << ',' << r.train_size << ',' << r.test_size << ','
        << r.accuracy << ',' << r.timings.params_seconds << ',' << r.timings.transform_seconds
        << ',' << r.timings.classifier_seconds << ',' << r.predict_seconds << '\n';
  }
  return out.str();
}

LabeledDataset generate_synthetic(const SyntheticSpec& spec) {
  if (spec.classes < 2 || spec.samples < spec.classes || spec.length < 32) {
    throw Error{ErrorCode::InvalidConfig,
                "synthetic data needs >= 2 classes, >= 1 sample per class and length >= 32"};
  }
  const std::size_t m{spec.length};
  const std::size_t width{std::max<std::size_t>(8, m / 8)};
  const std::size_t region{m / spec.classes};

  std::vector<std::string> vocabulary;
  for (std::size_t c{0}; c < spec.classes; ++c) {
    vocabulary.push_back(std::to_string(c + 1));
  }
  SeriesBatch series{spec.samples, m};
  std::vector<int> labels(spec.samples);
  for (std::size_t i{0}; i < spec.samples; ++i) {
    const std::size_t c{i % spec.classes};
    labels[i] = static_cast<int>(c);
    Rng rng{derive_seed(spec.seed, {i})};
    auto values{series[i]};
    for (double& v : values) {
      v = spec.noise * rng.normal();
    }
    // Region [c * region, (c + 1) * region), clipped so the template fits.
    const std::size_t lo{std::min(c * region, m - width)};
    const std::size_t hi{std::max(lo, std::min((c + 1) * region, m) - std::min(width, m))};
    const std::size_t start{lo + rng.below(hi - lo + 1)};
    for (std::size_t t{0}; t < width; ++t) {
      const double x{static_cast<double>(t) / static_cast<double>(width - 1)};
      double shape{0.0};
      switch (c % 4) {
        case 0: shape = 1.0 - std::abs(2.0 * x - 1.0); break;          // spike
        case 1: shape = 1.0; break;                                     // step
        case 2: shape = -(1.0 - std::abs(2.0 * x - 1.0)); break;       // dip
        default: shape = std::sin(2.0 * std::numbers::pi * 2.0 * x); break;  // burst
      }
      values[start + t] += spec.amplitude * shape;
    }
  }
  return LabeledDataset{std::move(series), std::move(labels), std::move(vocabulary)};
}

std::vector<AblationPoint> ablation_points(const std::string& axis, const CastorConfig& base,
                                           const AblationGrid& grid) {
  std::vector<AblationPoint> points;
  const auto fmt{[](double v) {
    std::ostringstream s;
    s << v;
    return s.str();
  }};
  if (axis == "gk") {
    for (std::size_t g{2}; g < grid.product; g *= 2) {
      if (grid.product % g != 0) {
        continue;
      }
      CastorConfig c{base};
      c.groups = g;
      c.shapelets = grid.product / g;
      points.push_back({"g=" + std::to_string(g) + ";k=" + std::to_string(c.shapelets), c});
    }
  } else if (axis == "counting") {
    for (const auto occ : {OccurrenceMode::Independent, OccurrenceMode::Competing}) {
      for (const auto lo : {CountMode::Hard, CountMode::Soft}) {
        for (const auto hi : {CountMode::Hard, CountMode::Soft}) {
          CastorConfig c{base};
          c.min_mode = lo;
          c.max_mode = hi;
          c.occurrence = occ;
          points.push_back({"min=" + std::string{to_string(lo)} + ";max=" +
                                std::string{to_string(hi)} + ";occurrence=" +
                                std::string{to_string(occ)},
                            c});
        }
      }
    }
  } else if (axis == "occurrence") {
    for (const auto occ : {OccurrenceMode::Independent, OccurrenceMode::Competing}) {
      CastorConfig c{base};
      c.occurrence = occ;
      points.push_back({"occurrence=" + std::string{to_string(occ)}, c});
    }
  } else if (axis == "rho") {
    for (const double lo : grid.lower_grid) {
      for (const double hi : grid.upper_grid) {
        if (lo > hi) {
          continue;
        }
        CastorConfig c{base};
        c.rho_lower = lo;
        c.rho_upper = hi;
        points.push_back({"lower=" + fmt(lo) + ";upper=" + fmt(hi), c});
      }
    }
  } else if (axis == "norm") {
    for (const double p : grid.norm_grid) {
      for (const std::size_t l : grid.length_grid) {
        CastorConfig c{base};
        c.rho_norm = p;
        c.shapelet_length = l;
        points.push_back({"norm=" + fmt(p) + ";l=" + std::to_string(l), c});
      }
    }
  } else if (axis == "diff") {
    for (const bool diff : {false, true}) {
      for (const std::size_t g : grid.group_grid) {
        CastorConfig c{base};
        c.use_diff = diff;
        c.groups = g;
        points.push_back(
            {std::string{"diff="} + (diff ? "on" : "off") + ";g=" + std::to_string(g), c});
      }
    }
  } else {
    throw Error{ErrorCode::InvalidConfig,
                "unknown ablation axis '" + axis +
                    "' (expected gk, counting, occurrence, rho, norm, diff)"};
  }
  return points;
}

std::vector<AblationRow> run_ablation(const LabeledDataset& dataset,
                                      const std::vector<AblationPoint>& points,
                                      const PipelineOptions& base, std::size_t folds,
                                      std::size_t repeats) {
  std::vector<AblationRow> rows;
  for (const auto& point : points) {
    PipelineOptions options{base};
    options.config = point.config;
    options.config.seed = base.config.seed;
    const RunReport report{evaluate(dataset, options, folds, repeats)};
    rows.push_back({point.label, report.mean_accuracy, report.std_accuracy, report.total_seconds});
  }
  return rows;
}

LabeledDataset replicate_samples(const LabeledDataset& dataset, std::size_t factor) {
  std::vector<std::size_t> indices;
  for (std::size_t i{0}; i < dataset.size(); ++i) {
    for (std::size_t r{0}; r < factor; ++r) {
      indices.push_back(i);
    }
  }
  return dataset.subset(indices);
}

LabeledDataset tile_series(const LabeledDataset& dataset, std::size_t factor) {
  const std::size_t m{dataset.series_length()};
  SeriesBatch tiled{dataset.size(), m * factor};
  for (std::size_t i{0}; i < dataset.size(); ++i) {
    const auto src{dataset.series()[i]};
    auto dst{tiled[i]};
    for (std::size_t r{0}; r < factor; ++r) {
      std::ranges::copy(src, dst.begin() + static_cast<std::ptrdiff_t>(r * m));
    }
  }
  return LabeledDataset{std::move(tiled), dataset.labels(), dataset.vocabulary()};
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n{static_cast<double>(x.size())};
  double mx{0.0};
  double my{0.0};
  for (std::size_t i{0}; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy{0.0};
  double sxx{0.0};
  for (std::size_t i{0}; i < x.size(); ++i) {
    const double dx{std::log(x[i]) - mx};
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

BenchResult run_bench(const LabeledDataset& dataset, const CastorConfig& config, ScaleAxis axis,
                      const std::vector<std::size_t>& factors, std::size_t threads,
                      std::size_t runs) {
  BenchResult result;
  std::vector<double> xs;
  std::vector<double> ys;
  for (const std::size_t factor : factors) {
    if (factor < 1) {
      throw Error{ErrorCode::InvalidConfig, "scale factors must be >= 1"};
    }
    const LabeledDataset scaled{axis == ScaleAxis::Samples ? replicate_samples(dataset, factor)
                                                           : tile_series(dataset, factor)};
    std::vector<double> times;
    for (std::size_t run{0}; run < std::max<std::size_t>(1, runs); ++run) {
      const auto start{Clock::now()};
      const CastorParams params{fit_params(scaled, config, threads)};
      const FeatureMatrix features{transform(scaled.series(), params, threads)};
      times.push_back(seconds_since(start));
      if (features.rows != scaled.size()) {
        throw Error{ErrorCode::InvalidFeatures, "transform row count mismatch"};
      }
    }
    std::ranges::sort(times);
    const double median{times[times.size() / 2]};
    result.rows.push_back({factor, scaled.size(), scaled.series_length(), median});
    xs.push_back(static_cast<double>(factor));
    ys.push_back(median);
  }
  result.slope = xs.size() >= 2 ? log_log_slope(xs, ys) : 0.0;
  return result;
}

}  // namespace castor
