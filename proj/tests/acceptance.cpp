// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "castor/classifier.hpp"
#include "castor/model_io.hpp"
#include "castor/parallel.hpp"
#include "castor/pipeline.hpp"
#include "castor/rng.hpp"
#include "castor/transform.hpp"
#include "oracle.hpp"

using namespace castor;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

int failures{0};

void report(int id, const char* title, const std::function<Outcome()>& check) {
  Outcome out;
  try {
    out = check();
  } catch (const std::exception& e) {
    out = {false, std::string{"exception: "} + e.what()};
  }
  std::printf("%s criterion %d (%s): %s\n", out.pass ? "PASS" : "FAIL", id, title,
              out.detail.c_str());
  std::fflush(stdout);
  failures += out.pass ? 0 : 1;
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Outcome distance_oracle() {
  const auto start{Clock::now()};
  std::mt19937_64 gen{2024};
  std::normal_distribution<double> dist;
  double worst{0.0};
  std::size_t checked{0};
  for (int trial{0}; trial < 1000; ++trial) {
    const std::size_t l{3 + 2 * (gen() % 5)};
    const std::size_t d{std::size_t{1} << (gen() % 4)};
    const std::size_t m{effective_length(l, d) + gen() % 120};
    const bool normalized{(gen() & 1) != 0};
    const std::size_t p{(gen() & 1) != 0 ? standard_padding(l, d) : 0};
    std::vector<double> t(m);
    for (double& x : t) x = dist(gen);
    std::vector<double> raw(l);
    for (double& x : raw) x = dist(gen);
    const auto s{make_shapelet(raw, d, normalized)};
    const auto fast{distance_profile(s, t, p)};
    const auto slow{oracle::distance_profile(s.values, normalized, d, t, p)};
    if (fast.size() != slow.size()) {
      return {false, fmt("size mismatch in case %d", trial)};
    }
    for (std::size_t i{0}; i < fast.size(); ++i) {
      const double rel{std::abs(fast[i] - slow[i]) /
                       std::max({std::abs(fast[i]), std::abs(slow[i]), 1e-12})};
      worst = std::max(worst, rel);
      ++checked;
    }
  }
  const double seconds{elapsed(start)};
  return {worst <= 1e-9 && seconds < 30.0,
          fmt("1000 cases, %zu values, max rel err %.2e, %.2f s", checked, worst, seconds)};
}

Outcome output_size() {
  std::size_t combos{0};
  std::vector<double> series;
  std::mt19937_64 gen{7};
  std::normal_distribution<double> dist;
  for (std::size_t l{3}; l <= 15; l += 2) {
    for (std::size_t d{1}; d <= 32; d *= 2) {
      for (std::size_t m{40}; m <= 400; ++m) {
        series.resize(m);
        for (double& x : series) x = dist(gen);
        const auto s{make_shapelet(std::vector<double>(l, 0.5), d, false)};
        const auto profile{distance_profile(s, series, standard_padding(l, d))};
        if (profile.size() != m || profile_length(m, l, d, standard_padding(l, d)) != m) {
          return {false, fmt("l=%zu d=%zu m=%zu gives %zu", l, d, m, profile.size())};
        }
        ++combos;
      }
    }
  }
  return {true, fmt("%zu (l, d, m) combinations, all o = m", combos)};
}

GroupProfileBlock random_block(std::mt19937_64& gen) {
  const std::size_t k{1 + gen() % 16};
  const std::size_t m{1 + gen() % 200};
  GroupProfileBlock block{k, m};
  std::uniform_real_distribution<double> dist{0.0, 10.0};
  for (double& x : block.values) {
    // A share of small integers forces ties.
    x = gen() % 4 == 0 ? static_cast<double>(gen() % 3) : dist(gen);
  }
  return block;
}

Outcome counting_conservation() {
  std::mt19937_64 gen{99};
  double worst{0.0};
  for (int trial{0}; trial < 200; ++trial) {
    const auto block{random_block(gen)};
    double hard_min{0.0};
    double hard_max{0.0};
    double soft_min{0.0};
    double soft_max{0.0};
    for (std::size_t j{0}; j < block.rows; ++j) {
      hard_min += min_aggregate(j, block, CountMode::Hard);
      hard_max += max_aggregate(j, block, CountMode::Hard);
      soft_min += min_aggregate(j, block, CountMode::Soft);
      soft_max += max_aggregate(j, block, CountMode::Soft);
    }
    double col_min{0.0};
    double col_max{0.0};
    for (std::size_t i{0}; i < block.cols; ++i) {
      double lo{block(0, i)};
      double hi{block(0, i)};
      for (std::size_t j{1}; j < block.rows; ++j) {
        lo = std::min(lo, block(j, i));
        hi = std::max(hi, block(j, i));
      }
      col_min += lo;
      col_max += hi;
    }
    const auto m{static_cast<double>(block.cols)};
    if (hard_min != m || hard_max != m) {
      return {false, fmt("block %d: hard sums %.0f / %.0f, m = %.0f", trial, hard_min, hard_max, m)};
    }
    worst = std::max({worst, std::abs(soft_min - col_min) / std::max(1.0, col_min),
                      std::abs(soft_max - col_max) / std::max(1.0, col_max)});
  }
  return {worst <= 1e-9, fmt("200 blocks, hard sums = m exactly, soft max rel err %.2e", worst)};
}

Outcome occurrence_ordering() {
  std::mt19937_64 gen{5};
  std::uniform_real_distribution<double> dist{0.0, 10.0};
  std::size_t checks{0};
  for (int trial{0}; trial < 200; ++trial) {
    const auto block{random_block(gen)};
    std::vector<double> lambda(block.rows);
    for (double& x : lambda) x = dist(gen);
    const std::vector<double> zero(block.rows, 0.0);
    for (std::size_t j{0}; j < block.rows; ++j) {
      const double comp{occurrence(j, block, lambda, OccurrenceMode::Competing)};
      const double ind{occurrence(j, block, lambda, OccurrenceMode::Independent)};
      if (!(comp <= ind && ind <= static_cast<double>(block.cols))) {
        return {false, fmt("block %d shapelet %zu: %.0f, %.0f, m = %zu", trial, j, comp, ind,
                           block.cols)};
      }
      if (occurrence(j, block, zero, OccurrenceMode::Independent) != 0.0 ||
          occurrence(j, block, zero, OccurrenceMode::Competing) != 0.0) {
        return {false, fmt("block %d: nonzero count at lambda = 0", trial)};
      }
      ++checks;
    }
  }
  return {true, fmt("%zu shapelet rows: competing <= independent <= m, lambda = 0 gives 0", checks)};
}

Outcome loocv_oracle() {
  std::mt19937_64 gen{31};
  std::normal_distribution<double> dist;
  double worst{0.0};
  int same_alpha{0};
  const std::vector<double> alphas{kDefaultAlphas};
  for (int trial{0}; trial < 50; ++trial) {
    const auto n{static_cast<Eigen::Index>(6 + gen() % 55)};
    const auto f{static_cast<Eigen::Index>(1 + gen() % 40)};
    const std::size_t classes{2 + gen() % 3};
    Eigen::MatrixXd x(n, f);
    for (Eigen::Index i{0}; i < x.size(); ++i) x.data()[i] = dist(gen);
    std::vector<int> labels(static_cast<std::size_t>(n));
    std::vector<std::string> vocab;
    for (std::size_t c{0}; c < classes; ++c) vocab.push_back(std::to_string(c));
    for (std::size_t i{0}; i < labels.size(); ++i) labels[i] = static_cast<int>(i % classes);
    const Eigen::MatrixXd y{encode_targets(labels, classes)};

    const auto model{fit_ridge_loocv(x, labels, vocab, alphas)};
    std::size_t best{0};
    std::vector<double> brute;
    for (std::size_t a{0}; a < alphas.size(); ++a) {
      brute.push_back(oracle::loocv_error(x, y, alphas[a]));
      const double rel{std::abs(model.loocv_errors[a] - brute[a]) /
                       std::max(std::abs(brute[a]), 1e-300)};
      worst = std::max(worst, rel);
      if (brute[a] < brute[best]) best = a;
    }
    same_alpha += model.alpha == alphas[best] ? 1 : 0;
  }
  return {worst <= 1e-8 && same_alpha == 50,
          fmt("50 problems, max rel err %.2e, same alpha in %d/50", worst, same_alpha)};
}

Outcome learnability() {
  const auto start{Clock::now()};
  SyntheticSpec spec;
  spec.samples = 200;
  spec.length = 128;
  spec.seed = 1;
  const auto data{generate_synthetic(spec)};
  PipelineOptions options;
  options.config.seed = 1;
  const auto real{evaluate(data, options, 5, 5)};

  std::vector<int> shuffled{data.labels()};
  Rng rng{77};
  rng.shuffle(std::span<int>{shuffled});
  const auto control{evaluate(data.with_labels(shuffled), options, 5, 5)};
  const double seconds{elapsed(start)};

  // Repeats reuse the same samples, so the binomial sigma uses one pass over n.
  const double chance{0.5};
  const double sigma{std::sqrt(chance * (1.0 - chance) / static_cast<double>(data.size()))};
  const bool within{std::abs(control.mean_accuracy - chance) <= 3.0 * sigma};
  const bool pass{real.mean_accuracy >= 0.95 && within && seconds < 60.0};
  return {pass, fmt("mean accuracy %.4f (>= 0.95), shuffled %.4f (chance 0.5 +/- %.4f), "
                    "%.1f s on %zu threads (< 60 s)",
                    real.mean_accuracy, control.mean_accuracy, 3.0 * sigma, seconds,
                    resolve_threads(0))};
}

Outcome competition_trend() {
  struct Setting {
    const char* name;
    std::size_t groups;
    std::size_t shapelets;
    double total{0.0};
  };
  std::vector<Setting> settings{{"g=32,k=8", 32, 8}, {"g=128,k=2", 128, 2}, {"g=2,k=128", 2, 128}};
  const auto start{Clock::now()};
  int runs{0};
  for (const std::uint64_t data_seed : {101, 102, 103}) {
    SyntheticSpec spec;
    spec.samples = 200;
    spec.length = 128;
    spec.seed = data_seed;
    spec.amplitude = 1.0;
    const auto data{generate_synthetic(spec)};
    for (std::uint64_t seed{0}; seed < 5; ++seed) {
      for (auto& s : settings) {
        PipelineOptions options;
        options.config.groups = s.groups;
        options.config.shapelets = s.shapelets;
        options.config.seed = seed;
        s.total += evaluate(data, options, 5, 1).mean_accuracy;
      }
      ++runs;
    }
  }
  for (auto& s : settings) s.total /= runs;
  const double balanced{settings[0].total};
  const bool pass{balanced + 0.005 >= settings[1].total && balanced + 0.005 >= settings[2].total};
  return {pass, fmt("mean accuracy %s %.4f, %s %.4f, %s %.4f (3 datasets x 5 seeds, %.1f s)",
                    settings[0].name, settings[0].total, settings[1].name, settings[1].total,
                    settings[2].name, settings[2].total, elapsed(start))};
}

Outcome scaling() {
  SyntheticSpec spec;
  spec.samples = 100;
  spec.length = 128;
  const auto base{generate_synthetic(spec)};
  const CastorConfig config;
  auto start{Clock::now()};
  const auto n{run_bench(base, config, ScaleAxis::Samples, {1, 2, 4, 8}, 0, 3)};
  const double n_seconds{elapsed(start)};

  spec.samples = 50;
  const auto short_base{generate_synthetic(spec)};
  start = Clock::now();
  const auto m{run_bench(short_base, config, ScaleAxis::Length, {1, 2, 4}, 0, 3)};
  const double m_seconds{elapsed(start)};

  const bool pass{n.slope >= 0.8 && n.slope <= 1.3 && m.slope >= 0.8 && m.slope <= 1.5 &&
                  n_seconds < 300.0 && m_seconds < 300.0};
  return {pass, fmt("slope vs n %.3f in [0.8, 1.3] (%.1f s), slope vs m %.3f in [0.8, 1.5] "
                    "(%.1f s)",
                    n.slope, n_seconds, m.slope, m_seconds)};
}

Outcome determinism() {
  SyntheticSpec spec;
  spec.samples = 40;
  spec.length = 96;
  spec.classes = 3;
  const auto data{generate_synthetic(spec)};
  const std::size_t max_threads{std::max<std::size_t>(1, std::thread::hardware_concurrency())};
  std::string reference_model;
  std::vector<double> reference_features;
  for (const std::size_t threads : {std::size_t{1}, std::size_t{4}, max_threads}) {
    PipelineOptions options;
    options.config.groups = 16;
    options.config.seed = 8;
    options.threads = threads;
    const std::string bytes{serialize_model(fit_model(data, options))};
    const auto features{
        transform(data.series(), deserialize_model(bytes).params, threads).values};
    if (reference_model.empty()) {
      reference_model = bytes;
      reference_features = features;
      continue;
    }
    if (bytes != reference_model ||
        std::memcmp(features.data(), reference_features.data(),
                    features.size() * sizeof(double)) != 0) {
      return {false, fmt("output differs at %zu threads", threads)};
    }
  }
  return {true, fmt("model (%zu bytes) and features identical for threads 1, 4, %zu",
                    reference_model.size(), max_threads)};
}

Outcome fig2_arithmetic() {
  SeriesBatch series{4, 4};
  const double values[4][4]{{0, 1, 2, 1}, {1, 0, 1, 2}, {2, 2, 0, 1}, {0, 3, 1, 1}};
  for (std::size_t i{0}; i < 4; ++i) {
    std::copy(values[i], values[i] + 4, series[i].begin());
  }
  const LabeledDataset data{std::move(series), {0, 0, 1, 1}, {"a", "b"}};
  CastorConfig config;
  config.groups = 5;
  config.shapelets = 4;
  config.shapelet_length = 3;
  config.use_diff = false;
  const auto params{fit_params(data, config, 1)};
  const auto features{transform(data.series(), params, 1)};
  const std::size_t exponents{params.banks.at(0).exponents};
  const bool pass{exponents == 1 && params.num_features() == 60 && features.cols == 60};
  return {pass, fmt("E = %zu, features per sample = %zu", exponents, features.cols)};
}

}  // namespace

int main() {
  report(1, "distance kernel vs brute force", distance_oracle);
  report(2, "standard-padded output size", output_size);
  report(3, "counting conservation", counting_conservation);
  report(4, "occurrence ordering", occurrence_ordering);
  report(5, "closed-form LOOCV vs refitting", loocv_oracle);
  report(6, "desk-scale learnability", learnability);
  report(7, "competition trade-off", competition_trend);
  report(8, "linear scaling", scaling);
  report(9, "determinism and thread invariance", determinism);
  report(10, "feature count of the g=5, k=4 example", fig2_arithmetic);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
