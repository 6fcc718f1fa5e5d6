#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "castor/transform.hpp"

namespace castor {

enum class ScalerKind : std::uint8_t { Sparse = 0, Standard = 1, None = 2 };

std::string_view to_string(ScalerKind kind);
ScalerKind parse_scaler_kind(std::string_view text);

// Per-feature statistics. For the sparse scaler they describe sqrt(x) and
// x' = [x != 0] * (sqrt(x) - mean) / (std + epsilon), epsilon = zero_fraction^4 + 1e-8.
// Standard: x' = (x - mean) / (std + epsilon), epsilon = 1 for constant columns.
struct ScalerStats {
  ScalerKind kind{ScalerKind::Sparse};
  std::vector<double> mean;
  std::vector<double> std;
  std::vector<double> zero_fraction;
  std::vector<double> epsilon;

  std::size_t size() const noexcept { return mean.size(); }
  double apply(std::size_t feature, double x) const;
  bool operator==(const ScalerStats&) const = default;
};

ScalerStats fit_scaler(const FeatureMatrix& features, ScalerKind kind = ScalerKind::Sparse);
// Scaled copy, column-major for the solver.
Eigen::MatrixXd apply_scaler(const ScalerStats& stats, const FeatureMatrix& features);

inline const std::vector<double> kDefaultAlphas{0.01, 1.0, 10.0};

// One-vs-rest +/-1 targets; binary problems use a single column (+1 = class 1).
Eigen::MatrixXd encode_targets(std::span<const int> labels, std::size_t num_classes);

// Total squared leave-one-out residual per alpha, from one eigendecomposition
// of the centered Gram matrix (whichever side is smaller). The intercept is
// unpenalized and the centering is part of each leave-one-out refit.
std::vector<double> ridge_loocv_errors(const Eigen::MatrixXd& features,
                                       const Eigen::MatrixXd& targets,
                                       std::span<const double> alphas);

struct RidgeSolution {
  Eigen::MatrixXd weights;       // features x outputs
  Eigen::RowVectorXd intercept;  // outputs
};

RidgeSolution solve_ridge(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets,
                          double alpha);

struct RidgeModel {
  std::vector<std::string> vocabulary;
  ScalerStats scaler;
  std::vector<double> alphas;
  std::vector<double> loocv_errors;
  double alpha{0.0};
  std::size_t features{0};
  std::size_t outputs{0};
  std::vector<double> weights;  // outputs x features, row-major
  std::vector<double> intercepts;

  std::size_t num_classes() const noexcept { return vocabulary.size(); }
  bool operator==(const RidgeModel&) const = default;
};

// Fits ridge on already-scaled features, picking the alpha with the lowest
// LOOCV error (first in grid order on ties). The returned scaler is empty.
RidgeModel fit_ridge_loocv(const Eigen::MatrixXd& scaled, std::span<const int> labels,
                           std::vector<std::string> vocabulary,
                           std::span<const double> alphas = kDefaultAlphas);

struct ClassifierOptions {
  ScalerKind scaler{ScalerKind::Sparse};
  std::vector<double> alphas{kDefaultAlphas};
};

// Scaler + ridge on raw transform output.
RidgeModel fit_classifier(const FeatureMatrix& features, std::span<const int> labels,
                          std::vector<std::string> vocabulary,
                          const ClassifierOptions& options = {});

struct Prediction {
  std::vector<int> labels;
  std::vector<std::string> tokens;
  std::size_t classes{0};
  std::vector<double> scores;  // rows x classes

  double score(std::size_t row, std::size_t cls) const { return scores[row * classes + cls]; }
};

// Scales with the model's scaler, scores every class, picks the argmax
// (lowest class index on ties).
Prediction predict(const RidgeModel& model, const FeatureMatrix& features);
Prediction predict_scaled(const RidgeModel& model, const Eigen::MatrixXd& scaled);

double accuracy(std::span<const int> predicted, std::span<const int> truth);

}  // namespace castor
