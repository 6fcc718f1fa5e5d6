#include "castor/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "castor/error.hpp"

namespace castor {

std::string_view to_string(ScalerKind kind) {
  switch (kind) {
    case ScalerKind::Sparse: return "sparse";
    case ScalerKind::Standard: return "standard";
    case ScalerKind::None: return "none";
  }
  return "unknown";
}

ScalerKind parse_scaler_kind(std::string_view text) {
  if (text == "sparse") return ScalerKind::Sparse;
  if (text == "standard") return ScalerKind::Standard;
  if (text == "none") return ScalerKind::None;
  throw Error{ErrorCode::InvalidConfig,
              "scaler must be sparse, standard or none, got " + std::string{text}};
}

double ScalerStats::apply(std::size_t f, double x) const {
  switch (kind) {
    case ScalerKind::Sparse:
      return x != 0.0 ? (std::sqrt(std::max(x, 0.0)) - mean[f]) / (std[f] + epsilon[f]) : 0.0;
    case ScalerKind::Standard:
      return (x - mean[f]) / (std[f] + epsilon[f]);
    case ScalerKind::None:
      return x;
  }
  return x;
}

ScalerStats fit_scaler(const FeatureMatrix& features, ScalerKind kind) {
  const std::size_t n{features.rows};
  const std::size_t cols{features.cols};
  ScalerStats stats;
  stats.kind = kind;
  stats.mean.assign(cols, 0.0);
  stats.std.assign(cols, 1.0);
  stats.zero_fraction.assign(cols, 0.0);
  stats.epsilon.assign(cols, 0.0);
  if (kind == ScalerKind::None || n == 0) {
    return stats;
  }

  const auto value{[&](std::size_t i, std::size_t f) {
    const double x{features(i, f)};
    return kind == ScalerKind::Sparse ? std::sqrt(std::max(x, 0.0)) : x;
  }};
  std::vector<double> sum(cols, 0.0);
  std::vector<double> zeros(cols, 0.0);
  for (std::size_t i{0}; i < n; ++i) {
    for (std::size_t f{0}; f < cols; ++f) {
      sum[f] += value(i, f);
      zeros[f] += features(i, f) == 0.0 ? 1.0 : 0.0;
    }
  }
  const auto count{static_cast<double>(n)};
  for (std::size_t f{0}; f < cols; ++f) {
    stats.mean[f] = sum[f] / count;
  }
  std::vector<double> sq(cols, 0.0);
  for (std::size_t i{0}; i < n; ++i) {
    for (std::size_t f{0}; f < cols; ++f) {
      const double d{value(i, f) - stats.mean[f]};
      sq[f] += d * d;
    }
  }
  for (std::size_t f{0}; f < cols; ++f) {
    stats.std[f] = std::sqrt(sq[f] / count);
    stats.zero_fraction[f] = zeros[f] / count;
    if (kind == ScalerKind::Sparse) {
      stats.epsilon[f] = std::pow(stats.zero_fraction[f], 4) + 1e-8;
    } else {
      stats.epsilon[f] = stats.std[f] == 0.0 ? 1.0 : 0.0;
    }
  }
  return stats;
}

Eigen::MatrixXd apply_scaler(const ScalerStats& stats, const FeatureMatrix& features) {
  if (stats.size() != features.cols) {
    throw Error{ErrorCode::FeatureDimensionMismatch,
                "scaler expects " + std::to_string(stats.size()) + " features, got " +
                    std::to_string(features.cols)};
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(features.rows),
                      static_cast<Eigen::Index>(features.cols));
  for (std::size_t f{0}; f < features.cols; ++f) {
    for (std::size_t i{0}; i < features.rows; ++i) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(f)) =
          stats.apply(f, features(i, f));
    }
  }
  return out;
}

Eigen::MatrixXd encode_targets(std::span<const int> labels, std::size_t num_classes) {
  const auto n{static_cast<Eigen::Index>(labels.size())};
  if (num_classes == 2) {
    Eigen::MatrixXd y(n, 1);
    for (Eigen::Index i{0}; i < n; ++i) {
      y(i, 0) = labels[static_cast<std::size_t>(i)] == 1 ? 1.0 : -1.0;
    }
    return y;
  }
  Eigen::MatrixXd y{Eigen::MatrixXd::Constant(n, static_cast<Eigen::Index>(num_classes), -1.0)};
  for (Eigen::Index i{0}; i < n; ++i) {
    y(i, labels[static_cast<std::size_t>(i)]) = 1.0;
  }
  return y;
}

namespace {

// Spectral form of the centered problem, shared across alphas.
// Dual (n <= F): K = Xc Xc' = Q diag(lambda) Q'; basis = Q.
// Primal (F < n): G = Xc' Xc = V diag(lambda) V'; basis = Xc V.
struct Spectrum {
  bool dual{true};
  Eigen::VectorXd lambda;
  Eigen::MatrixXd basis;      // n x r
  Eigen::MatrixXd rotation;   // V (primal only)
  Eigen::MatrixXd projected;  // basis' Yc
  Eigen::RowVectorXd x_mean;
  Eigen::RowVectorXd y_mean;
  Eigen::MatrixXd y_centered;
  Eigen::MatrixXd x_centered;

  Spectrum(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    x_mean = x.colwise().mean();
    y_mean = y.colwise().mean();
    x_centered = x.rowwise() - x_mean;
    y_centered = y.rowwise() - y_mean;
    const Eigen::Index n{x.rows()};
    const Eigen::Index f{x.cols()};
    dual = n <= f;
    if (dual) {
      Eigen::MatrixXd gram{Eigen::MatrixXd::Zero(n, n)};
      gram.selfadjointView<Eigen::Lower>().rankUpdate(x_centered);
      gram = gram.selfadjointView<Eigen::Lower>();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig{gram};
      lambda = eig.eigenvalues().cwiseMax(0.0);
      basis = eig.eigenvectors();
    } else {
      Eigen::MatrixXd gram{Eigen::MatrixXd::Zero(f, f)};
      gram.selfadjointView<Eigen::Lower>().rankUpdate(x_centered.transpose());
      gram = gram.selfadjointView<Eigen::Lower>();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig{gram};
      lambda = eig.eigenvalues().cwiseMax(0.0);
      rotation = eig.eigenvectors();
      basis = x_centered * rotation;
    }
    projected = basis.transpose() * y_centered;
  }

  // Per-component shrinkage applied to basis' y for fitted values, and the
  // matching leverage contribution per component.
  Eigen::VectorXd fitted_factor(double alpha) const {
    if (dual) {
      return lambda.array() / (lambda.array() + alpha);
    }
    return (lambda.array() + alpha).inverse();
  }

  double loocv_error(double alpha) const {
    const Eigen::VectorXd factor{fitted_factor(alpha)};
    const Eigen::MatrixXd fitted{basis * factor.asDiagonal() * projected};
    const Eigen::VectorXd leverage{
        (basis.array().square().matrix() * factor).array() +
        1.0 / static_cast<double>(basis.rows())};
    const Eigen::MatrixXd residual{y_centered - fitted};
    double total{0.0};
    for (Eigen::Index i{0}; i < residual.rows(); ++i) {
      const double denom{1.0 - leverage(i)};
      total += residual.row(i).squaredNorm() / (denom * denom);
    }
    return total;
  }

  RidgeSolution solve(double alpha) const {
    const Eigen::VectorXd inv{(lambda.array() + alpha).inverse()};
    RidgeSolution out;
    if (dual) {
      out.weights = x_centered.transpose() * (basis * (inv.asDiagonal() * projected));
    } else {
      out.weights = rotation * (inv.asDiagonal() * projected);
    }
    out.intercept = y_mean - x_mean * out.weights;
    return out;
  }
};

void check_inputs(const Eigen::MatrixXd& x, std::size_t rows) {
  if (x.rows() < 2) {
    throw Error{ErrorCode::InsufficientData,
                "ridge needs at least 2 samples, got " + std::to_string(x.rows())};
  }
  if (static_cast<std::size_t>(x.rows()) != rows) {
    throw Error{ErrorCode::FeatureDimensionMismatch, "feature rows do not match target rows"};
  }
  if (!x.allFinite()) {
    throw Error{ErrorCode::InvalidFeatures, "non-finite feature value"};
  }
}

}  // namespace

std::vector<double> ridge_loocv_errors(const Eigen::MatrixXd& features,
                                       const Eigen::MatrixXd& targets,
                                       std::span<const double> alphas) {
  check_inputs(features, static_cast<std::size_t>(targets.rows()));
  const Spectrum spectrum{features, targets};
  std::vector<double> errors;
  errors.reserve(alphas.size());
  for (const double alpha : alphas) {
    errors.push_back(spectrum.loocv_error(alpha));
  }
  return errors;
}

RidgeSolution solve_ridge(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets,
                          double alpha) {
  check_inputs(features, static_cast<std::size_t>(targets.rows()));
  return Spectrum{features, targets}.solve(alpha);
}

RidgeModel fit_ridge_loocv(const Eigen::MatrixXd& scaled, std::span<const int> labels,
                           std::vector<std::string> vocabulary, std::span<const double> alphas) {
  if (vocabulary.size() < 2) {
    throw Error{ErrorCode::InsufficientData, "need at least 2 classes"};
  }
  if (alphas.empty() || std::ranges::any_of(alphas, [](double a) { return !(a > 0.0); })) {
    throw Error{ErrorCode::InvalidConfig, "alphas must be positive"};
  }
  check_inputs(scaled, labels.size());
  const Eigen::MatrixXd targets{encode_targets(labels, vocabulary.size())};
  const Spectrum spectrum{scaled, targets};

  RidgeModel model;
  model.vocabulary = std::move(vocabulary);
  model.alphas.assign(alphas.begin(), alphas.end());
  for (const double alpha : alphas) {
    model.loocv_errors.push_back(spectrum.loocv_error(alpha));
  }
  const auto best{std::ranges::min_element(model.loocv_errors)};
  model.alpha = model.alphas[static_cast<std::size_t>(best - model.loocv_errors.begin())];

  const RidgeSolution solution{spectrum.solve(model.alpha)};
  model.features = static_cast<std::size_t>(scaled.cols());
  model.outputs = static_cast<std::size_t>(targets.cols());
  model.weights.resize(model.outputs * model.features);
  for (std::size_t c{0}; c < model.outputs; ++c) {
    for (std::size_t f{0}; f < model.features; ++f) {
      model.weights[c * model.features + f] =
          solution.weights(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(c));
    }
  }
  model.intercepts.assign(solution.intercept.data(),
                          solution.intercept.data() + solution.intercept.size());
  if (!std::ranges::all_of(model.weights, [](double w) { return std::isfinite(w); })) {
    throw Error{ErrorCode::InvalidFeatures, "ridge produced non-finite weights"};
  }
  return model;
}

RidgeModel fit_classifier(const FeatureMatrix& features, std::span<const int> labels,
                          std::vector<std::string> vocabulary, const ClassifierOptions& options) {
  ScalerStats scaler{fit_scaler(features, options.scaler)};
  const Eigen::MatrixXd scaled{apply_scaler(scaler, features)};
  RidgeModel model{fit_ridge_loocv(scaled, labels, std::move(vocabulary), options.alphas)};
  model.scaler = std::move(scaler);
  return model;
}

Prediction predict_scaled(const RidgeModel& model, const Eigen::MatrixXd& scaled) {
  if (static_cast<std::size_t>(scaled.cols()) != model.features) {
    throw Error{ErrorCode::FeatureDimensionMismatch,
                "model expects " + std::to_string(model.features) + " features, got " +
                    std::to_string(scaled.cols())};
  }
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      weights{model.weights.data(), static_cast<Eigen::Index>(model.outputs),
              static_cast<Eigen::Index>(model.features)};
  const Eigen::Map<const Eigen::RowVectorXd> intercepts{
      model.intercepts.data(), static_cast<Eigen::Index>(model.outputs)};
  const Eigen::MatrixXd raw{(scaled * weights.transpose()).rowwise() + intercepts};

  Prediction out;
  out.classes = model.num_classes();
  const auto n{static_cast<std::size_t>(scaled.rows())};
  out.scores.resize(n * out.classes);
  for (std::size_t i{0}; i < n; ++i) {
    const auto r{static_cast<Eigen::Index>(i)};
    if (model.outputs == 1) {
      out.scores[i * 2] = -raw(r, 0);
      out.scores[i * 2 + 1] = raw(r, 0);
    } else {
      for (std::size_t c{0}; c < out.classes; ++c) {
        out.scores[i * out.classes + c] = raw(r, static_cast<Eigen::Index>(c));
      }
    }
    std::size_t best{0};
    for (std::size_t c{1}; c < out.classes; ++c) {
      if (out.score(i, c) > out.score(i, best)) {
        best = c;
      }
    }
    out.labels.push_back(static_cast<int>(best));
    out.tokens.push_back(model.vocabulary[best]);
  }
  return out;
}

Prediction predict(const RidgeModel& model, const FeatureMatrix& features) {
  if (features.cols != model.features) {
    throw Error{ErrorCode::FeatureDimensionMismatch,
                "model expects " + std::to_string(model.features) + " features, got " +
                    std::to_string(features.cols)};
  }
  return predict_scaled(model, apply_scaler(model.scaler, features));
}

double accuracy(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size() || truth.empty()) {
    throw Error{ErrorCode::InvalidDataset, "accuracy needs equal, non-empty label lists"};
  }
  std::size_t hits{0};
  for (std::size_t i{0}; i < truth.size(); ++i) {
    hits += predicted[i] == truth[i] ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace castor
