#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace castor::oracle {

std::vector<double> distance_profile(std::span<const double> shapelet, bool normalized,
                                     std::size_t dilation, std::span<const double> series,
                                     std::size_t padding) {
  const double nan{std::numeric_limits<double>::quiet_NaN()};
  std::vector<double> padded(series.size() + 2 * padding, nan);
  std::ranges::copy(series, padded.begin() + static_cast<std::ptrdiff_t>(padding));

  const std::size_t l{shapelet.size()};
  const std::size_t span{(l - 1) * dilation + 1};
  std::vector<double> out;
  for (std::size_t s{0}; s + span <= padded.size(); ++s) {
    std::vector<double> w;
    std::vector<double> v;
    for (std::size_t j{0}; j < l; ++j) {
      const double x{padded[s + j * dilation]};
      if (!std::isnan(x)) {
        w.push_back(x);
        v.push_back(shapelet[j]);
      }
    }
    if (normalized) {
      double mean{0.0};
      for (double x : w) mean += x;
      mean /= static_cast<double>(w.size());
      double var{0.0};
      for (double x : w) var += (x - mean) * (x - mean);
      const double sd{std::sqrt(var / static_cast<double>(w.size()))};
      for (double& x : w) x = sd < 1e-13 ? 0.0 : (x - mean) / sd;
    }
    double sum{0.0};
    for (std::size_t q{0}; q < w.size(); ++q) {
      sum += (v[q] - w[q]) * (v[q] - w[q]);
    }
    out.push_back(std::sqrt(sum) * static_cast<double>(l) / static_cast<double>(w.size()));
  }
  return out;
}

namespace {

std::size_t winner(const std::vector<std::vector<double>>& dp, std::size_t i, bool lowest) {
  std::size_t best{0};
  for (std::size_t j{1}; j < dp.size(); ++j) {
    if (lowest ? dp[j][i] < dp[best][i] : dp[j][i] > dp[best][i]) best = j;
  }
  return best;
}

}  // namespace

double min_aggregate(const std::vector<std::vector<double>>& dp, std::size_t j, bool soft) {
  double total{0.0};
  for (std::size_t i{0}; i < dp[0].size(); ++i) {
    if (winner(dp, i, true) == j) total += soft ? dp[j][i] : 1.0;
  }
  return total;
}

double max_aggregate(const std::vector<std::vector<double>>& dp, std::size_t j, bool soft) {
  double total{0.0};
  for (std::size_t i{0}; i < dp[0].size(); ++i) {
    if (winner(dp, i, false) == j) total += soft ? dp[j][i] : 1.0;
  }
  return total;
}

double occurrence(const std::vector<std::vector<double>>& dp, std::size_t j, double lambda,
                  bool competing) {
  double total{0.0};
  for (std::size_t i{0}; i < dp[0].size(); ++i) {
    if (dp[j][i] < lambda && (!competing || winner(dp, i, true) == j)) total += 1.0;
  }
  return total;
}

double loocv_error(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double alpha) {
  const Eigen::Index n{x.rows()};
  double total{0.0};
  for (Eigen::Index out{0}; out < n; ++out) {
    Eigen::MatrixXd xt(n - 1, x.cols());
    Eigen::MatrixXd yt(n - 1, y.cols());
    for (Eigen::Index i{0}, r{0}; i < n; ++i) {
      if (i == out) continue;
      xt.row(r) = x.row(i);
      yt.row(r) = y.row(i);
      ++r;
    }
    const Eigen::RowVectorXd xm{xt.colwise().mean()};
    const Eigen::RowVectorXd ym{yt.colwise().mean()};
    const Eigen::MatrixXd xc{xt.rowwise() - xm};
    const Eigen::MatrixXd yc{yt.rowwise() - ym};
    const Eigen::MatrixXd a{xc.transpose() * xc +
                            alpha * Eigen::MatrixXd::Identity(x.cols(), x.cols())};
    const Eigen::MatrixXd w{a.ldlt().solve(xc.transpose() * yc)};
    const Eigen::RowVectorXd pred{(x.row(out) - xm) * w + ym};
    total += (y.row(out) - pred).squaredNorm();
  }
  return total;
}

bool close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-12});
}

}  // namespace castor::oracle
