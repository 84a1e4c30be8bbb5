#include "abmc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace abmc {

Vector sample_mean(const Matrix& rows) {
  if (rows.rows() < 1) throw std::invalid_argument("sample_mean: empty sample");
  return rows.colwise().mean();
}

Matrix sample_covariance(const Matrix& rows) {
  const auto n = rows.rows();
  if (n < 2) throw std::invalid_argument("sample_covariance: need >= 2 rows");
  Matrix centered = rows.rowwise() - rows.colwise().mean();
  return (centered.transpose() * centered) / static_cast<double>(n - 1);
}

double sample_variance(const Vector& x) {
  const auto n = x.size();
  if (n < 2) throw std::invalid_argument("sample_variance: need >= 2 entries");
  const double m = x.mean();
  return (x.array() - m).square().sum() / static_cast<double>(n - 1);
}

Matrix scatter_around(const Matrix& rows, const Vector& center) {
  const auto n = rows.rows();
  if (n < 1) throw std::invalid_argument("scatter_around: empty sample");
  Matrix centered = rows.rowwise() - center.transpose();
  return (centered.transpose() * centered) / static_cast<double>(n);
}

Matrix cholesky_with_jitter(const Matrix& m, double jitter) {
  Matrix a = m;
  a.diagonal().array() += jitter;
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("cholesky_with_jitter: matrix not positive definite");
  }
  return llt.matrixL();
}

double mvn_logpdf(const Vector& x, const Vector& mu, const Matrix& sigma,
                  double jitter, bool* ok) {
  if (ok) *ok = true;
  Matrix a = sigma;
  a.diagonal().array() += jitter;
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) {
    if (ok) *ok = false;
    return -std::numeric_limits<double>::infinity();
  }
  const Matrix l = llt.matrixL();
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    if (!(l(i, i) > 0.0) || !std::isfinite(l(i, i))) {
      if (ok) *ok = false;
      return -std::numeric_limits<double>::infinity();
    }
    logdet += std::log(l(i, i));
  }
  const Vector z = llt.matrixL().solve(x - mu);
  const double k = static_cast<double>(x.size());
  return -0.5 * z.squaredNorm() - logdet - 0.5 * k * std::log(2.0 * M_PI);
}

Vector mvn_sample(const Vector& mu, const Matrix& chol_lower, RngStream& rng) {
  Vector z(mu.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  return mu + chol_lower * z;
}

Vector mad(const Matrix& rows) {
  const auto n = rows.rows();
  if (n < 1) throw std::invalid_argument("mad: empty sample");
  Vector out(rows.cols());
  std::vector<double> col(static_cast<size_t>(n));
  for (Eigen::Index j = 0; j < rows.cols(); ++j) {
    for (Eigen::Index i = 0; i < n; ++i) col[static_cast<size_t>(i)] = rows(i, j);
    const double med = quantile(col, 0.5);
    for (auto& v : col) v = std::abs(v - med);
    out(j) = quantile(col, 0.5);
  }
  return out;
}

double quantile(std::vector<double> x, double tau) {
  if (x.empty()) throw std::invalid_argument("quantile: empty input");
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("quantile: tau outside (0,1)");
  std::sort(x.begin(), x.end());
  const double h = (static_cast<double>(x.size()) - 1.0) * tau;
  const auto lo = static_cast<size_t>(std::floor(h));
  if (lo + 1 >= x.size()) return x.back();
  const double frac = h - std::floor(h);
  return x[lo] + frac * (x[lo + 1] - x[lo]);
}

std::vector<long> multinomial(long m, const Vector& weights, RngStream& rng) {
  const auto n = weights.size();
  if (n < 1) throw std::invalid_argument("multinomial: no categories");
  if (m < 0) throw std::invalid_argument("multinomial: negative trial count");
  std::vector<double> cdf(static_cast<size_t>(n));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = weights(i);
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("multinomial: weights must be finite and >= 0");
    }
    acc += w;
    cdf[static_cast<size_t>(i)] = acc;
  }
  if (!(acc > 0.0)) throw std::invalid_argument("multinomial: zero total weight");
  std::vector<long> counts(static_cast<size_t>(n), 0);
  for (long t = 0; t < m; ++t) {
    const double u = rng.uniform() * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    size_t idx = static_cast<size_t>(it - cdf.begin());
    if (idx >= counts.size()) idx = counts.size() - 1;
    ++counts[idx];
  }
  return counts;
}

}  // namespace abmc
