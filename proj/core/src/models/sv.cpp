#include "abmc/models/sv.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "abmc/stats.hpp"

namespace abmc::models {

double acf(const Vector& y, long k, bool* degenerate) {
  const long n = y.size();
  if (n < 1) throw std::invalid_argument("acf: empty series");
  if (k < 1 || k >= n) throw std::invalid_argument("acf: need 1 <= k < N");
  if (degenerate) *degenerate = false;
  const double mean = y.mean();
  const double denom = (y.array() - mean).square().sum();
  if (denom <= 0.0) {
    if (degenerate) *degenerate = true;
    return 0.0;
  }
  double num = 0.0;
  for (long i = 0; i + k < n; ++i) num += (y(i) - mean) * (y(i + k) - mean);
  return num / denom;
}

namespace {

double summed_acf5(const Vector& series, bool* degenerate) {
  double acc = 0.0;
  for (long k = 1; k <= 5; ++k) {
    bool deg = false;
    acc += acf(series, k, &deg);
    if (deg) {
      if (degenerate) *degenerate = true;
      return 0.0;
    }
  }
  return acc;
}

}  // namespace

SummaryVector sv_summaries(const Vector& y) {
  const long n = y.size();
  if (n < 7) throw std::invalid_argument("sv_summaries: need N >= 7");
  SummaryVector out;

  const Vector y2 = y.array().square().matrix();
  out.s(0) = y2.mean();
  const double var = (y2.array() - y2.mean()).square().sum() / static_cast<double>(n - 1);
  out.s(1) = std::sqrt(var);

  bool deg = (var <= 0.0);
  out.s(2) = deg ? 0.0 : summed_acf5(y2, &deg);

  std::vector<double> y2v(y2.data(), y2.data() + n);
  const double taus[3] = {0.1, 0.5, 0.9};
  for (int t = 0; t < 3; ++t) {
    const double cut = quantile(y2v, taus[t]);
    Vector b(n);
    for (long i = 0; i < n; ++i) b(i) = (y2(i) < cut) ? 1.0 : 0.0;
    bool bdeg = false;
    out.s(3 + t) = summed_acf5(b, &bdeg);
    deg = deg || bdeg;
  }
  out.degenerate = deg;
  return out;
}

Vector sv_simulate(const ParamVec& theta, long n, RngStream& rng) {
  if (theta.size() != 3) throw std::invalid_argument("sv_simulate: theta has 3 components");
  if (n < 2) throw std::invalid_argument("sv_simulate: need N >= 2");
  const double t1 = theta(0), t2 = theta(1), t3 = theta(2);
  if (!(std::abs(t1) < 1.0)) {
    throw std::invalid_argument("sv_simulate: |theta1| < 1 required for stationarity");
  }
  Vector y(n);
  double x = rng.normal(0.0, std::sqrt(1.0 / (1.0 - t1 * t1)));
  const double e3 = std::exp(t3);
  y(0) = std::sqrt(std::exp(t2 + e3 * x)) * rng.normal();
  for (long i = 1; i < n; ++i) {
    x = t1 * x + rng.normal();
    y(i) = std::sqrt(std::exp(t2 + e3 * x)) * rng.normal();
  }
  return y;
}

double SvModel::prior_logpdf(const ParamVec& theta) const {
  if (theta.size() != 3) throw std::invalid_argument("SvModel: theta has 3 components");
  const double t1 = theta(0);
  if (t1 < 0.0 || t1 > 1.0) return -std::numeric_limits<double>::infinity();
  // Unif[0,1] contributes log 1 = 0; theta2, theta3 are standard normal.
  const double c = -0.5 * std::log(2.0 * M_PI);
  return (c - 0.5 * theta(1) * theta(1)) + (c - 0.5 * theta(2) * theta(2));
}

ParamVec SvModel::prior_sample(RngStream& rng) const {
  ParamVec theta(3);
  theta(0) = rng.uniform();
  theta(1) = rng.normal();
  theta(2) = rng.normal();
  return theta;
}

ParamVec SvModel::prior_mean() const {
  ParamVec theta(3);
  theta << 0.5, 0.0, 0.0;
  return theta;
}

}  // namespace abmc::models
