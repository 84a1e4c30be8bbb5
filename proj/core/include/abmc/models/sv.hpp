#pragma once

#include "abmc/dataset.hpp"
#include "abmc/rng.hpp"
#include "abmc/types.hpp"

namespace abmc::models {

/// Lag-k autocorrelation with the divide-by-N variance normalization.
/// A zero-variance series yields 0 and sets *degenerate when provided.
double acf(const Vector& y, long k, bool* degenerate = nullptr);

/// Six-component summary of a series: mean and s.d. of y^2, the summed first
/// five autocorrelations of y^2, and of the binary indicator series cut at
/// the 0.1/0.5/0.9 quantiles of y^2.
struct SummaryVector {
  Eigen::Matrix<double, 6, 1> s;
  bool degenerate = false;
};

SummaryVector sv_summaries(const Vector& y);

/// Stochastic volatility series: latent AR(1) states x with coefficient
/// theta1, observations y_i = sqrt(exp(theta2 + exp(theta3) x_i)) w_i.
/// Requires |theta1| < 1.
Vector sv_simulate(const ParamVec& theta, long n, RngStream& rng);

/// Simulator-facing wrapper bundling the SV priors (theta1 ~ Unif[0,1],
/// theta2, theta3 ~ N(0,1)), simulation and summaries.
class SvModel {
 public:
  explicit SvModel(long series_length) : n_(series_length) {}

  long dim() const { return 3; }
  long summary_dim() const { return 6; }
  long series_length() const { return n_; }

  Dataset simulate(const ParamVec& theta, RngStream& rng) const {
    ++sim_calls_;
    Dataset d;
    d.response = sv_simulate(theta, n_, rng);
    d.covariates.resize(n_, 0);
    return d;
  }

  Vector summarize(const Dataset& data) const { return sv_summaries(data.response).s; }

  double prior_logpdf(const ParamVec& theta) const;
  ParamVec prior_sample(RngStream& rng) const;
  ParamVec prior_mean() const;

  long long sim_calls() const { return sim_calls_; }
  void reset_sim_calls() { sim_calls_ = 0; }

 private:
  long n_;
  mutable long long sim_calls_ = 0;
};

}  // namespace abmc::models
