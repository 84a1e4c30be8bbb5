#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "abmc/dataset.hpp"
#include "abmc/rng.hpp"
#include "abmc/types.hpp"

namespace abmc::testing {

/// d-dimensional Gaussian-mean model: y_i ~ N(theta, s^2 I). Item log
/// densities are quadratic in theta, so second-order control variates are
/// exact. Conjugate with a N(m0, tau^2 I) prior.
class GaussianMeanModel {
 public:
  GaussianMeanModel(Matrix observations, double noise_sd, ParamVec prior_mean,
                    double prior_sd)
      : obs_(std::move(observations)),
        noise_sd_(noise_sd),
        prior_mean_(std::move(prior_mean)),
        prior_sd_(prior_sd) {}

  long n_items() const { return obs_.rows(); }
  long dim() const { return obs_.cols(); }

  double item_loglik(long i, const ParamVec& theta) const {
    ++item_evals_;
    const double d = static_cast<double>(dim());
    const double q = (obs_.row(i).transpose() - theta).squaredNorm() / (noise_sd_ * noise_sd_);
    return -0.5 * q - d * std::log(noise_sd_) - 0.5 * d * std::log(2.0 * M_PI);
  }

  void item_derivs(long i, const ParamVec& theta, double& value, Vector& grad,
                   Matrix& hess) const {
    value = item_loglik(i, theta);
    grad = (obs_.row(i).transpose() - theta) / (noise_sd_ * noise_sd_);
    hess = -Matrix::Identity(dim(), dim()) / (noise_sd_ * noise_sd_);
  }

  double full_loglik(const ParamVec& theta) const {
    double acc = 0.0;
    for (long i = 0; i < n_items(); ++i) acc += item_loglik(i, theta);
    return acc;
  }

  double prior_logpdf(const ParamVec& theta) const {
    const double d = static_cast<double>(dim());
    const double q = (theta - prior_mean_).squaredNorm() / (prior_sd_ * prior_sd_);
    return -0.5 * q - d * std::log(prior_sd_) - 0.5 * d * std::log(2.0 * M_PI);
  }

  /// Exact posterior of the conjugate normal-mean model.
  void posterior(Vector& mean, double& var) const {
    const double prec = static_cast<double>(n_items()) / (noise_sd_ * noise_sd_) +
                        1.0 / (prior_sd_ * prior_sd_);
    var = 1.0 / prec;
    const Vector data_sum = obs_.colwise().sum().transpose();
    mean = (data_sum / (noise_sd_ * noise_sd_) + prior_mean_ / (prior_sd_ * prior_sd_)) / prec;
  }

  const ParamVec& prior_mean() const { return prior_mean_; }
  long long item_evals() const { return item_evals_; }

 private:
  Matrix obs_;
  double noise_sd_;
  ParamVec prior_mean_;
  double prior_sd_;
  mutable long long item_evals_ = 0;
};

/// Discrete ABC toy embedded in the real line: the prior is flat on
/// [-0.5, 1.5], a point theta acts as the Bernoulli parameter selector
/// round(theta) in {0, 1}, and the single observation is Bernoulli(p_state).
/// With S(y) = y and epsilon = 0 the ABC posterior mass of state 1 is
/// exactly p1 / (p0 + p1) when y0 = 1.
class DiscreteBernoulliToy {
 public:
  DiscreteBernoulliToy(double p0, double p1) : p0_(p0), p1_(p1) {}

  long dim() const { return 1; }
  long summary_dim() const { return 1; }

  Dataset simulate(const ParamVec& theta, RngStream& rng) const {
    ++sim_calls_;
    const double p = state_of(theta) == 1 ? p1_ : p0_;
    Dataset d;
    d.response.resize(1);
    d.response(0) = rng.bernoulli(p) ? 1.0 : 0.0;
    d.covariates.resize(1, 0);
    return d;
  }

  Vector summarize(const Dataset& d) const { return d.response; }

  double prior_logpdf(const ParamVec& theta) const {
    return (theta(0) >= -0.5 && theta(0) <= 1.5)
               ? std::log(0.5)
               : -std::numeric_limits<double>::infinity();
  }

  ParamVec prior_sample(RngStream& rng) const {
    ParamVec t(1);
    t(0) = rng.uniform(-0.5, 1.5);
    return t;
  }

  static int state_of(const ParamVec& theta) { return theta(0) >= 0.5 ? 1 : 0; }

  double exact_posterior_one() const { return p1_ / (p0_ + p1_); }

  long long sim_calls() const { return sim_calls_; }
  void reset_sim_calls() { sim_calls_ = 0; }

 private:
  double p0_, p1_;
  mutable long long sim_calls_ = 0;
};

/// Simulator whose summary is exactly Gaussian: S(y) is the mean of n_obs
/// iid N(theta, noise_sd^2) draws, so S ~ N(theta, noise_sd^2 / n_obs) and
/// the analytic synthetic likelihood is available in closed form.
class GaussianSummarySim {
 public:
  GaussianSummarySim(long n_obs, double noise_sd, double prior_sd)
      : n_obs_(n_obs), noise_sd_(noise_sd), prior_sd_(prior_sd) {}

  long dim() const { return 1; }
  long summary_dim() const { return 1; }

  Dataset simulate(const ParamVec& theta, RngStream& rng) const {
    ++sim_calls_;
    Dataset d;
    d.response.resize(n_obs_);
    for (long i = 0; i < n_obs_; ++i) d.response(i) = rng.normal(theta(0), noise_sd_);
    d.covariates.resize(n_obs_, 0);
    return d;
  }

  Vector summarize(const Dataset& d) const {
    Vector s(1);
    s(0) = d.response.mean();
    return s;
  }

  double prior_logpdf(const ParamVec& theta) const {
    return -0.5 * theta(0) * theta(0) / (prior_sd_ * prior_sd_) - std::log(prior_sd_) -
           0.5 * std::log(2.0 * M_PI);
  }

  ParamVec prior_sample(RngStream& rng) const {
    ParamVec t(1);
    t(0) = rng.normal(0.0, prior_sd_);
    return t;
  }

  double summary_var() const { return noise_sd_ * noise_sd_ / static_cast<double>(n_obs_); }

  /// Exact synthetic-likelihood posterior N(mean, var) given observed s0:
  /// SL(theta) = N(s0; theta, summary_var), prior N(0, prior_sd^2).
  void analytic_posterior(double s0, double& mean, double& var) const {
    const double prec = 1.0 / summary_var() + 1.0 / (prior_sd_ * prior_sd_);
    var = 1.0 / prec;
    mean = (s0 / summary_var()) / prec;
  }

  long long sim_calls() const { return sim_calls_; }
  void reset_sim_calls() { sim_calls_ = 0; }

 private:
  long n_obs_;
  double noise_sd_;
  double prior_sd_;
  mutable long long sim_calls_ = 0;
};

}  // namespace abmc::testing
