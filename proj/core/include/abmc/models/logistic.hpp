#pragma once

#include <string>
#include <vector>

#include "abmc/dataset.hpp"
#include "abmc/rng.hpp"
#include "abmc/types.hpp"

namespace abmc::models {

/// Isotropic Gaussian prior N(mean, sd^2 I).
struct GaussianPrior {
  Vector mean;
  double sd = 2.0;

  double logpdf(const ParamVec& theta) const;
  ParamVec sample(RngStream& rng) const;
};

/// Bernoulli regression with logistic link. The design matrix carries the
/// intercept as its leftmost column; the prior defaults to N(0, 4 I).
class LogisticModel {
 public:
  LogisticModel(Matrix design, Vector responses, GaussianPrior prior);

  long n_items() const { return design_.rows(); }
  long dim() const { return design_.cols(); }
  const Matrix& design() const { return design_; }
  const Vector& responses() const { return responses_; }
  const GaussianPrior& prior() const { return prior_; }

  /// log f(y_i | theta); overflow-safe for large |x_i . theta|.
  double item_loglik(long i, const ParamVec& theta) const;

  /// Value, gradient and Hessian of one item's log density.
  void item_derivs(long i, const ParamVec& theta, double& value, Vector& grad,
                   Matrix& hess) const;

  /// Same derivatives for a synthetic item with label-signed covariate z
  /// (the y=1 item whose covariate row is z).
  void synthetic_derivs(const Vector& z, const ParamVec& theta, double& value,
                        Vector& grad, Matrix& hess) const;

  /// Label-signed covariate z_i = (2 y_i - 1) x_i.
  Vector cv_feature(long i) const;
  Matrix cv_features() const;

  double full_loglik(const ParamVec& theta) const;
  double subset_loglik(const std::vector<long>& idx, const ParamVec& theta) const;
  double weighted_loglik(const std::vector<long>& idx, const std::vector<double>& w,
                         const ParamVec& theta) const;

  Vector full_grad(const ParamVec& theta) const;
  Matrix full_hess(const ParamVec& theta) const;

  double prior_logpdf(const ParamVec& theta) const { return prior_.logpdf(theta); }

  /// Deterministic damped Newton refinement of the MLE from the prior mean.
  ParamVec mle(long max_iter = 100, double grad_tol = 1e-10) const;

  /// Item log-density evaluations so far (one per item touched; a full-data
  /// evaluation adds N). Used for cost accounting.
  long long item_evals() const { return item_evals_; }
  void reset_item_evals() { item_evals_ = 0; }

 private:
  Matrix design_;
  Vector responses_;
  GaussianPrior prior_;
  mutable long long item_evals_ = 0;
};

/// Simulated design per the benchmark setup: intercept column of ones, the
/// remaining covariates iid Unif(0,1), responses Bernoulli(logistic(x.theta)).
LogisticModel generate_logistic(long n, long d, const ParamVec& theta_true,
                                RngStream& rng);

/// Model over covariates loaded from CSV (intercept column prepended here).
LogisticModel logistic_from_dataset(const Dataset& data);

double logistic_sigmoid(double eta);

/// log(1 + exp(eta)) without overflow.
double log1p_exp(double eta);

}  // namespace abmc::models
