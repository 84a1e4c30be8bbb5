#include "abmc/models/logistic.hpp"

#include <cmath>
#include <stdexcept>

namespace abmc::models {

double logistic_sigmoid(double eta) {
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

double log1p_exp(double eta) {
  if (eta > 0.0) return eta + std::log1p(std::exp(-eta));
  return std::log1p(std::exp(eta));
}

double GaussianPrior::logpdf(const ParamVec& theta) const {
  const double d = static_cast<double>(theta.size());
  const double q = (theta - mean).squaredNorm() / (sd * sd);
  return -0.5 * q - d * std::log(sd) - 0.5 * d * std::log(2.0 * M_PI);
}

ParamVec GaussianPrior::sample(RngStream& rng) const {
  ParamVec out(mean.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = rng.normal(mean(i), sd);
  return out;
}

LogisticModel::LogisticModel(Matrix design, Vector responses, GaussianPrior prior)
    : design_(std::move(design)), responses_(std::move(responses)), prior_(std::move(prior)) {
  if (design_.rows() != responses_.size() || design_.rows() < 1) {
    throw std::invalid_argument("LogisticModel: design/response size mismatch");
  }
  if (!design_.allFinite() || !responses_.allFinite()) {
    throw std::invalid_argument("LogisticModel: non-finite data");
  }
  for (Eigen::Index i = 0; i < responses_.size(); ++i) {
    if (responses_(i) != 0.0 && responses_(i) != 1.0) {
      throw std::invalid_argument("LogisticModel: responses must be 0/1");
    }
  }
}

double LogisticModel::item_loglik(long i, const ParamVec& theta) const {
  ++item_evals_;
  const double eta = design_.row(i).dot(theta);
  return responses_(i) * eta - log1p_exp(eta);
}

void LogisticModel::item_derivs(long i, const ParamVec& theta, double& value,
                                Vector& grad, Matrix& hess) const {
  ++item_evals_;
  const double eta = design_.row(i).dot(theta);
  const double s = logistic_sigmoid(eta);
  value = responses_(i) * eta - log1p_exp(eta);
  grad = (responses_(i) - s) * design_.row(i).transpose();
  hess = (-s * (1.0 - s)) * (design_.row(i).transpose() * design_.row(i));
}

void LogisticModel::synthetic_derivs(const Vector& z, const ParamVec& theta,
                                     double& value, Vector& grad, Matrix& hess) const {
  const double u = z.dot(theta);
  const double s = logistic_sigmoid(u);
  value = -log1p_exp(-u);
  grad = (1.0 - s) * z;
  hess = (-s * (1.0 - s)) * (z * z.transpose());
}

Vector LogisticModel::cv_feature(long i) const {
  return (2.0 * responses_(i) - 1.0) * design_.row(i).transpose();
}

Matrix LogisticModel::cv_features() const {
  Matrix z = design_;
  for (long i = 0; i < n_items(); ++i) z.row(i) *= (2.0 * responses_(i) - 1.0);
  return z;
}

double LogisticModel::full_loglik(const ParamVec& theta) const {
  item_evals_ += n_items();
  const Vector eta = design_ * theta;
  double acc = responses_.dot(eta);
  for (Eigen::Index i = 0; i < eta.size(); ++i) acc -= log1p_exp(eta(i));
  return acc;
}

double LogisticModel::subset_loglik(const std::vector<long>& idx,
                                    const ParamVec& theta) const {
  item_evals_ += static_cast<long long>(idx.size());
  double acc = 0.0;
  for (const long i : idx) {
    const double eta = design_.row(i).dot(theta);
    acc += responses_(i) * eta - log1p_exp(eta);
  }
  return acc;
}

double LogisticModel::weighted_loglik(const std::vector<long>& idx,
                                      const std::vector<double>& w,
                                      const ParamVec& theta) const {
  if (idx.size() != w.size()) {
    throw std::invalid_argument("weighted_loglik: index/weight size mismatch");
  }
  item_evals_ += static_cast<long long>(idx.size());
  double acc = 0.0;
  for (size_t k = 0; k < idx.size(); ++k) {
    const double eta = design_.row(idx[k]).dot(theta);
    acc += w[k] * (responses_(idx[k]) * eta - log1p_exp(eta));
  }
  return acc;
}

Vector LogisticModel::full_grad(const ParamVec& theta) const {
  const Vector eta = design_ * theta;
  Vector s(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) s(i) = logistic_sigmoid(eta(i));
  return design_.transpose() * (responses_ - s);
}

Matrix LogisticModel::full_hess(const ParamVec& theta) const {
  const Vector eta = design_ * theta;
  Vector w(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double s = logistic_sigmoid(eta(i));
    w(i) = s * (1.0 - s);
  }
  return -(design_.transpose() * w.asDiagonal() * design_);
}

ParamVec LogisticModel::mle(long max_iter, double grad_tol) const {
  ParamVec theta = prior_.mean;
  double ll = full_loglik(theta);
  for (long it = 0; it < max_iter; ++it) {
    const Vector g = full_grad(theta);
    if (g.lpNorm<Eigen::Infinity>() < grad_tol) break;
    const Matrix h = full_hess(theta);
    Matrix neg_h = -h;
    neg_h.diagonal().array() += 1e-10;
    Vector step = neg_h.ldlt().solve(g);
    // Damped update: halve the step until the log-likelihood improves.
    double scale = 1.0;
    bool moved = false;
    for (int half = 0; half < 40; ++half) {
      const ParamVec cand = theta + scale * step;
      const double cand_ll = full_loglik(cand);
      if (cand_ll >= ll) {
        theta = cand;
        ll = cand_ll;
        moved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!moved) break;
  }
  return theta;
}

LogisticModel generate_logistic(long n, long d, const ParamVec& theta_true,
                                RngStream& rng) {
  if (d < 1) throw std::invalid_argument("generate_logistic: d >= 1");
  if (theta_true.size() != d) {
    throw std::invalid_argument("generate_logistic: theta_true has wrong length");
  }
  Matrix x(n, d);
  x.col(0).setOnes();
  for (long i = 0; i < n; ++i) {
    for (long j = 1; j < d; ++j) x(i, j) = rng.uniform();
  }
  Vector y(n);
  for (long i = 0; i < n; ++i) {
    const double p = logistic_sigmoid(x.row(i).dot(theta_true));
    y(i) = rng.bernoulli(p) ? 1.0 : 0.0;
  }
  GaussianPrior prior{ParamVec::Zero(d), 2.0};
  return LogisticModel(std::move(x), std::move(y), std::move(prior));
}

LogisticModel logistic_from_dataset(const Dataset& data) {
  const long n = data.n();
  const long d = data.covariate_dim() + 1;
  Matrix x(n, d);
  x.col(0).setOnes();
  if (data.covariate_dim() > 0) x.rightCols(d - 1) = data.covariates;
  GaussianPrior prior{ParamVec::Zero(d), 2.0};
  return LogisticModel(std::move(x), data.response, std::move(prior));
}

}  // namespace abmc::models
