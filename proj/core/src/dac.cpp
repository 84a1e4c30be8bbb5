#include "abmc/dac.hpp"

#include <limits>
#include <stdexcept>
#include <string>

#include "abmc/stats.hpp"

namespace abmc::dac {

double SubposteriorTarget::logdensity(const ParamVec& theta) const {
  if (total_batches < 1) throw std::invalid_argument("SubposteriorTarget: J >= 1");
  const double prior = prior_logpdf(theta);
  if (prior == -std::numeric_limits<double>::infinity()) return prior;
  double ll = 0.0;
  if (batch_loglik) {
    ll = batch_loglik(batch, theta);
  } else {
    for (const long i : batch) ll += item_loglik(i, theta);
  }
  return ll + prior / static_cast<double>(total_batches);
}

double subposterior_logdensity(const SubposteriorTarget& target, const ParamVec& theta) {
  return target.logdensity(theta);
}

BatchDraws BatchDraws::from_chain(const mcmc::Chain& chain) {
  return from_samples(chain.post_burn_in());
}

BatchDraws BatchDraws::from_samples(Matrix samples) {
  if (samples.rows() < 2) {
    throw std::invalid_argument("BatchDraws: need >= 2 post-burn-in draws");
  }
  BatchDraws out;
  out.covariance = sample_covariance(samples);
  out.samples = std::move(samples);
  return out;
}

Matrix consensus_combine(const std::vector<BatchDraws>& draws) {
  if (draws.empty()) throw std::invalid_argument("consensus_combine: no batches");
  const long d = draws.front().samples.cols();
  long rows = draws.front().samples.rows();
  for (const auto& b : draws) {
    if (b.samples.cols() != d || b.covariance.rows() != d || b.covariance.cols() != d) {
      throw std::invalid_argument("consensus_combine: dimension mismatch across batches");
    }
    rows = std::min(rows, b.samples.rows());
  }

  // Precision weights W_j = (Sigma_j + jitter I)^-1.
  std::vector<Matrix> weights;
  weights.reserve(draws.size());
  Matrix weight_sum = Matrix::Zero(d, d);
  for (size_t j = 0; j < draws.size(); ++j) {
    Matrix cov = draws[j].covariance;
    const double jitter = 1e-8 * cov.trace() / static_cast<double>(d);
    cov.diagonal().array() += (jitter > 0.0 ? jitter : 1e-12);
    Eigen::LLT<Matrix> llt(cov);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error("consensus_combine: singular covariance in batch " +
                               std::to_string(j));
    }
    Matrix w = llt.solve(Matrix::Identity(d, d));
    weight_sum += w;
    weights.push_back(std::move(w));
  }
  Eigen::LLT<Matrix> total(weight_sum);
  if (total.info() != Eigen::Success) {
    throw std::runtime_error("consensus_combine: singular total precision");
  }

  Matrix combined(rows, d);
  for (long t = 0; t < rows; ++t) {
    Vector acc = Vector::Zero(d);
    for (size_t j = 0; j < draws.size(); ++j) {
      acc += weights[j] * draws[j].samples.row(t).transpose();
    }
    combined.row(t) = total.solve(acc).transpose();
  }
  return combined;
}

}  // namespace abmc::dac
