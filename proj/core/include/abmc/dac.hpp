#pragma once

#include <functional>
#include <vector>

#include "abmc/mcmc.hpp"
#include "abmc/types.hpp"

namespace abmc::dac {

/// One batch's target: sum of the batch's item log-likelihoods plus 1/J of
/// the log prior, so the product of the J subposteriors recovers the full
/// posterior exactly.
struct SubposteriorTarget {
  std::vector<long> batch;
  long total_batches = 1;
  std::function<double(long, const ParamVec&)> item_loglik;
  std::function<double(const std::vector<long>&, const ParamVec&)> batch_loglik;  // optional fast path
  std::function<double(const ParamVec&)> prior_logpdf;

  double logdensity(const ParamVec& theta) const;
};

double subposterior_logdensity(const SubposteriorTarget& target, const ParamVec& theta);

/// Post-burn-in draws of one batch chain together with their sample
/// covariance (used as the batch's precision weight after inversion).
struct BatchDraws {
  Matrix samples;    // rows: post-burn-in draws
  Matrix covariance; // sample covariance of `samples`

  static BatchDraws from_chain(const mcmc::Chain& chain);
  static BatchDraws from_samples(Matrix samples);
};

/// Consensus recombination: draws are paired across batches by post-burn-in
/// index and averaged with inverse-covariance weights. Output has the
/// minimum batch sample count. Throws std::invalid_argument on a dimension
/// mismatch and std::runtime_error naming the batch whose covariance stays
/// singular after jitter.
Matrix consensus_combine(const std::vector<BatchDraws>& draws);

}  // namespace abmc::dac
