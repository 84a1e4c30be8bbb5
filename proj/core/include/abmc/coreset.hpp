#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "abmc/kmeans.hpp"
#include "abmc/rng.hpp"
#include "abmc/subsample.hpp"
#include "abmc/types.hpp"

namespace abmc::coreset {

/// Per-item sensitivity upper bounds and their total.
struct SensitivityProfile {
  Vector sigma_i;            // > 0 per item
  double sigma = 0.0;        // sum of sigma_i
  double mean_sensitivity = 0.0;
  double radius_r = 0.0;     // parameter-ball radius used in the bounds
};

/// Radius from the cluster spreads: sqrt of the mean over clusters of the
/// within-cluster mean squared distance. Falls back to 1.0 (with a warning
/// on stderr) when every point coincides with its centroid.
double compute_radius(const Clustering& clustering);

/// Cluster-based sensitivity upper bounds over the label-signed covariates:
/// sigma_i = N / (1 + sum_k |G_k \ {i}| exp(-R ||z_i - c_k||)). Tight
/// clusters give their members small sensitivities; remote points approach N.
SensitivityProfile sensitivity_bounds(const Matrix& z, const Clustering& clustering,
                                      double radius);

/// Sparse multinomial coreset: W_i = (sigma/sigma_i) (M_i/M) with
/// (M_1..M_N) ~ Multi(M, sigma_i/sigma).
struct Coreset {
  std::vector<double> weights;  // dense, mostly zero
  long size = 0;                // multinomial total M
  std::vector<long> support;    // indices with positive weight
  std::vector<long> counts;     // the stored multinomial draw

  double weight(long i) const { return weights[static_cast<size_t>(i)]; }
};

Coreset sample_coreset(const SensitivityProfile& profile, long size, RngStream& rng);

/// Weighted coreset log-likelihood; cost O(|support| d).
template <subsample::ItemModel M>
double coreset_loglik(const M& model, const Coreset& coreset, const ParamVec& theta) {
  double acc = 0.0;
  for (const long i : coreset.support) {
    acc += coreset.weights[static_cast<size_t>(i)] * model.item_loglik(i, theta);
  }
  return acc;
}

/// Empirical relative discrepancy over a grid of parameter points:
/// max_theta |Lambda(theta) - l(theta)| / |max_theta l(theta)|.
template <subsample::ItemModel M>
double discrepancy_report(const M& model, const Coreset& coreset,
                          const std::vector<ParamVec>& theta_grid) {
  if (theta_grid.empty()) throw std::invalid_argument("discrepancy_report: empty grid");
  double max_dev = 0.0;
  double max_ll = -std::numeric_limits<double>::infinity();
  for (const ParamVec& theta : theta_grid) {
    double full = 0.0;
    for (long i = 0; i < model.n_items(); ++i) full += model.item_loglik(i, theta);
    const double dev = std::abs(coreset_loglik(model, coreset, theta) - full);
    if (dev > max_dev) max_dev = dev;
    if (full > max_ll) max_ll = full;
  }
  return max_dev / std::abs(max_ll);
}

}  // namespace abmc::coreset
