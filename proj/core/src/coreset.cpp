#include "abmc/coreset.hpp"

#include <cmath>
#include <iostream>

#include "abmc/stats.hpp"

namespace abmc::coreset {

double compute_radius(const Clustering& clustering) {
  if (clustering.within_spread.empty()) {
    throw std::invalid_argument("compute_radius: empty clustering");
  }
  double mean_spread = 0.0;
  for (const double s : clustering.within_spread) mean_spread += s;
  mean_spread /= static_cast<double>(clustering.within_spread.size());
  if (!(mean_spread > 0.0)) {
    std::cerr << "compute_radius: zero within-cluster spread, falling back to R=1\n";
    return 1.0;
  }
  return std::sqrt(mean_spread);
}

SensitivityProfile sensitivity_bounds(const Matrix& z, const Clustering& clustering,
                                      double radius) {
  const long n = z.rows();
  if (static_cast<long>(clustering.assignment.size()) != n) {
    throw std::invalid_argument("sensitivity_bounds: clustering does not cover z");
  }
  if (!(radius > 0.0)) throw std::invalid_argument("sensitivity_bounds: radius > 0");

  const auto sizes = clustering.cluster_sizes();
  SensitivityProfile prof;
  prof.radius_r = radius;
  prof.sigma_i.resize(n);
  for (long i = 0; i < n; ++i) {
    double s = 0.0;
    for (long k = 0; k < clustering.k; ++k) {
      const double nk = static_cast<double>(sizes[static_cast<size_t>(k)]) -
                        (clustering.assignment[static_cast<size_t>(i)] == k ? 1.0 : 0.0);
      if (nk <= 0.0) continue;
      const double dist = (z.row(i) - clustering.centroids.row(k)).norm();
      s += nk * std::exp(-radius * dist);
    }
    prof.sigma_i(i) = static_cast<double>(n) / (1.0 + s);
  }
  prof.sigma = prof.sigma_i.sum();
  prof.mean_sensitivity = prof.sigma / static_cast<double>(n);
  return prof;
}

Coreset sample_coreset(const SensitivityProfile& profile, long size, RngStream& rng) {
  if (size < 1) throw std::invalid_argument("sample_coreset: M >= 1");
  const long n = profile.sigma_i.size();
  Coreset cs;
  cs.size = size;
  cs.counts = multinomial(size, profile.sigma_i, rng);
  cs.weights.assign(static_cast<size_t>(n), 0.0);
  for (long i = 0; i < n; ++i) {
    const long mi = cs.counts[static_cast<size_t>(i)];
    if (mi > 0) {
      cs.weights[static_cast<size_t>(i)] = (profile.sigma / profile.sigma_i(i)) *
                                           (static_cast<double>(mi) / static_cast<double>(size));
      cs.support.push_back(i);
    }
  }
  return cs;
}

}  // namespace abmc::coreset
