#pragma once

#include <vector>

#include "abmc/rng.hpp"
#include "abmc/types.hpp"

namespace abmc {

struct Clustering {
  long k = 0;
  Matrix centroids;                  // K x dim
  std::vector<long> assignment;      // one centroid index per row
  std::vector<double> within_spread; // per-cluster mean squared distance to centroid
  std::vector<double> objective_log; // total within-SS after each Lloyd pass
  long iterations = 0;

  std::vector<long> cluster_sizes() const;
};

/// Lloyd's algorithm with k-means++ style seeding. Terminates at an
/// assignment fixed point or after max_iter passes; the recorded objective is
/// non-increasing. Ties in the nearest-centroid rule go to the lower index.
Clustering kmeans(const Matrix& vectors, long k, RngStream& rng, long max_iter = 100);

}  // namespace abmc
