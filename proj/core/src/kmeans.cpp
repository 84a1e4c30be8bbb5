#include "abmc/kmeans.hpp"

#include <limits>
#include <stdexcept>

namespace abmc {

std::vector<long> Clustering::cluster_sizes() const {
  std::vector<long> sizes(static_cast<size_t>(k), 0);
  for (const long a : assignment) ++sizes[static_cast<size_t>(a)];
  return sizes;
}

namespace {

long nearest_centroid(const Matrix& centroids, long k_used,
                      const Eigen::RowVectorXd& x, double* dist2_out) {
  long best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (long c = 0; c < k_used; ++c) {
    const double d = (centroids.row(c) - x).squaredNorm();
    if (d < best_d) {  // strict: ties keep the lower index
      best_d = d;
      best = c;
    }
  }
  if (dist2_out) *dist2_out = best_d;
  return best;
}

}  // namespace

Clustering kmeans(const Matrix& vectors, long k, RngStream& rng, long max_iter) {
  const long n = vectors.rows();
  if (n < 1) throw std::invalid_argument("kmeans: empty input");
  if (k < 1 || k > n) throw std::invalid_argument("kmeans: need 1 <= K <= N");
  if (max_iter < 1) throw std::invalid_argument("kmeans: max_iter >= 1");

  Clustering out;
  out.k = k;
  out.centroids.resize(k, vectors.cols());

  // k-means++ seeding: first centroid uniform, then proportional to the
  // squared distance to the nearest chosen centroid.
  std::vector<double> d2(static_cast<size_t>(n),
                         std::numeric_limits<double>::infinity());
  out.centroids.row(0) = vectors.row(rng.uniform_int(0, n - 1));
  for (long c = 1; c < k; ++c) {
    double total = 0.0;
    for (long i = 0; i < n; ++i) {
      const double d = (vectors.row(i) - out.centroids.row(c - 1)).squaredNorm();
      auto& cur = d2[static_cast<size_t>(i)];
      if (d < cur) cur = d;
      total += cur;
    }
    if (total > 0.0) {
      const double u = rng.uniform() * total;
      double acc = 0.0;
      long pick = n - 1;
      for (long i = 0; i < n; ++i) {
        acc += d2[static_cast<size_t>(i)];
        if (u < acc) {
          pick = i;
          break;
        }
      }
      out.centroids.row(c) = vectors.row(pick);
    } else {
      // All remaining points coincide with chosen centroids; reuse any row.
      out.centroids.row(c) = vectors.row(rng.uniform_int(0, n - 1));
    }
  }

  out.assignment.assign(static_cast<size_t>(n), -1);
  std::vector<long> counts(static_cast<size_t>(k), 0);

  for (long pass = 0; pass < max_iter; ++pass) {
    bool changed = false;
    double objective = 0.0;
    for (long i = 0; i < n; ++i) {
      double d = 0.0;
      const long c = nearest_centroid(out.centroids, k, vectors.row(i), &d);
      objective += d;
      if (c != out.assignment[static_cast<size_t>(i)]) {
        out.assignment[static_cast<size_t>(i)] = c;
        changed = true;
      }
    }
    out.objective_log.push_back(objective);
    out.iterations = pass + 1;
    if (!changed) break;

    Matrix sums = Matrix::Zero(k, vectors.cols());
    std::fill(counts.begin(), counts.end(), 0);
    for (long i = 0; i < n; ++i) {
      const long c = out.assignment[static_cast<size_t>(i)];
      sums.row(c) += vectors.row(i);
      ++counts[static_cast<size_t>(c)];
    }
    for (long c = 0; c < k; ++c) {
      if (counts[static_cast<size_t>(c)] > 0) {
        out.centroids.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<size_t>(c)]);
      }
      // An empty cluster keeps its centroid; it can re-acquire points later.
    }
  }

  out.within_spread.assign(static_cast<size_t>(k), 0.0);
  std::fill(counts.begin(), counts.end(), 0);
  for (long i = 0; i < n; ++i) {
    const long c = out.assignment[static_cast<size_t>(i)];
    out.within_spread[static_cast<size_t>(c)] +=
        (vectors.row(i) - out.centroids.row(c)).squaredNorm();
    ++counts[static_cast<size_t>(c)];
  }
  for (long c = 0; c < k; ++c) {
    if (counts[static_cast<size_t>(c)] > 0) {
      out.within_spread[static_cast<size_t>(c)] /=
          static_cast<double>(counts[static_cast<size_t>(c)]);
    }
  }
  return out;
}

}  // namespace abmc
