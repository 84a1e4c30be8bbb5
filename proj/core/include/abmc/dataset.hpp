#pragma once

#include <string>
#include <vector>

#include "abmc/rng.hpp"
#include "abmc/types.hpp"

namespace abmc {

/// Observations y_1..y_N. Regression data carry a response plus covariate
/// rows; a plain time series has zero covariate columns.
struct Dataset {
  Vector response;     // length N
  Matrix covariates;   // N x c, c == 0 for scalar series

  long n() const { return static_cast<long>(response.size()); }
  long covariate_dim() const { return static_cast<long>(covariates.cols()); }
};

/// Disjoint index sets covering 0..N-1.
struct Partition {
  std::vector<std::vector<long>> batches;

  long batch_count() const { return static_cast<long>(batches.size()); }
};

/// Random split of 0..N-1 into J near-equal batches (sizes differ by at most
/// one). Deterministic given the stream. Throws std::invalid_argument unless
/// 1 <= J <= N.
Partition partition_dataset(long n, long j, RngStream& rng);

inline Partition partition_dataset(const Dataset& data, long j, RngStream& rng) {
  return partition_dataset(data.n(), j, rng);
}

struct CsvLoadOptions {
  /// Min-max rescale every covariate column to [0, 1].
  bool standardize = false;
};

/// Reads a dataset from CSV: header row, response column named `y`,
/// covariate columns `x1..xd`. The loader never adds an intercept column.
Dataset load_dataset_csv(const std::string& path, const CsvLoadOptions& opts = {});

void save_dataset_csv(const Dataset& data, const std::string& path);

}  // namespace abmc
