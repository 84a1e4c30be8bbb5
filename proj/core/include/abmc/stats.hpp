#pragma once

#include <vector>

#include "abmc/rng.hpp"
#include "abmc/types.hpp"

namespace abmc {

/// Column means of a sample matrix (rows are observations).
Vector sample_mean(const Matrix& rows);

/// Sample covariance with the n-1 denominator. Requires >= 2 rows.
Matrix sample_covariance(const Matrix& rows);

/// Sample variance (n-1) of a vector of scalars. Requires >= 2 entries.
double sample_variance(const Vector& x);

/// Covariance with the 1/n denominator around a supplied center.
Matrix scatter_around(const Matrix& rows, const Vector& center);

/// Lower Cholesky factor of (m + jitter * I). Throws std::runtime_error if the
/// matrix is not positive definite even after the jitter.
Matrix cholesky_with_jitter(const Matrix& m, double jitter);

/// Log density of N(mu, sigma) at x; returns -inf (with ok=false) when sigma
/// is numerically singular after `jitter` is added to its diagonal.
double mvn_logpdf(const Vector& x, const Vector& mu, const Matrix& sigma,
                  double jitter, bool* ok = nullptr);

/// Draw from N(mu, L L^T) given the lower Cholesky factor L.
Vector mvn_sample(const Vector& mu, const Matrix& chol_lower, RngStream& rng);

/// Componentwise median absolute deviation of sample rows.
Vector mad(const Matrix& rows);

/// Type-7 quantile (sorted-order linear interpolation) of the entries of x.
double quantile(std::vector<double> x, double tau);

/// Multinomial draw: `m` categorical trials with the given probability
/// weights (need not be normalized); returns per-category counts.
std::vector<long> multinomial(long m, const Vector& weights, RngStream& rng);

}  // namespace abmc
