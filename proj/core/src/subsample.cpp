#include "abmc/subsample.hpp"

namespace abmc::subsample {

IndexVector draw_indices(long m, long n, RngStream& rng) {
  if (m < 1) throw std::invalid_argument("draw_indices: m >= 1");
  if (n < 1) throw std::invalid_argument("draw_indices: n >= 1");
  IndexVector u(static_cast<size_t>(m));
  for (auto& e : u) e = rng.uniform_int(0, n - 1);
  return u;
}

IndexVector refresh_indices(const IndexVector& u, double rho, long n, RngStream& rng) {
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw std::invalid_argument("refresh_indices: rho must lie in [0,1]");
  }
  if (u.empty()) throw std::invalid_argument("refresh_indices: empty index vector");
  IndexVector out(u.size());
  for (size_t k = 0; k < u.size(); ++k) {
    if (rho >= 1.0 || rng.uniform() < rho) {
      out[k] = u[k];
    } else {
      out[k] = rng.uniform_int(0, n - 1);
    }
  }
  return out;
}

Matrix ControlVariateCache::profile_hess(long p) const {
  const long d = anchor_.size();
  return Eigen::Map<const Matrix>(hess_flat_.data() + p * d * d, d, d);
}

void ControlVariateCache::finalize(const std::vector<long>& profile_multiplicity) {
  const long d = anchor_.size();
  value_total_ = 0.0;
  grad_total_ = Vector::Zero(d);
  hess_total_ = Matrix::Zero(d, d);
  for (size_t p = 0; p < values_.size(); ++p) {
    const double mult = static_cast<double>(profile_multiplicity[p]);
    value_total_ += mult * values_[p];
    grad_total_ += mult * grads_.row(static_cast<long>(p)).transpose();
    hess_total_ +=
        mult * Eigen::Map<const Matrix>(hess_flat_.data() + static_cast<long>(p) * d * d, d, d);
  }
}

LogLikEstimate cv_estimate_from_values(const std::vector<double>& item_ll,
                                       const ParamVec& theta, const IndexVector& u,
                                       const ControlVariateCache& cache) {
  if (u.empty()) throw std::invalid_argument("cv_estimate: empty index vector");
  if (item_ll.size() != u.size()) {
    throw std::invalid_argument("cv_estimate: item value count mismatch");
  }
  const long n = cache.n_items();
  const long m = static_cast<long>(u.size());
  const Vector delta = theta - cache.anchor();

  // Welford over the residuals l_{u_k} - q_{u_k}.
  double res_sum = 0.0;
  double mean = 0.0;
  double m2 = 0.0;
  for (size_t k = 0; k < u.size(); ++k) {
    const double r = item_ll[k] - cache.q_item_delta(u[k], delta);
    res_sum += r;
    const double d1 = r - mean;
    mean += d1 / static_cast<double>(k + 1);
    m2 += d1 * (r - mean);
  }
  const double scale = static_cast<double>(n) / static_cast<double>(m);

  LogLikEstimate est;
  est.value = cache.q_total(theta) + scale * res_sum;
  if (m >= 2) {
    const double sample_var = m2 / static_cast<double>(m - 1);
    est.variance_hat =
        static_cast<double>(n) * static_cast<double>(n) / static_cast<double>(m) * sample_var;
  } else {
    est.variance_hat = 0.0;
    est.variance_degenerate = true;
  }
  est.corrected = est.value - est.variance_hat / 2.0;
  return est;
}

}  // namespace abmc::subsample
