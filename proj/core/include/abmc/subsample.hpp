#pragma once

#include <any>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "abmc/kmeans.hpp"
#include "abmc/mcmc.hpp"
#include "abmc/rng.hpp"
#include "abmc/types.hpp"

namespace abmc::subsample {

template <typename M>
concept ItemModel = requires(const M m, long i, const ParamVec& th) {
  { m.n_items() } -> std::convertible_to<long>;
  { m.dim() } -> std::convertible_to<long>;
  { m.item_loglik(i, th) } -> std::convertible_to<double>;
  { m.prior_logpdf(th) } -> std::convertible_to<double>;
};

/// Subsample index vector: m draws uniform over 0..N-1, with replacement.
using IndexVector = std::vector<long>;

IndexVector draw_indices(long m, long n, RngStream& rng);

/// Correlated refresh: every entry is kept with probability rho and redrawn
/// uniformly otherwise. rho = 0 gives a fresh iid vector, rho = 1 keeps u.
IndexVector refresh_indices(const IndexVector& u, double rho, long n, RngStream& rng);

struct NaiveEstimate {
  double average;  // unbiased for l/N
  double total;    // N * average, estimates the full log-likelihood
};

template <ItemModel M>
NaiveEstimate naive_estimate(const M& model, const ParamVec& theta, const IndexVector& u) {
  if (u.empty()) throw std::invalid_argument("naive_estimate: empty index vector");
  double acc = 0.0;
  for (const long i : u) acc += model.item_loglik(i, theta);
  NaiveEstimate est;
  est.average = acc / static_cast<double>(u.size());
  est.total = est.average * static_cast<double>(model.n_items());
  return est;
}

enum class ExpansionMode { ParameterExpanded, DataExpanded };

/// Second-order Taylor surrogates q_i(theta) around theta*, stored per
/// profile (one per item, or one per cluster in data-expanded mode) together
/// with their totals so sum_i q_i(theta) costs O(d^2) per theta.
class ControlVariateCache {
 public:
  ExpansionMode mode() const { return mode_; }
  const ParamVec& anchor() const { return anchor_; }
  long n_items() const { return static_cast<long>(item_profile_.size()); }
  long dim() const { return anchor_.size(); }

  double q_item(long i, const ParamVec& theta) const {
    const Vector delta = theta - anchor_;
    return q_profile(item_profile_[static_cast<size_t>(i)], delta);
  }

  double q_item_delta(long i, const Vector& delta) const {
    return q_profile(item_profile_[static_cast<size_t>(i)], delta);
  }

  /// sum_i q_i(theta) from the cached totals.
  double q_total(const ParamVec& theta) const {
    const Vector delta = theta - anchor_;
    return value_total_ + grad_total_.dot(delta) +
           0.5 * delta.dot(hess_total_ * delta);
  }

  double value_total() const { return value_total_; }
  const Vector& grad_total() const { return grad_total_; }
  const Matrix& hess_total() const { return hess_total_; }

  // Per-profile coefficient accessors (kept for invariant checks).
  long profile_count() const { return static_cast<long>(values_.size()); }
  long profile_of(long i) const { return item_profile_[static_cast<size_t>(i)]; }
  double profile_value(long p) const { return values_[static_cast<size_t>(p)]; }
  Vector profile_grad(long p) const { return grads_.row(p).transpose(); }
  Matrix profile_hess(long p) const;

  template <ItemModel M>
  friend ControlVariateCache build_cv_cache(const M& model, const ParamVec& theta_star);
  template <typename M>
  friend ControlVariateCache build_cv_cache(const M& model, const ParamVec& theta_star,
                                            const Clustering& clustering);

 private:
  double q_profile(long p, const Vector& delta) const {
    const long d = anchor_.size();
    const Eigen::Map<const Matrix> h(hess_flat_.data() + p * d * d, d, d);
    return values_[static_cast<size_t>(p)] + grads_.row(p).dot(delta) +
           0.5 * delta.dot(h * delta);
  }

  void finalize(const std::vector<long>& profile_multiplicity);

  ExpansionMode mode_ = ExpansionMode::ParameterExpanded;
  ParamVec anchor_;
  std::vector<long> item_profile_;  // item -> profile index
  std::vector<double> values_;      // per profile
  Matrix grads_;                    // profiles x d
  std::vector<double> hess_flat_;   // profiles x d x d, row blocks
  double value_total_ = 0.0;
  Vector grad_total_;
  Matrix hess_total_;
};

/// Parameter-expanded cache: every item is expanded around theta* with its
/// own derivatives. Throws std::runtime_error naming the item whose
/// derivatives are not finite.
template <ItemModel M>
ControlVariateCache build_cv_cache(const M& model, const ParamVec& theta_star);

/// Data-expanded cache: items share the expansion of their cluster
/// centroid's synthetic item (the item's covariate replaced by the centroid
/// of its label-signed feature vector); requires the model to expose
/// synthetic_derivs. The clustering must cover the model's items.
template <typename M>
ControlVariateCache build_cv_cache(const M& model, const ParamVec& theta_star,
                                   const Clustering& clustering);

struct LogLikEstimate {
  double value = 0.0;         // estimate of the full log-likelihood
  double variance_hat = 0.0;  // sigma^2 estimate of the estimator
  double corrected = 0.0;     // value - variance_hat / 2
  bool variance_degenerate = false;  // m == 1, sample variance undefined
};

/// Control-variate estimator from already-evaluated item log-likelihoods
/// item_ll[k] = l_{u_k}(theta). Cost O(m d^2 + d^2).
LogLikEstimate cv_estimate_from_values(const std::vector<double>& item_ll,
                                       const ParamVec& theta, const IndexVector& u,
                                       const ControlVariateCache& cache);

template <ItemModel M>
LogLikEstimate cv_estimate(const M& model, const ParamVec& theta, const IndexVector& u,
                           const ControlVariateCache& cache) {
  std::vector<double> item_ll(u.size());
  for (size_t k = 0; k < u.size(); ++k) item_ll[k] = model.item_loglik(u[k], theta);
  return cv_estimate_from_values(item_ll, theta, u, cache);
}

/// Pseudo-marginal random-walk kernel over the control-variate estimator.
/// Each iteration refreshes the index vector (keep probability rho), then
/// evaluates both the current and the proposed point on the shared refreshed
/// indices; per-entry item values are cached so kept entries cost nothing.
template <ItemModel M>
class SubsampleKernel {
 public:
  SubsampleKernel(const M& model, const ControlVariateCache& cache, long m, double rho)
      : model_(&model), cache_(&cache), m_(m), rho_(rho) {
    if (m < 1) throw std::invalid_argument("SubsampleKernel: m >= 1");
    if (!(rho >= 0.0 && rho <= 1.0)) {
      throw std::invalid_argument("SubsampleKernel: rho in [0,1]");
    }
  }

  struct Aux {
    IndexVector u;
    std::vector<double> item_ll;  // l_{u_k} at the state's theta
    LogLikEstimate estimate;
  };

  mcmc::ChainState init(const ParamVec& theta, RngStream& rng) const {
    Aux aux;
    aux.u = draw_indices(m_, model_->n_items(), rng);
    aux.item_ll.resize(static_cast<size_t>(m_));
    for (size_t k = 0; k < aux.u.size(); ++k) {
      aux.item_ll[k] = model_->item_loglik(aux.u[k], theta);
    }
    aux.estimate = cv_estimate_from_values(aux.item_ll, theta, aux.u, *cache_);
    mcmc::ChainState s;
    s.theta = theta;
    s.cached_log_target = aux.estimate.corrected + model_->prior_logpdf(theta);
    s.auxiliary = std::move(aux);
    return s;
  }

  mcmc::StepResult step(const mcmc::ChainState& state, const mcmc::ProposalSpec& proposal,
                        RngStream& rng) const {
    const Aux& prev = std::any_cast<const Aux&>(state.auxiliary);
    Aux cur;
    cur.u = refresh_indices(prev.u, rho_, model_->n_items(), rng);
    cur.item_ll = prev.item_ll;
    for (size_t k = 0; k < cur.u.size(); ++k) {
      if (cur.u[k] != prev.u[k]) {
        cur.item_ll[k] = model_->item_loglik(cur.u[k], state.theta);
      }
    }
    cur.estimate = cv_estimate_from_values(cur.item_ll, state.theta, cur.u, *cache_);
    const double log_cur = cur.estimate.corrected + model_->prior_logpdf(state.theta);

    mcmc::ChainState next;
    next.iteration = state.iteration + 1;

    const ParamVec omega = proposal.draw(state.theta, rng);
    bool accepted = false;
    if (omega.allFinite()) {
      const double prior_prop = model_->prior_logpdf(omega);
      if (prior_prop != mcmc::neg_inf) {
        Aux prop;
        prop.u = cur.u;
        prop.item_ll.resize(cur.u.size());
        for (size_t k = 0; k < cur.u.size(); ++k) {
          prop.item_ll[k] = model_->item_loglik(cur.u[k], omega);
        }
        prop.estimate = cv_estimate_from_values(prop.item_ll, omega, cur.u, *cache_);
        const double log_prop = prop.estimate.corrected + prior_prop;
        if (rng.uniform() < mcmc::accept_probability(log_cur, log_prop)) {
          next.theta = omega;
          next.cached_log_target = log_prop;
          next.auxiliary = std::move(prop);
          accepted = true;
        }
      }
    }
    if (!accepted) {
      next.theta = state.theta;
      next.cached_log_target = log_cur;  // re-estimated on the refreshed indices
      next.auxiliary = std::move(cur);
    }
    return {std::move(next), accepted};
  }

 private:
  const M* model_;
  const ControlVariateCache* cache_;
  long m_;
  double rho_;
};

// ---- template implementations ----

template <ItemModel M>
ControlVariateCache build_cv_cache(const M& model, const ParamVec& theta_star) {
  const long n = model.n_items();
  const long d = model.dim();
  ControlVariateCache cache;
  cache.mode_ = ExpansionMode::ParameterExpanded;
  cache.anchor_ = theta_star;
  cache.item_profile_.resize(static_cast<size_t>(n));
  cache.values_.resize(static_cast<size_t>(n));
  cache.grads_.resize(n, d);
  cache.hess_flat_.resize(static_cast<size_t>(n) * d * d);

  double v;
  Vector g(d);
  Matrix h(d, d);
  for (long i = 0; i < n; ++i) {
    model.item_derivs(i, theta_star, v, g, h);
    if (!std::isfinite(v) || !g.allFinite() || !h.allFinite()) {
      throw std::runtime_error("build_cv_cache: non-finite derivatives at item " +
                               std::to_string(i));
    }
    cache.item_profile_[static_cast<size_t>(i)] = i;
    cache.values_[static_cast<size_t>(i)] = v;
    cache.grads_.row(i) = g.transpose();
    Eigen::Map<Matrix>(cache.hess_flat_.data() + i * d * d, d, d) = h;
  }
  cache.finalize(std::vector<long>(static_cast<size_t>(n), 1));
  return cache;
}

template <typename M>
ControlVariateCache build_cv_cache(const M& model, const ParamVec& theta_star,
                                   const Clustering& clustering) {
  const long n = model.n_items();
  const long d = model.dim();
  if (static_cast<long>(clustering.assignment.size()) != n) {
    throw std::invalid_argument("build_cv_cache: clustering does not cover the items");
  }
  ControlVariateCache cache;
  cache.mode_ = ExpansionMode::DataExpanded;
  cache.anchor_ = theta_star;
  cache.item_profile_.assign(clustering.assignment.begin(), clustering.assignment.end());
  const long k = clustering.k;
  cache.values_.resize(static_cast<size_t>(k));
  cache.grads_.resize(k, d);
  cache.hess_flat_.resize(static_cast<size_t>(k) * d * d);

  double v;
  Vector g(d);
  Matrix h(d, d);
  for (long c = 0; c < k; ++c) {
    model.synthetic_derivs(clustering.centroids.row(c).transpose(), theta_star, v, g, h);
    if (!std::isfinite(v) || !g.allFinite() || !h.allFinite()) {
      throw std::runtime_error("build_cv_cache: non-finite derivatives at centroid " +
                               std::to_string(c));
    }
    cache.values_[static_cast<size_t>(c)] = v;
    cache.grads_.row(c) = g.transpose();
    Eigen::Map<Matrix>(cache.hess_flat_.data() + c * d * d, d, d) = h;
  }
  std::vector<long> mult(static_cast<size_t>(k), 0);
  for (const long c : clustering.assignment) ++mult[static_cast<size_t>(c)];
  cache.finalize(mult);
  return cache;
}

}  // namespace abmc::subsample
