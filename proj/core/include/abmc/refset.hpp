#pragma once

#include <any>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "abmc/lfree.hpp"
#include "abmc/mcmc.hpp"
#include "abmc/parallel.hpp"
#include "abmc/rng.hpp"
#include "abmc/types.hpp"

namespace abmc::refset {

/// Append-only collection of (parameter, summary) pairs: H entries, each
/// with m summary vectors of length p. Backed by flat storage so nearest
/// neighbour scans stay cache friendly as the set grows.
class ReferenceSet {
 public:
  ReferenceSet(long param_dim, long summary_dim, long summaries_per_entry)
      : d_(param_dim), p_(summary_dim), m_(summaries_per_entry) {
    if (d_ < 1 || p_ < 1 || m_ < 1) {
      throw std::invalid_argument("ReferenceSet: bad dimensions");
    }
  }

  long entry_count() const { return h_; }
  long param_dim() const { return d_; }
  long summary_dim() const { return p_; }
  long summaries_per_entry() const { return m_; }

  void append(const ParamVec& xi, const std::vector<Vector>& summaries) {
    if (xi.size() != d_ || static_cast<long>(summaries.size()) != m_) {
      throw std::invalid_argument("ReferenceSet::append: shape mismatch");
    }
    if (!xi.allFinite()) throw std::invalid_argument("ReferenceSet::append: non-finite xi");
    for (const auto& s : summaries) {
      if (s.size() != p_) throw std::invalid_argument("ReferenceSet::append: bad summary");
    }
    xi_.insert(xi_.end(), xi.data(), xi.data() + d_);
    for (const auto& s : summaries) s_.insert(s_.end(), s.data(), s.data() + p_);
    ++h_;
  }

  Eigen::Map<const Vector> xi(long h) const {
    return Eigen::Map<const Vector>(xi_.data() + h * d_, d_);
  }

  Eigen::Map<const Vector> summary(long h, long j) const {
    return Eigen::Map<const Vector>(s_.data() + (h * m_ + j) * p_, p_);
  }

  std::uint64_t build_seed = 0;

 private:
  long d_, p_, m_;
  long h_ = 0;
  std::vector<double> xi_;
  std::vector<double> s_;

  friend void reserve_entries(ReferenceSet& z, long n);
};

inline void reserve_entries(ReferenceSet& z, long n) {
  z.xi_.reserve(static_cast<size_t>(n) * z.d_);
  z.s_.reserve(static_cast<size_t>(n) * z.m_ * z.p_);
}

struct KnnConfig {
  enum class WeightScheme { Uniform, LinearTaper };
  long k = 1;
  WeightScheme scheme = WeightScheme::Uniform;
};

/// Indices of the K entries nearest to theta in Euclidean distance, ordered
/// by (distance, entry index); ties break toward the lower index.
std::vector<long> knn_query(const ReferenceSet& z, const ParamVec& theta, long k);

/// K = floor(sqrt(H)), the default neighbour count, at least 1.
inline long default_knn_count(long h) {
  const long k = static_cast<long>(std::floor(std::sqrt(static_cast<double>(h))));
  return k < 1 ? 1 : k;
}

struct KnnMoments {
  Vector mu;
  Matrix sigma;
  bool fell_back_uniform = false;
};

/// Weighted kNN estimates of the summary mean and covariance at theta from
/// the given neighbour entries. Linear-taper weights degenerate to uniform
/// (with a flag) when every weight is zero.
KnnMoments knn_moments(const ReferenceSet& z, const std::vector<long>& neighbors,
                       const ParamVec& theta, const KnnConfig& config);

/// Weighted kNN estimate of the epsilon-ball acceptance probability at theta.
double knn_ball_probability(const ReferenceSet& z, const std::vector<long>& neighbors,
                            const ParamVec& theta, const KnnConfig& config,
                            const lfree::DistanceSpec& dist, const Vector& s0);

/// Builds the reference set offline: H parameter draws from `sampler`, each
/// with m pseudo-data summaries, generated on independent child streams so
/// the result is identical however many workers run. A failing simulation is
/// retried on a fresh substream up to 3 times.
template <lfree::Simulator S>
ReferenceSet build_reference_set(const std::function<ParamVec(RngStream&)>& sampler,
                                 const S& model, long h, long m, RngStream& rng,
                                 int threads = 1) {
  if (h < 1 || m < 1) throw std::invalid_argument("build_reference_set: H, m >= 1");
  const long p = model.summary_dim();

  std::vector<ParamVec> params(static_cast<size_t>(h));
  std::vector<std::vector<Vector>> sums(static_cast<size_t>(h));
  parallel_for(h, threads, [&](long e) {
    RngStream entry_rng = rng.child(static_cast<std::uint64_t>(e));
    for (int attempt = 0;; ++attempt) {
      try {
        RngStream r = entry_rng.child(static_cast<std::uint64_t>(attempt));
        ParamVec xi = sampler(r);
        std::vector<Vector> ss;
        ss.reserve(static_cast<size_t>(m));
        for (long j = 0; j < m; ++j) ss.push_back(model.summarize(model.simulate(xi, r)));
        params[static_cast<size_t>(e)] = std::move(xi);
        sums[static_cast<size_t>(e)] = std::move(ss);
        break;
      } catch (const std::exception& ex) {
        if (attempt >= 3) {
          throw std::runtime_error("build_reference_set: entry " + std::to_string(e) +
                                   " failed after retries: " + ex.what());
        }
      }
    }
  });

  ReferenceSet z(params.front().size(), p, m);
  z.build_seed = rng.seed();
  reserve_entries(z, h);
  for (long e = 0; e < h; ++e) {
    z.append(params[static_cast<size_t>(e)], sums[static_cast<size_t>(e)]);
  }
  return z;
}

/// CSV persistence (xi_1..xi_d, s_1..s_p, m_index) with a JSON metadata
/// sidecar (H, m, p, seed) at path + ".json".
void save_reference_set(const ReferenceSet& z, const std::string& path);
ReferenceSet load_reference_set(const std::string& path);

/// Accelerated ABC-MCMC: one pseudo dataset per in-support proposal, which
/// is appended to the reference set; the acceptance probability is the
/// weighted fraction of the K = floor(sqrt(H)) nearest entries whose
/// summaries fall within epsilon of s0. The current state's estimate stays
/// with the state.
template <lfree::Simulator S>
class AabcKernel {
 public:
  AabcKernel(const S& model, lfree::DistanceSpec dist, Vector s0, ReferenceSet& z,
             KnnConfig::WeightScheme scheme = KnnConfig::WeightScheme::Uniform)
      : model_(&model), dist_(std::move(dist)), s0_(std::move(s0)), z_(&z), scheme_(scheme) {}

  mcmc::ChainState init(const ParamVec& theta, RngStream& rng) const {
    mcmc::ChainState s;
    s.theta = theta;
    double p_hat = 0.0;
    const double prior = model_->prior_logpdf(theta);
    if (prior != mcmc::neg_inf) {
      z_->append(theta, {model_->summarize(model_->simulate(theta, rng))});
      p_hat = estimate_at(theta);
    }
    s.cached_log_target = p_hat > 0.0 ? prior + std::log(p_hat) : mcmc::neg_inf;
    s.auxiliary = p_hat;
    return s;
  }

  mcmc::StepResult step(const mcmc::ChainState& state, const mcmc::ProposalSpec& proposal,
                        RngStream& rng) const {
    mcmc::ChainState next = state;
    next.iteration = state.iteration + 1;
    const ParamVec omega = proposal.draw(state.theta, rng);
    if (!omega.allFinite()) return {std::move(next), false};
    const double prior_prop = model_->prior_logpdf(omega);
    if (prior_prop == mcmc::neg_inf) return {std::move(next), false};

    z_->append(omega, {model_->summarize(model_->simulate(omega, rng))});
    const double p_prop = estimate_at(omega);
    const double cur_p = std::any_cast<double>(state.auxiliary);
    if (p_prop <= 0.0 && cur_p <= 0.0) {
      ++starvation_flags_;
      return {std::move(next), false};
    }
    const double log_prop = p_prop > 0.0 ? prior_prop + std::log(p_prop) : mcmc::neg_inf;
    const double alpha = mcmc::accept_probability(state.cached_log_target, log_prop);
    if (rng.uniform() < alpha) {
      next.theta = omega;
      next.cached_log_target = log_prop;
      next.auxiliary = p_prop;
      return {std::move(next), true};
    }
    return {std::move(next), false};
  }

  long long starvation_flags() const { return starvation_flags_; }

 private:
  double estimate_at(const ParamVec& theta) const {
    KnnConfig cfg{default_knn_count(z_->entry_count()), scheme_};
    const auto nb = knn_query(*z_, theta, cfg.k);
    return knn_ball_probability(*z_, nb, theta, cfg, dist_, s0_);
  }

  const S* model_;
  lfree::DistanceSpec dist_;
  Vector s0_;
  ReferenceSet* z_;
  KnnConfig::WeightScheme scheme_;
  mutable long long starvation_flags_ = 0;
};

/// Accelerated BSL: one pseudo dataset per in-support proposal appended to
/// the reference set; synthetic-likelihood moments at both endpoints come
/// from kNN estimates against the grown set, refreshed every iteration.
template <lfree::Simulator S>
class AbslKernel {
 public:
  AbslKernel(const S& model, Vector s0, ReferenceSet& z,
             KnnConfig::WeightScheme scheme = KnnConfig::WeightScheme::Uniform)
      : model_(&model), s0_(std::move(s0)), z_(&z), scheme_(scheme) {}

  mcmc::ChainState init(const ParamVec& theta, RngStream& rng) const {
    mcmc::ChainState s;
    s.theta = theta;
    const double prior = model_->prior_logpdf(theta);
    if (prior != mcmc::neg_inf) {
      z_->append(theta, {model_->summarize(model_->simulate(theta, rng))});
      s.cached_log_target = prior + log_sl_at(theta);
    } else {
      s.cached_log_target = mcmc::neg_inf;
    }
    return s;
  }

  mcmc::StepResult step(const mcmc::ChainState& state, const mcmc::ProposalSpec& proposal,
                        RngStream& rng) const {
    mcmc::ChainState next = state;
    next.iteration = state.iteration + 1;
    const ParamVec omega = proposal.draw(state.theta, rng);
    if (!omega.allFinite()) return {std::move(next), false};
    const double prior_prop = model_->prior_logpdf(omega);
    if (prior_prop == mcmc::neg_inf) return {std::move(next), false};

    z_->append(omega, {model_->summarize(model_->simulate(omega, rng))});
    const double sl_prop = log_sl_at(omega);
    // Refresh the current endpoint against the grown set as well.
    const double sl_cur = log_sl_at(state.theta);
    const double prior_cur = model_->prior_logpdf(state.theta);
    next.cached_log_target = prior_cur + sl_cur;

    const double log_prop = prior_prop + sl_prop;
    const double alpha = mcmc::accept_probability(next.cached_log_target, log_prop);
    if (rng.uniform() < alpha) {
      next.theta = omega;
      next.cached_log_target = log_prop;
      return {std::move(next), true};
    }
    return {std::move(next), false};
  }

 private:
  double log_sl_at(const ParamVec& theta) const {
    KnnConfig cfg{default_knn_count(z_->entry_count()), scheme_};
    const auto nb = knn_query(*z_, theta, cfg.k);
    const KnnMoments mom = knn_moments(*z_, nb, theta, cfg);
    const double trace = mom.sigma.trace();
    if (!(trace > 0.0)) return mcmc::neg_inf;  // degenerate moment estimate
    bool ok = false;
    const double v = mvn_logpdf(s0_, mom.mu, mom.sigma,
                                1e-8 * trace / static_cast<double>(mom.sigma.rows()), &ok);
    return ok ? v : mcmc::neg_inf;
  }

  const S* model_;
  Vector s0_;
  ReferenceSet* z_;
  KnnConfig::WeightScheme scheme_;
};

}  // namespace abmc::refset
