#pragma once

#include <any>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "abmc/dataset.hpp"
#include "abmc/mcmc.hpp"
#include "abmc/rng.hpp"
#include "abmc/stats.hpp"
#include "abmc/types.hpp"

namespace abmc::lfree {

template <typename S>
concept Simulator = requires(const S s, const ParamVec& th, RngStream& rng, const Dataset& d) {
  { s.simulate(th, rng) } -> std::same_as<Dataset>;
  { s.summarize(d) } -> std::convertible_to<Vector>;
  { s.prior_logpdf(th) } -> std::convertible_to<double>;
  { s.prior_sample(rng) } -> std::same_as<ParamVec>;
  { s.summary_dim() } -> std::convertible_to<long>;
};

/// Componentwise-scaled Euclidean distance with an acceptance threshold.
struct DistanceSpec {
  Vector scaling;  // positive divisors, one per summary component
  double epsilon = 0.0;

  double distance(const Vector& a, const Vector& b) const {
    if (a.size() != b.size() || a.size() != scaling.size()) {
      throw std::invalid_argument("DistanceSpec: dimension mismatch");
    }
    return ((a - b).array() / scaling.array()).matrix().norm();
  }

  bool within(const Vector& s, const Vector& s0) const {
    return distance(s, s0) <= epsilon;
  }
};

struct AbcRejectResult {
  std::vector<ParamVec> accepted;
  long long proposals = 0;
};

/// Accept/reject ABC: draw theta* from the prior, simulate once, keep theta*
/// when the summary lands within epsilon of s0. Aborts (std::runtime_error)
/// when the empirical acceptance rate stays below 1e-6 over the probe budget.
template <Simulator S>
AbcRejectResult abc_reject(const S& model, const DistanceSpec& dist, const Vector& s0,
                           long n_accept, RngStream& rng,
                           long long probe_budget = 2000000) {
  if (!(dist.epsilon > 0.0)) throw std::invalid_argument("abc_reject: epsilon > 0");
  if (n_accept < 1) throw std::invalid_argument("abc_reject: n_accept >= 1");
  AbcRejectResult out;
  out.accepted.reserve(static_cast<size_t>(n_accept));
  while (static_cast<long>(out.accepted.size()) < n_accept) {
    if (out.proposals >= probe_budget &&
        static_cast<double>(out.accepted.size()) <
            1e-6 * static_cast<double>(out.proposals)) {
      throw std::runtime_error(
          "abc_reject: acceptance rate below 1e-6 after " +
          std::to_string(out.proposals) + " proposals; epsilon too small?");
    }
    ++out.proposals;
    const ParamVec theta = model.prior_sample(rng);
    const Dataset y = model.simulate(theta, rng);
    if (dist.within(model.summarize(y), s0)) out.accepted.push_back(theta);
  }
  return out;
}

/// ABC-MCMC kernel targeting the joint prior x indicator density. One pseudo
/// dataset per in-support proposal; the current state's indicator travels
/// with the state and is never re-simulated.
template <Simulator S>
class AbcKernel {
 public:
  AbcKernel(const S& model, DistanceSpec dist, Vector s0)
      : model_(&model), dist_(std::move(dist)), s0_(std::move(s0)) {}

  mcmc::ChainState init(const ParamVec& theta, RngStream& rng) const {
    mcmc::ChainState s;
    s.theta = theta;
    const double prior = model_->prior_logpdf(theta);
    bool ind = false;
    if (prior != mcmc::neg_inf) {
      ind = dist_.within(model_->summarize(model_->simulate(theta, rng)), s0_);
    }
    s.cached_log_target = ind ? prior : mcmc::neg_inf;
    s.auxiliary = ind;
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
    const Dataset y = model_->simulate(omega, rng);
    if (!dist_.within(model_->summarize(y), s0_)) return {std::move(next), false};
    const double alpha = mcmc::accept_probability(state.cached_log_target, prior_prop);
    if (rng.uniform() < alpha) {
      next.theta = omega;
      next.cached_log_target = prior_prop;
      next.auxiliary = true;
      return {std::move(next), true};
    }
    return {std::move(next), false};
  }

 private:
  const S* model_;
  DistanceSpec dist_;
  Vector s0_;
};

/// Gaussian synthetic likelihood estimate from K pseudo datasets.
struct SLEstimate {
  Vector mu_hat;
  Matrix sigma_hat;
  double log_sl = 0.0;
  long pseudo_count = 0;  // K
  bool degenerate = false;
};

template <Simulator S>
SLEstimate bsl_estimate(const S& model, const ParamVec& theta, long k, const Vector& s0,
                        RngStream& rng) {
  if (k < 2) throw std::invalid_argument("bsl_estimate: need K >= 2");
  const long p = model.summary_dim();
  Matrix summaries(k, p);
  for (long j = 0; j < k; ++j) {
    summaries.row(j) = Vector(model.summarize(model.simulate(theta, rng))).transpose();
  }
  SLEstimate est;
  est.pseudo_count = k;
  est.mu_hat = sample_mean(summaries);
  est.sigma_hat = sample_covariance(summaries);
  const double trace = est.sigma_hat.trace();
  if (!(trace > 0.0)) {  // all summaries identical
    est.log_sl = mcmc::neg_inf;
    est.degenerate = true;
    return est;
  }
  bool ok = false;
  est.log_sl = mvn_logpdf(s0, est.mu_hat, est.sigma_hat,
                          1e-8 * trace / static_cast<double>(p), &ok);
  est.degenerate = !ok;
  return est;
}

/// BSL-MCMC kernel: fresh synthetic-likelihood estimate at each in-support
/// proposal; the current state's estimate is held fixed (pseudo-marginal
/// style) until the chain moves.
template <Simulator S>
class BslKernel {
 public:
  BslKernel(const S& model, long k, Vector s0)
      : model_(&model), k_(k), s0_(std::move(s0)) {}

  mcmc::ChainState init(const ParamVec& theta, RngStream& rng) const {
    mcmc::ChainState s;
    s.theta = theta;
    const double prior = model_->prior_logpdf(theta);
    if (prior == mcmc::neg_inf) {
      s.cached_log_target = mcmc::neg_inf;
      s.auxiliary = SLEstimate{};
      return s;
    }
    SLEstimate est = bsl_estimate(*model_, theta, k_, s0_, rng);
    s.cached_log_target = est.degenerate ? mcmc::neg_inf : prior + est.log_sl;
    s.auxiliary = std::move(est);
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
    SLEstimate est = bsl_estimate(*model_, omega, k_, s0_, rng);
    if (est.degenerate) return {std::move(next), false};
    const double log_prop = prior_prop + est.log_sl;
    const double alpha = mcmc::accept_probability(state.cached_log_target, log_prop);
    if (rng.uniform() < alpha) {
      next.theta = omega;
      next.cached_log_target = log_prop;
      next.auxiliary = std::move(est);
      return {std::move(next), true};
    }
    return {std::move(next), false};
  }

 private:
  const S* model_;
  long k_;
  Vector s0_;
};

/// Distance calibration from prior-predictive pilot simulations: the scaling
/// is the componentwise MAD of the pilot summaries (s.d. fallback, then 1),
/// epsilon the requested quantile of the scaled pilot distances to s0.
struct PilotCalibration {
  Vector scaling;
  double epsilon = 0.0;
  double epsilon_quantile = 0.05;
  long pilot_size = 0;
  Matrix pilot_summaries;      // pilot_size x p
  std::vector<ParamVec> pilot_params;

  DistanceSpec distance_spec() const { return DistanceSpec{scaling, epsilon}; }

  /// Pilot draw with the smallest scaled distance to s0; a robust chain
  /// start for indicator-based kernels.
  ParamVec best_start(const Vector& s0) const;

  /// Recompute epsilon against a different observed summary (the scaling and
  /// pilot draws are reused).
  double epsilon_for(const Vector& s0, double quantile_level) const;
};

template <Simulator S>
PilotCalibration calibrate_distance(const S& model, const Vector& s0,
                                    double epsilon_quantile, long pilot_size,
                                    RngStream& rng) {
  if (pilot_size < 10) throw std::invalid_argument("calibrate_distance: pilot too small");
  if (!(epsilon_quantile > 0.0 && epsilon_quantile < 1.0)) {
    throw std::invalid_argument("calibrate_distance: quantile in (0,1)");
  }
  PilotCalibration cal;
  cal.epsilon_quantile = epsilon_quantile;
  cal.pilot_size = pilot_size;
  cal.pilot_summaries.resize(pilot_size, model.summary_dim());
  cal.pilot_params.reserve(static_cast<size_t>(pilot_size));
  for (long i = 0; i < pilot_size; ++i) {
    const ParamVec theta = model.prior_sample(rng);
    cal.pilot_summaries.row(i) =
        Vector(model.summarize(model.simulate(theta, rng))).transpose();
    cal.pilot_params.push_back(theta);
  }
  cal.scaling = mad(cal.pilot_summaries);
  for (Eigen::Index j = 0; j < cal.scaling.size(); ++j) {
    if (!(cal.scaling(j) > 0.0)) {
      const double sd = std::sqrt(
          sample_variance(cal.pilot_summaries.col(j)));
      cal.scaling(j) = sd > 0.0 ? sd : 1.0;
    }
  }
  cal.epsilon = cal.epsilon_for(s0, epsilon_quantile);
  return cal;
}

void save_pilot_json(const PilotCalibration& cal, const std::string& path);
PilotCalibration load_pilot_json(const std::string& path);

}  // namespace abmc::lfree
