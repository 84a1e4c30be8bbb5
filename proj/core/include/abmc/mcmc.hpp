#pragma once

#include <any>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "abmc/rng.hpp"
#include "abmc/stats.hpp"
#include "abmc/types.hpp"

namespace abmc::mcmc {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

/// Log unnormalized target density. `evaluate` may be a stochastic estimator
/// (is_noisy = true); the chain then caches the value at the current state
/// and never silently re-evaluates it there.
struct LogTarget {
  std::function<double(const ParamVec&)> evaluate;
  bool is_noisy = false;
  std::function<bool(const ParamVec&)> support_check;  // optional

  double operator()(const ParamVec& theta) const {
    if (support_check && !support_check(theta)) return neg_inf;
    const double v = evaluate(theta);
    if (std::isnan(v)) {
      throw std::runtime_error("LogTarget: evaluation returned NaN");
    }
    return v;
  }
};

/// Gaussian random-walk proposal: omega ~ N(theta, scale * covariance).
/// `covariance` is kept symmetric positive definite by the diagonal jitter.
struct ProposalSpec {
  Matrix covariance;  // jittered base covariance
  double scale = 1.0; // multiplier, 2.38^2/d by default
  double jitter = 1e-6;

  static double default_scale(long d) { return 2.38 * 2.38 / static_cast<double>(d); }

  static ProposalSpec from_covariance(const Matrix& cov, double scale, double jitter = 1e-6) {
    ProposalSpec spec;
    spec.covariance = cov;
    spec.covariance.diagonal().array() += jitter;
    spec.scale = scale;
    spec.jitter = jitter;
    spec.chol_ = cholesky_with_jitter(cov, jitter) * std::sqrt(scale);
    return spec;
  }

  /// Identity base covariance scaled so the step s.d. is `step_sd` per axis.
  static ProposalSpec initial(long d, double step_sd = 0.1, double jitter = 1e-6) {
    const double scale = default_scale(d);
    const double base = step_sd * step_sd / scale;
    return from_covariance(Matrix::Identity(d, d) * base, scale, jitter);
  }

  Matrix effective_covariance() const { return scale * covariance; }

  ParamVec draw(const ParamVec& mean, RngStream& rng) const {
    return mvn_sample(mean, chol_, rng);
  }

 private:
  Matrix chol_;  // lower factor of scale * covariance
};

/// Snapshot of a running chain: current point, the cached log target there,
/// and an opaque per-kernel cache (index vectors, synthetic-likelihood
/// estimates, and the like).
struct ChainState {
  ParamVec theta;
  double cached_log_target = neg_inf;
  long iteration = 0;
  std::any auxiliary;
};

struct StepResult {
  ChainState state;
  bool accepted = false;
};

template <typename K>
concept Kernel = requires(K k, const ChainState& s, const ProposalSpec& p,
                          const ParamVec& th, RngStream& rng) {
  { k.init(th, rng) } -> std::same_as<ChainState>;
  { k.step(s, p, rng) } -> std::same_as<StepResult>;
};

/// Acceptance probability for a symmetric proposal given current and proposed
/// log target values. Always in [0, 1]; -inf current with finite proposal
/// accepts with probability one.
inline double accept_probability(double log_current, double log_proposed) {
  if (std::isnan(log_current) || std::isnan(log_proposed)) {
    throw std::runtime_error("accept_probability: NaN log target");
  }
  if (log_proposed == neg_inf) return 0.0;
  if (log_current == neg_inf) return 1.0;
  const double diff = log_proposed - log_current;
  return diff >= 0.0 ? 1.0 : std::exp(diff);
}

/// Plain Metropolis-Hastings kernel over an exact or noisy log target.
class MhKernel {
 public:
  explicit MhKernel(LogTarget target) : target_(std::move(target)) {}

  ChainState init(const ParamVec& theta, RngStream&) const {
    ChainState s;
    s.theta = theta;
    s.cached_log_target = target_(theta);
    return s;
  }

  StepResult step(const ChainState& state, const ProposalSpec& proposal,
                  RngStream& rng) const {
    const ParamVec omega = proposal.draw(state.theta, rng);
    ChainState next = state;
    next.iteration = state.iteration + 1;
    if (!omega.allFinite()) {
      return {std::move(next), false};  // record a rejection, do not evaluate
    }
    const double log_prop = target_(omega);
    const double alpha = accept_probability(state.cached_log_target, log_prop);
    if (rng.uniform() < alpha) {
      next.theta = omega;
      next.cached_log_target = log_prop;  // noisy targets keep this estimate
      return {std::move(next), true};
    }
    return {std::move(next), false};
  }

  const LogTarget& target() const { return target_; }

 private:
  LogTarget target_;
};

/// One Metropolis-Hastings update (symmetric Gaussian proposal).
inline StepResult mh_step(const ChainState& state, const LogTarget& target,
                          const ProposalSpec& proposal, RngStream& rng) {
  MhKernel k(target);
  return k.step(state, proposal, rng);
}

/// Haario-style covariance refresh from the chain history (all rows so far).
/// With fewer than d+1 rows the previous spec is returned unchanged.
ProposalSpec adapt_covariance(const Matrix& history, const ProposalSpec& previous);

struct AdaptationRecord {
  long iteration = 0;
  Matrix covariance;  // effective proposal covariance at that point
};

/// Ordered MH samples with burn-in marker, accept flags and CPU timing.
struct Chain {
  Matrix samples;                 // M x d, row 0 is the initial state
  std::vector<std::uint8_t> accept_flags;
  long burn_in = 0;
  double cpu_seconds = 0.0;
  std::vector<AdaptationRecord> adaptation_log;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  long length() const { return samples.rows(); }
  long dim() const { return samples.cols(); }
  Matrix post_burn_in() const { return samples.bottomRows(samples.rows() - burn_in); }
  double acceptance_rate() const;
};

struct RunOptions {
  long iterations = 55000;     // M, includes burn-in
  long burn_in = 15000;        // B
  long adapt_interval = 200;   // proposal refresh cadence inside burn-in
  double initial_step_sd = 0.1;
  std::optional<Matrix> initial_covariance;  // base covariance override
  double jitter = 1e-6;
  // Abort when the target stays -inf for this many initial proposals.
  long max_initial_rejects = 1000;
};

/// Runs a kernel for M iterations with finite adaptation during burn-in; the
/// proposal is frozen afterwards. cpu_seconds is the thread CPU time of the
/// whole loop.
template <Kernel K>
Chain run_chain(K& kernel, const ParamVec& initial, const RunOptions& opts,
                RngStream& rng);

/// Chain CSV (iter, accepted, theta_1..theta_d) plus a JSON metadata sidecar
/// (M, B, seed, cpu_seconds) at path + ".json".
void save_chain_csv(const Chain& chain, const std::string& path);
Chain load_chain_csv(const std::string& path);

/// Thread CPU time in seconds.
double thread_cpu_seconds();

// ---- implementation ----

template <Kernel K>
Chain run_chain(K& kernel, const ParamVec& initial, const RunOptions& opts,
                RngStream& rng) {
  if (opts.iterations <= opts.burn_in || opts.burn_in < 0) {
    throw std::invalid_argument("run_chain: need M > B >= 0");
  }
  const long m = opts.iterations;
  const long d = initial.size();

  Chain chain;
  chain.samples.resize(m, d);
  chain.accept_flags.assign(static_cast<size_t>(m), 0);
  chain.burn_in = opts.burn_in;
  chain.seed = rng.seed();
  chain.stream_id = rng.stream_id();

  const double t0 = thread_cpu_seconds();

  ChainState state = kernel.init(initial, rng);
  state.iteration = 0;
  chain.samples.row(0) = state.theta.transpose();
  chain.accept_flags[0] = 1;

  ProposalSpec proposal =
      opts.initial_covariance
          ? ProposalSpec::from_covariance(*opts.initial_covariance,
                                          ProposalSpec::default_scale(d), opts.jitter)
          : ProposalSpec::initial(d, opts.initial_step_sd, opts.jitter);

  bool never_in_support = (state.cached_log_target == neg_inf);
  for (long t = 1; t < m; ++t) {
    if (opts.adapt_interval > 0 && t <= opts.burn_in && t % opts.adapt_interval == 0) {
      ProposalSpec refreshed = adapt_covariance(chain.samples.topRows(t), proposal);
      refreshed.jitter = opts.jitter;
      proposal = refreshed;
      chain.adaptation_log.push_back({t, proposal.effective_covariance()});
    }
    StepResult r = kernel.step(state, proposal, rng);
    state = std::move(r.state);
    state.iteration = t;
    chain.samples.row(t) = state.theta.transpose();
    chain.accept_flags[static_cast<size_t>(t)] = r.accepted ? 1 : 0;
    if (never_in_support) {
      if (state.cached_log_target != neg_inf) {
        never_in_support = false;
      } else if (t >= opts.max_initial_rejects) {
        throw std::runtime_error(
            "run_chain: target evaluated to -inf for the first " +
            std::to_string(t) + " proposals; check the initial point and support");
      }
    }
  }

  chain.cpu_seconds = thread_cpu_seconds() - t0;
  return chain;
}

}  // namespace abmc::mcmc
