#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "abmc/bench/metrics.hpp"
#include "abmc/io/toml.hpp"
#include "abmc/types.hpp"

namespace abmc::bench {

struct ModelSpec {
  enum class Kind { Logistic, Sv };
  Kind kind = Kind::Logistic;

  // logistic
  long n = 1000;
  long d = 2;
  std::string csv_path;  // when set, data come from file instead of simulation
  bool standardize = false;

  // stochastic volatility
  long series_length = 500;

  ParamVec theta_true;  // resolved against the benchmark defaults when empty

  ParamVec resolved_theta_true() const;
};

struct MethodSpec {
  std::string name = "RWM_FULL";
  long m = 100;                    // subsample size
  long clusters = 10;              // K (data expansion / coreset)
  double rho = 0.9999;             // correlated index keep-probability
  long batches = 3;                // J
  double fraction = 0.5;           // coreset f
  long sl_pseudo = 20;             // BSL pseudo datasets per proposal
  double epsilon_quantile = 0.05;  // ABC threshold quantile

  /// Variant label carrying the hyperparameters, e.g. RW_SS_P_C_20.
  std::string display_name() const;
};

struct RunSpec {
  long iterations = 55000;
  long burn_in = 15000;
  long adapt_interval = 200;
  long replicates = 5;
  std::uint64_t seed = 1;
  std::string out_dir;  // empty: keep everything in memory
  int threads = 0;      // 0 = hardware concurrency
  /// Metrics denominator: deterministic work units by default so reruns are
  /// byte-identical; `true` switches to measured thread CPU seconds.
  bool timing_measured = false;
  bool reference_mle = false;  // metrics against the MLE instead of theta_true
  long pilot_size = 2000;
  bool write_chains = true;
};

struct ExperimentConfig {
  ModelSpec model;
  MethodSpec method;
  RunSpec run;

  static ExperimentConfig from_toml(const io::TomlTable& table);
  static ExperimentConfig from_file(const std::string& path);
};

struct ExperimentResult {
  MetricsTable table;
  long replicates_requested = 0;
  std::vector<std::string> failures;  // one message per failed replicate
  /// Mean empirical coreset discrepancy per coreset method, when one ran.
  std::map<std::string, double> coreset_discrepancy;
};

/// Name of the benchmark sampler that anchors the relative measures:
/// full-data adaptive RWM for logistic models, a 4x-budget ABC-MCMC
/// reference for the simulator-only SV model.
std::string benchmark_method_name(ModelSpec::Kind kind);

bool method_is_benchmark(const std::string& name);

/// Runs one method plus the benchmark over R replicates and writes the
/// artifact set (chains, metrics.csv, relative.csv, figures) to out_dir.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Several methods sharing replicate data and one benchmark run.
ExperimentResult run_experiment_multi(const ModelSpec& model,
                                      const std::vector<MethodSpec>& methods,
                                      const RunSpec& run);

}  // namespace abmc::bench
