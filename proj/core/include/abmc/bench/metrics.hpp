#pragma once

#include <string>
#include <vector>

#include "abmc/types.hpp"

namespace abmc::bench {

/// What the metrics need from one replicate: post-burn-in draws plus the CPU
/// cost denominator (seconds or deterministic work units, per config).
struct ReplicateSummary {
  Matrix post_draws;  // rows x d
  double cpu = 1.0;
};

struct MetricsRow {
  std::string method;
  double bias2 = 0.0;
  double var = 0.0;
  double rmse = 0.0;
  double ess_per_cpu = 0.0;
  double rel_rmse = 1.0;
  double rel_ess_per_cpu = 1.0;
  bool var_defined = true;   // false when R == 1
  long replicates = 0;
};

/// Bias^2 = Mean_s((Mean_tr theta^{rs} - theta_ref^s)^2),
/// VAR = Mean_s(Var_r(Mean_t theta^{rs})), RMSE = sqrt(Bias^2 + VAR),
/// ESS/cpu = Mean_{rs}(ESS^{rs} / CPU^r). Relative columns are filled by the
/// caller against the benchmark row.
MetricsRow compute_metrics(const std::string& method,
                           const std::vector<ReplicateSummary>& replicates,
                           const ParamVec& theta_ref);

struct MetricsTable {
  std::vector<MetricsRow> rows;

  /// Fills rel_* on every row relative to row `benchmark_index`; the
  /// benchmark's own relative entries are exactly 1.
  void fill_relative(size_t benchmark_index);

  /// metrics.csv: method, bias2, var, rmse, ess_per_cpu, rel_rmse,
  /// rel_ess_per_cpu. Values use %.17g so files parse back exactly.
  void write_csv(const std::string& path) const;
  static MetricsTable read_csv(const std::string& path);
};

}  // namespace abmc::bench
