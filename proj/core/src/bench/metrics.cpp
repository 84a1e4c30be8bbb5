#include "abmc/bench/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "abmc/bench/ess.hpp"
#include "abmc/io/csv.hpp"
#include "abmc/stats.hpp"

namespace abmc::bench {

MetricsRow compute_metrics(const std::string& method,
                           const std::vector<ReplicateSummary>& replicates,
                           const ParamVec& theta_ref) {
  if (replicates.empty()) throw std::invalid_argument("compute_metrics: no replicates");
  const long r = static_cast<long>(replicates.size());
  const long d = replicates.front().post_draws.cols();
  if (theta_ref.size() != d) {
    throw std::invalid_argument("compute_metrics: reference dimension mismatch");
  }

  Matrix rep_means(r, d);  // Mean_t per replicate and component
  for (long i = 0; i < r; ++i) {
    const auto& post = replicates[static_cast<size_t>(i)].post_draws;
    if (post.cols() != d) throw std::invalid_argument("compute_metrics: ragged replicates");
    rep_means.row(i) = post.colwise().mean();
  }

  MetricsRow row;
  row.method = method;
  row.replicates = r;

  // Bias^2: grand mean over (t, r) against the reference, averaged over s.
  const Vector grand = rep_means.colwise().mean();
  row.bias2 = (grand - theta_ref).array().square().mean();

  if (r >= 2) {
    double var_acc = 0.0;
    for (long s = 0; s < d; ++s) var_acc += sample_variance(rep_means.col(s));
    row.var = var_acc / static_cast<double>(d);
  } else {
    row.var = 0.0;
    row.var_defined = false;
  }
  row.rmse = std::sqrt(row.bias2 + row.var);

  double ess_cpu_acc = 0.0;
  for (long i = 0; i < r; ++i) {
    const auto& rep = replicates[static_cast<size_t>(i)];
    for (long s = 0; s < d; ++s) {
      ess_cpu_acc += ess(rep.post_draws.col(s)).value / rep.cpu;
    }
  }
  row.ess_per_cpu = ess_cpu_acc / static_cast<double>(r * d);
  return row;
}

void MetricsTable::fill_relative(size_t benchmark_index) {
  if (benchmark_index >= rows.size()) {
    throw std::invalid_argument("fill_relative: bad benchmark index");
  }
  const MetricsRow& bench = rows[benchmark_index];
  for (size_t i = 0; i < rows.size(); ++i) {
    if (i == benchmark_index) {
      rows[i].rel_rmse = 1.0;
      rows[i].rel_ess_per_cpu = 1.0;
    } else {
      rows[i].rel_rmse = rows[i].rmse / bench.rmse;
      rows[i].rel_ess_per_cpu = rows[i].ess_per_cpu / bench.ess_per_cpu;
    }
  }
}

void MetricsTable::write_csv(const std::string& path) const {
  io::CsvWriter w(path);
  w.field("method").field("bias2").field("var").field("rmse").field("ess_per_cpu")
      .field("rel_rmse").field("rel_ess_per_cpu");
  w.end_row();
  for (const auto& row : rows) {
    w.field(row.method).field(row.bias2);
    if (row.var_defined) {
      w.field(row.var).field(row.rmse);
    } else {
      w.field("nan").field("nan");
    }
    w.field(row.ess_per_cpu).field(row.rel_rmse).field(row.rel_ess_per_cpu);
    w.end_row();
  }
  w.close();
}

MetricsTable MetricsTable::read_csv(const std::string& path) {
  io::CsvReader r(path);
  const auto header = r.read_row();
  if (header.size() != 7 || header[0] != "method") {
    throw std::runtime_error("MetricsTable::read_csv: unexpected header in " + path);
  }
  MetricsTable table;
  while (r.has_next()) {
    const auto f = r.read_row();
    if (f.size() != 7) continue;
    MetricsRow row;
    row.method = f[0];
    row.bias2 = std::stod(f[1]);
    row.var = std::stod(f[2]);
    row.rmse = std::stod(f[3]);
    row.ess_per_cpu = std::stod(f[4]);
    row.rel_rmse = std::stod(f[5]);
    row.rel_ess_per_cpu = std::stod(f[6]);
    row.var_defined = !std::isnan(row.var);
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace abmc::bench
