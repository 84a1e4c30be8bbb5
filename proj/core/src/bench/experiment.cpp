#include "abmc/bench/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <set>

#include "abmc/bench/report.hpp"
#include "abmc/coreset.hpp"
#include "abmc/dac.hpp"
#include "abmc/io/csv.hpp"
#include "abmc/lfree.hpp"
#include "abmc/mcmc.hpp"
#include "abmc/models/logistic.hpp"
#include "abmc/models/sv.hpp"
#include "abmc/parallel.hpp"
#include "abmc/refset.hpp"
#include "abmc/subsample.hpp"

namespace abmc::bench {

namespace fs = std::filesystem;

ParamVec ModelSpec::resolved_theta_true() const {
  if (theta_true.size() > 0) return theta_true;
  if (kind == Kind::Sv) {
    ParamVec t(3);
    t << 0.95, -2.0, -1.0;
    return t;
  }
  if (d == 2) {
    ParamVec t(2);
    t << -2.0, 2.0;
    return t;
  }
  if (d == 10) {
    ParamVec t(10);
    t << -2.0, 2.0, -3.0, 4.0, 1.0, 2.0, -3.0, -4.0, 2.0, 1.0;
    return t / 3.0;
  }
  throw io::ConfigError("model.theta_true required for d outside {2, 10}");
}

namespace {

std::string format_fraction(double f) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", f);
  return buf;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::string MethodSpec::display_name() const {
  if (name == "RWM_FULL" || name == "RW_ABC" || name == "RW_AABC" ||
      name == "RW_ABSL" || name == "ABC_REF") {
    return name;
  }
  if (name == "DAC") return "DAC_" + std::to_string(batches);
  if (name == "RW_SS_P_R") return "RW_SS_P_R_" + std::to_string(m);
  if (name == "RW_SS_P_C") return "RW_SS_P_C_" + std::to_string(m);
  if (name == "RW_SS_D_R") {
    return "RW_SS_D_R_" + std::to_string(clusters) + "_" + std::to_string(m);
  }
  if (name == "RW_SS_D_C") {
    return "RW_SS_D_C_" + std::to_string(clusters) + "_" + std::to_string(m);
  }
  if (name == "RW_CO") {
    return "RW_CO_" + std::to_string(clusters) + "_" + format_fraction(fraction);
  }
  if (name == "RW_BSL") return "RW_BSL_" + std::to_string(sl_pseudo);
  throw io::ConfigError("unknown method name: " + name);
}

std::string benchmark_method_name(ModelSpec::Kind kind) {
  return kind == ModelSpec::Kind::Logistic ? "RWM_FULL" : "ABC_REF";
}

bool method_is_benchmark(const std::string& name) {
  return name == "RWM_FULL" || name == "ABC_REF";
}

ExperimentConfig ExperimentConfig::from_toml(const io::TomlTable& t) {
  ExperimentConfig cfg;
  const std::string kind = t.get_string("model.kind", "logistic");
  if (kind == "logistic") {
    cfg.model.kind = ModelSpec::Kind::Logistic;
  } else if (kind == "sv") {
    cfg.model.kind = ModelSpec::Kind::Sv;
  } else {
    throw io::ConfigError("model.kind must be 'logistic' or 'sv'");
  }
  cfg.model.n = t.get_long("model.N", cfg.model.n);
  cfg.model.d = t.get_long("model.d", cfg.model.d);
  cfg.model.series_length = t.get_long("model.series_length", cfg.model.series_length);
  cfg.model.csv_path = t.get_string("model.csv", "");
  cfg.model.standardize = t.get_bool("model.standardize", false);
  const auto tt = t.get_double_array("model.theta_true");
  if (!tt.empty()) {
    cfg.model.theta_true = Eigen::Map<const Vector>(tt.data(), static_cast<long>(tt.size()));
  }

  cfg.method.name = t.get_string("method.name", cfg.method.name);
  cfg.method.m = t.get_long("method.m", cfg.method.m);
  cfg.method.clusters = t.get_long("method.K", cfg.method.clusters);
  cfg.method.rho = t.get_double("method.rho", cfg.method.rho);
  cfg.method.batches = t.get_long("method.J", cfg.method.batches);
  cfg.method.fraction = t.get_double("method.f", cfg.method.fraction);
  cfg.method.sl_pseudo = t.get_long("method.sl_K", cfg.method.sl_pseudo);
  cfg.method.epsilon_quantile =
      t.get_double("method.epsilon_quantile", cfg.method.epsilon_quantile);

  cfg.run.iterations = t.get_long("run.M", cfg.run.iterations);
  cfg.run.burn_in = t.get_long("run.B", cfg.run.burn_in);
  cfg.run.adapt_interval = t.get_long("run.adapt_interval", cfg.run.adapt_interval);
  cfg.run.replicates = t.get_long("run.R", cfg.run.replicates);
  cfg.run.seed = static_cast<std::uint64_t>(t.get_long("run.seed", 1));
  cfg.run.out_dir = t.get_string("run.out_dir", "");
  cfg.run.threads = static_cast<int>(t.get_long("run.threads", 0));
  const std::string timing = t.get_string("run.timing", "counted");
  if (timing == "measured") {
    cfg.run.timing_measured = true;
  } else if (timing == "counted") {
    cfg.run.timing_measured = false;
  } else {
    throw io::ConfigError("run.timing must be 'counted' or 'measured'");
  }
  const std::string reference = t.get_string("run.reference", "true");
  if (reference == "mle") {
    cfg.run.reference_mle = true;
  } else if (reference == "true") {
    cfg.run.reference_mle = false;
  } else {
    throw io::ConfigError("run.reference must be 'true' or 'mle'");
  }
  cfg.run.pilot_size = t.get_long("run.pilot_size", cfg.run.pilot_size);
  cfg.run.write_chains = t.get_bool("run.write_chains", true);

  if (cfg.run.iterations <= cfg.run.burn_in) {
    throw io::ConfigError("run.M must exceed run.B");
  }
  if (cfg.run.replicates < 1) throw io::ConfigError("run.R must be >= 1");
  cfg.method.display_name();  // validates the method name
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  return from_toml(io::TomlTable::parse_file(path));
}

namespace {

constexpr double qnan = std::numeric_limits<double>::quiet_NaN();

struct MethodOutput {
  Matrix post;            // post burn-in draws (or combined draws for DAC)
  mcmc::Chain chain;      // raw chain when one exists
  bool has_chain = false;
  double cpu_seconds = 0.0;
  double cost_units = 0.0;
  double acceptance = 0.0;
  double discrepancy = qnan;  // coreset only
};

struct ReplicateOutput {
  std::vector<MethodOutput> methods;  // aligned with the method list
  ParamVec theta_ref;
  bool failed = false;
  std::string error;
};

mcmc::RunOptions make_run_options(const RunSpec& run, long m_override = 0,
                                  long b_override = 0) {
  mcmc::RunOptions opts;
  opts.iterations = m_override > 0 ? m_override : run.iterations;
  opts.burn_in = b_override > 0 ? b_override : run.burn_in;
  opts.adapt_interval = run.adapt_interval;
  return opts;
}

// ---- logistic methods ----

MethodOutput run_logistic_rwm_full(const models::LogisticModel& model,
                                   const RunSpec& run, RngStream& rng) {
  const long long evals0 = model.item_evals();
  mcmc::LogTarget target;
  target.evaluate = [&model](const ParamVec& th) {
    return model.full_loglik(th) + model.prior_logpdf(th);
  };
  mcmc::MhKernel kernel(target);
  MethodOutput out;
  out.chain = mcmc::run_chain(kernel, model.prior().mean, make_run_options(run), rng);
  out.has_chain = true;
  out.post = out.chain.post_burn_in();
  out.cpu_seconds = out.chain.cpu_seconds;
  out.acceptance = out.chain.acceptance_rate();
  out.cost_units = static_cast<double>(model.item_evals() - evals0);
  return out;
}

MethodOutput run_logistic_dac(const models::LogisticModel& model, const MethodSpec& spec,
                              const RunSpec& run, RngStream& rng) {
  const long j = spec.batches;
  const Partition part = [&] {
    RngStream r = rng.child(1);
    return partition_dataset(model.n_items(), j, r);
  }();

  std::vector<dac::BatchDraws> draws;
  draws.reserve(static_cast<size_t>(j));
  MethodOutput out;
  double accept_acc = 0.0;
  for (long b = 0; b < j; ++b) {
    const auto& batch = part.batches[static_cast<size_t>(b)];
    Matrix xb(static_cast<long>(batch.size()), model.dim());
    Vector yb(static_cast<long>(batch.size()));
    for (size_t i = 0; i < batch.size(); ++i) {
      xb.row(static_cast<long>(i)) = model.design().row(batch[i]);
      yb(static_cast<long>(i)) = model.responses()(batch[i]);
    }
    models::LogisticModel sub(std::move(xb), std::move(yb), model.prior());
    mcmc::LogTarget target;
    target.evaluate = [&sub, j](const ParamVec& th) {
      return sub.full_loglik(th) + sub.prior_logpdf(th) / static_cast<double>(j);
    };
    mcmc::MhKernel kernel(target);
    RngStream batch_rng = rng.child(static_cast<std::uint64_t>(10 + b));
    const mcmc::Chain chain =
        mcmc::run_chain(kernel, model.prior().mean, make_run_options(run), batch_rng);
    accept_acc += chain.acceptance_rate();
    // Workers run in parallel in deployment terms: the replicate pays the
    // slowest batch, not the sum.
    out.cpu_seconds = std::max(out.cpu_seconds, chain.cpu_seconds);
    out.cost_units = std::max(out.cost_units, static_cast<double>(sub.item_evals()));
    draws.push_back(dac::BatchDraws::from_chain(chain));
  }
  out.post = dac::consensus_combine(draws);
  out.acceptance = accept_acc / static_cast<double>(j);
  return out;
}

MethodOutput run_logistic_subsample(const models::LogisticModel& model,
                                    const MethodSpec& spec, const RunSpec& run,
                                    RngStream& rng) {
  const bool data_expanded = spec.name == "RW_SS_D_R" || spec.name == "RW_SS_D_C";
  const bool correlated = spec.name == "RW_SS_P_C" || spec.name == "RW_SS_D_C";
  const double rho = correlated ? spec.rho : 0.0;

  const ParamVec theta_star = model.mle();
  const long long evals0 = model.item_evals();
  subsample::ControlVariateCache cache;
  if (data_expanded) {
    RngStream cluster_rng = rng.child(1);
    const Clustering clustering = kmeans(model.cv_features(), spec.clusters, cluster_rng);
    cache = subsample::build_cv_cache(model, theta_star, clustering);
  } else {
    cache = subsample::build_cv_cache(model, theta_star);
  }

  subsample::SubsampleKernel<models::LogisticModel> kernel(model, cache, spec.m, rho);
  MethodOutput out;
  out.chain = mcmc::run_chain(kernel, model.prior().mean, make_run_options(run), rng);
  out.has_chain = true;
  out.post = out.chain.post_burn_in();
  out.cpu_seconds = out.chain.cpu_seconds;
  out.acceptance = out.chain.acceptance_rate();
  out.cost_units = static_cast<double>(model.item_evals() - evals0);
  return out;
}

MethodOutput run_logistic_coreset(const models::LogisticModel& model,
                                  const MethodSpec& spec, const RunSpec& run,
                                  RngStream& rng, const Matrix* benchmark_post) {
  const Matrix z = model.cv_features();
  RngStream cluster_rng = rng.child(1);
  const Clustering clustering = kmeans(z, spec.clusters, cluster_rng);
  const double radius = coreset::compute_radius(clustering);
  const coreset::SensitivityProfile profile =
      coreset::sensitivity_bounds(z, clustering, radius);
  long coreset_size = static_cast<long>(spec.fraction * static_cast<double>(model.n_items()));
  if (coreset_size < 1) coreset_size = 1;
  RngStream draw_rng = rng.child(2);
  const coreset::Coreset cs = coreset::sample_coreset(profile, coreset_size, draw_rng);

  std::vector<double> support_weights;
  support_weights.reserve(cs.support.size());
  for (const long i : cs.support) support_weights.push_back(cs.weights[static_cast<size_t>(i)]);

  const long long evals0 = model.item_evals();
  mcmc::LogTarget target;
  target.evaluate = [&model, &cs, &support_weights](const ParamVec& th) {
    return model.weighted_loglik(cs.support, support_weights, th) + model.prior_logpdf(th);
  };
  mcmc::MhKernel kernel(target);
  MethodOutput out;
  out.chain = mcmc::run_chain(kernel, model.prior().mean, make_run_options(run), rng);
  out.has_chain = true;
  out.post = out.chain.post_burn_in();
  out.cpu_seconds = out.chain.cpu_seconds;
  out.acceptance = out.chain.acceptance_rate();
  out.cost_units = static_cast<double>(model.item_evals() - evals0);

  if (benchmark_post != nullptr && benchmark_post->rows() > 0) {
    // Discrepancy grid: ~200 draws spread over the benchmark chain.
    std::vector<ParamVec> grid;
    const long rows = benchmark_post->rows();
    const long stride = std::max<long>(1, rows / 200);
    for (long t = 0; t < rows; t += stride) grid.push_back(benchmark_post->row(t).transpose());
    out.discrepancy = coreset::discrepancy_report(model, cs, grid);
  }
  return out;
}

// ---- stochastic volatility methods ----

struct SvContext {
  const models::SvModel* model;
  Vector s0;
  const lfree::PilotCalibration* pilot;
  double epsilon;  // per-replicate threshold
  ParamVec abc_start;
};

MethodOutput run_sv_method(const MethodSpec& spec, const SvContext& ctx,
                           const RunSpec& run, RngStream& rng) {
  const models::SvModel& model = *ctx.model;
  const long long sims0 = model.sim_calls();
  const lfree::DistanceSpec dist{ctx.pilot->scaling, ctx.epsilon};

  MethodOutput out;
  if (spec.name == "RW_ABC" || spec.name == "ABC_REF") {
    lfree::AbcKernel<models::SvModel> kernel(model, dist, ctx.s0);
    const bool reference = spec.name == "ABC_REF";
    const auto opts = reference ? make_run_options(run, 4 * run.iterations, 4 * run.burn_in)
                                : make_run_options(run);
    out.chain = mcmc::run_chain(kernel, ctx.abc_start, opts, rng);
  } else if (spec.name == "RW_AABC") {
    refset::ReferenceSet z(model.dim(), model.summary_dim(), 1);
    refset::AabcKernel<models::SvModel> kernel(model, dist, ctx.s0, z);
    out.chain = mcmc::run_chain(kernel, ctx.abc_start, make_run_options(run), rng);
  } else if (spec.name == "RW_BSL") {
    lfree::BslKernel<models::SvModel> kernel(model, spec.sl_pseudo, ctx.s0);
    out.chain = mcmc::run_chain(kernel, model.prior_mean(), make_run_options(run), rng);
  } else if (spec.name == "RW_ABSL") {
    refset::ReferenceSet z(model.dim(), model.summary_dim(), 1);
    refset::AbslKernel<models::SvModel> kernel(model, ctx.s0, z);
    out.chain = mcmc::run_chain(kernel, model.prior_mean(), make_run_options(run), rng);
  } else {
    throw io::ConfigError("method " + spec.name + " is not available for the SV model");
  }
  out.has_chain = true;
  out.post = out.chain.post_burn_in();
  out.cpu_seconds = out.chain.cpu_seconds;
  out.acceptance = out.chain.acceptance_rate();
  out.cost_units = static_cast<double>(model.sim_calls() - sims0);
  return out;
}

bool logistic_method(const std::string& name) {
  return name == "RWM_FULL" || name == "DAC" || name == "RW_CO" ||
         name == "RW_SS_P_R" || name == "RW_SS_P_C" || name == "RW_SS_D_R" ||
         name == "RW_SS_D_C";
}

void write_figures(const MetricsTable& table, const std::string& dir) {
  fs::create_directories(dir);
  write_relative_figure(table, dir + "/relative.svg");
}

}  // namespace

ExperimentResult run_experiment_multi(const ModelSpec& model_spec,
                                      const std::vector<MethodSpec>& methods,
                                      const RunSpec& run) {
  if (methods.empty()) throw std::invalid_argument("run_experiment_multi: no methods");
  const ParamVec theta_true = model_spec.resolved_theta_true();

  // Benchmark first; requested methods keep their order after it.
  std::vector<MethodSpec> all;
  MethodSpec bench_spec;
  bench_spec.name = benchmark_method_name(model_spec.kind);
  bench_spec.epsilon_quantile = methods.front().epsilon_quantile;
  all.push_back(bench_spec);
  for (const auto& m : methods) {
    if (m.display_name() == bench_spec.display_name()) continue;
    all.push_back(m);
  }

  for (const auto& m : all) {
    const bool is_logistic = logistic_method(m.name);
    if (is_logistic != (model_spec.kind == ModelSpec::Kind::Logistic)) {
      throw io::ConfigError("method " + m.name + " does not apply to this model kind");
    }
  }

  const RngStream master(run.seed);

  // Shared CSV data and the shared SV pilot are built once.
  std::optional<Dataset> csv_data;
  if (model_spec.kind == ModelSpec::Kind::Logistic && !model_spec.csv_path.empty()) {
    csv_data = load_dataset_csv(model_spec.csv_path, {model_spec.standardize});
  }
  std::optional<lfree::PilotCalibration> pilot;
  if (model_spec.kind == ModelSpec::Kind::Sv) {
    const models::SvModel pilot_model(model_spec.series_length);
    RngStream pilot_rng = master.child(1000003);
    // The pilot is calibrated once; thresholds are re-derived per replicate
    // against each replicate's observed summary.
    const Vector s0_probe = [&] {
      RngStream r = master.child(1000004);
      return Vector(pilot_model.summarize(
          pilot_model.simulate(theta_true, r)));
    }();
    pilot = lfree::calibrate_distance(pilot_model, s0_probe,
                                      methods.front().epsilon_quantile,
                                      run.pilot_size, pilot_rng);
  }

  const long r_total = run.replicates;
  std::vector<ReplicateOutput> reps(static_cast<size_t>(r_total));

  parallel_for(r_total, run.threads, [&](long r) {
    ReplicateOutput& rep = reps[static_cast<size_t>(r)];
    try {
      RngStream rep_rng = master.child(static_cast<std::uint64_t>(r));
      rep.methods.resize(all.size());

      if (model_spec.kind == ModelSpec::Kind::Logistic) {
        RngStream data_rng = rep_rng.child(0);
        const models::LogisticModel model =
            csv_data ? models::logistic_from_dataset(*csv_data)
                     : models::generate_logistic(model_spec.n, model_spec.d, theta_true,
                                                 data_rng);
        rep.theta_ref = run.reference_mle ? model.mle() : theta_true;

        const Matrix* bench_post = nullptr;
        for (size_t mi = 0; mi < all.size(); ++mi) {
          const MethodSpec& spec = all[mi];
          RngStream method_rng = rep_rng.child(fnv1a64(spec.display_name()));
          MethodOutput& out = rep.methods[mi];
          if (spec.name == "RWM_FULL") {
            out = run_logistic_rwm_full(model, run, method_rng);
            bench_post = &rep.methods[mi].post;
          } else if (spec.name == "DAC") {
            out = run_logistic_dac(model, spec, run, method_rng);
          } else if (spec.name == "RW_CO") {
            out = run_logistic_coreset(model, spec, run, method_rng, bench_post);
          } else {
            out = run_logistic_subsample(model, spec, run, method_rng);
          }
        }
      } else {
        RngStream data_rng = rep_rng.child(0);
        const models::SvModel model(model_spec.series_length);
        const Vector observed = models::sv_simulate(theta_true, model_spec.series_length,
                                                    data_rng);
        Dataset obs;
        obs.response = observed;
        obs.covariates.resize(observed.size(), 0);

        SvContext ctx;
        ctx.model = &model;
        ctx.s0 = model.summarize(obs);
        ctx.pilot = &*pilot;
        ctx.epsilon = pilot->epsilon_for(ctx.s0, methods.front().epsilon_quantile);
        ctx.abc_start = pilot->best_start(ctx.s0);
        rep.theta_ref = theta_true;

        for (size_t mi = 0; mi < all.size(); ++mi) {
          RngStream method_rng = rep_rng.child(fnv1a64(all[mi].display_name()));
          rep.methods[mi] = run_sv_method(all[mi], ctx, run, method_rng);
        }
      }
    } catch (const std::exception& ex) {
      rep.failed = true;
      rep.error = "replicate " + std::to_string(r) + ": " + ex.what();
    }
  });

  ExperimentResult result;
  result.replicates_requested = r_total;
  for (const auto& rep : reps) {
    if (rep.failed) result.failures.push_back(rep.error);
  }
  const long r_ok = r_total - static_cast<long>(result.failures.size());
  if (r_ok < 1) {
    throw std::runtime_error("run_experiment: every replicate failed; first error: " +
                             (result.failures.empty() ? std::string("?") : result.failures[0]));
  }

  ParamVec theta_ref = theta_true;
  for (const auto& rep : reps) {
    if (!rep.failed) {
      theta_ref = rep.theta_ref;
      break;
    }
  }

  for (size_t mi = 0; mi < all.size(); ++mi) {
    std::vector<ReplicateSummary> summaries;
    summaries.reserve(static_cast<size_t>(r_ok));
    double disc_acc = 0.0;
    long disc_n = 0;
    for (const auto& rep : reps) {
      if (rep.failed) continue;
      const MethodOutput& out = rep.methods[mi];
      ReplicateSummary s;
      s.post_draws = out.post;
      s.cpu = run.timing_measured ? out.cpu_seconds : out.cost_units;
      if (!(s.cpu > 0.0)) s.cpu = 1e-12;
      summaries.push_back(std::move(s));
      if (!std::isnan(out.discrepancy)) {
        disc_acc += out.discrepancy;
        ++disc_n;
      }
    }
    result.table.rows.push_back(
        compute_metrics(all[mi].display_name(), summaries, theta_ref));
    if (disc_n > 0) {
      result.coreset_discrepancy[all[mi].display_name()] = disc_acc / disc_n;
    }
  }
  result.table.fill_relative(0);

  if (!run.out_dir.empty()) {
    fs::create_directories(run.out_dir);
    result.table.write_csv(run.out_dir + "/metrics.csv");

    {
      io::CsvWriter w(run.out_dir + "/relative.csv");
      w.field("method").field("rel_rmse").field("rel_ess_per_cpu");
      w.end_row();
      for (const auto& row : result.table.rows) {
        w.field(row.method).field(row.rel_rmse).field(row.rel_ess_per_cpu);
        w.end_row();
      }
      w.close();
    }

    {
      io::CsvWriter w(run.out_dir + "/timings.csv");
      w.field("method").field("replicate").field("cpu_seconds").field("cost_units")
          .field("acceptance");
      w.end_row();
      for (long r = 0; r < r_total; ++r) {
        if (reps[static_cast<size_t>(r)].failed) continue;
        for (size_t mi = 0; mi < all.size(); ++mi) {
          const MethodOutput& out = reps[static_cast<size_t>(r)].methods[mi];
          w.field(all[mi].display_name()).field(r).field(out.cpu_seconds)
              .field(out.cost_units).field(out.acceptance);
          w.end_row();
        }
      }
      w.close();
    }

    if (run.write_chains) {
      fs::create_directories(run.out_dir + "/chains");
      const bool single = all.size() == 2;  // benchmark + one method
      for (long r = 0; r < r_total; ++r) {
        const auto& rep = reps[static_cast<size_t>(r)];
        if (rep.failed) continue;
        for (size_t mi = 0; mi < all.size(); ++mi) {
          const MethodOutput& out = rep.methods[mi];
          std::string path;
          if (single) {
            path = mi == 0 ? run.out_dir + "/chains/bench_rep" + std::to_string(r) + ".csv"
                           : run.out_dir + "/chains/rep" + std::to_string(r) + ".csv";
          } else {
            path = run.out_dir + "/chains/" + all[mi].display_name() + "_rep" +
                   std::to_string(r) + ".csv";
          }
          if (out.has_chain) {
            mcmc::save_chain_csv(out.chain, path);
          } else {
            mcmc::Chain pseudo;  // combined DAC draws in the standard layout
            pseudo.samples = out.post;
            pseudo.accept_flags.assign(static_cast<size_t>(out.post.rows()), 1);
            pseudo.burn_in = 0;
            pseudo.cpu_seconds = out.cpu_seconds;
            mcmc::save_chain_csv(pseudo, path);
          }
        }
      }
    }

    if (!result.coreset_discrepancy.empty()) {
      io::CsvWriter w(run.out_dir + "/coreset_discrepancy.csv");
      w.field("method").field("mean_relative_discrepancy");
      w.end_row();
      for (const auto& [name, v] : result.coreset_discrepancy) {
        w.field(name).field(v);
        w.end_row();
      }
      w.close();
    }

    if (pilot) {
      lfree::save_pilot_json(*pilot, run.out_dir + "/pilot.json");
    }

    write_figures(result.table, run.out_dir + "/figures");
  }
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  return run_experiment_multi(config.model, {config.method}, config.run);
}

}  // namespace abmc::bench
