#include "abmc/mcmc.hpp"

#include <ctime>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "abmc/io/csv.hpp"

namespace abmc::mcmc {

double Chain::acceptance_rate() const {
  if (accept_flags.size() <= 1) return 0.0;
  const double accepted =
      std::accumulate(accept_flags.begin() + 1, accept_flags.end(), 0.0);
  return accepted / static_cast<double>(accept_flags.size() - 1);
}

ProposalSpec adapt_covariance(const Matrix& history, const ProposalSpec& previous) {
  const long d = history.cols();
  if (history.rows() < d + 1) return previous;
  const Matrix cov = sample_covariance(history);
  return ProposalSpec::from_covariance(cov, ProposalSpec::default_scale(d),
                                       previous.jitter);
}

double thread_cpu_seconds() {
#if defined(CLOCK_THREAD_CPUTIME_ID)
  timespec ts;
  if (clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts) == 0) {
    return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
  }
#endif
  return static_cast<double>(std::clock()) / CLOCKS_PER_SEC;
}

void save_chain_csv(const Chain& chain, const std::string& path) {
  io::CsvWriter w(path);
  w.field("iter").field("accepted");
  for (long j = 0; j < chain.dim(); ++j) w.field("theta_" + std::to_string(j + 1));
  w.end_row();
  for (long t = 0; t < chain.length(); ++t) {
    w.field(t).field(static_cast<long>(chain.accept_flags[static_cast<size_t>(t)]));
    for (long j = 0; j < chain.dim(); ++j) w.field(chain.samples(t, j));
    w.end_row();
  }
  w.close();

  nlohmann::json meta;
  meta["M"] = chain.length();
  meta["B"] = chain.burn_in;
  meta["seed"] = chain.seed;
  meta["stream_id"] = chain.stream_id;
  meta["cpu_seconds"] = chain.cpu_seconds;
  meta["d"] = chain.dim();
  std::ofstream out(path + ".json");
  if (!out) throw std::runtime_error("save_chain_csv: cannot open " + path + ".json");
  out << meta.dump(2) << "\n";
}

Chain load_chain_csv(const std::string& path) {
  io::CsvReader r(path);
  const auto header = r.read_row();
  if (header.size() < 3 || header[0] != "iter" || header[1] != "accepted") {
    throw std::runtime_error("load_chain_csv: unexpected header in " + path);
  }
  const long d = static_cast<long>(header.size()) - 2;
  std::vector<std::vector<double>> rows;
  std::vector<std::uint8_t> flags;
  while (r.has_next()) {
    const auto fields = r.read_row();
    if (fields.empty()) continue;
    if (static_cast<long>(fields.size()) != d + 2) {
      throw std::runtime_error("load_chain_csv: ragged row in " + path);
    }
    flags.push_back(static_cast<std::uint8_t>(std::stol(fields[1])));
    std::vector<double> theta(static_cast<size_t>(d));
    for (long j = 0; j < d; ++j) theta[static_cast<size_t>(j)] = std::stod(fields[static_cast<size_t>(j + 2)]);
    rows.push_back(std::move(theta));
  }

  Chain chain;
  chain.samples.resize(static_cast<long>(rows.size()), d);
  for (size_t i = 0; i < rows.size(); ++i) {
    for (long j = 0; j < d; ++j) chain.samples(static_cast<long>(i), j) = rows[i][static_cast<size_t>(j)];
  }
  chain.accept_flags = std::move(flags);

  std::ifstream meta_in(path + ".json");
  if (meta_in) {
    nlohmann::json meta;
    meta_in >> meta;
    chain.burn_in = meta.value("B", 0L);
    chain.cpu_seconds = meta.value("cpu_seconds", 0.0);
    chain.seed = meta.value("seed", 0ull);
    chain.stream_id = meta.value("stream_id", 0ull);
  }
  return chain;
}

}  // namespace abmc::mcmc
