#include "abmc/refset.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "abmc/io/csv.hpp"

namespace abmc::refset {

std::vector<long> knn_query(const ReferenceSet& z, const ParamVec& theta, long k) {
  const long h = z.entry_count();
  if (h < 1) throw std::invalid_argument("knn_query: empty reference set");
  if (k < 1 || k > h) throw std::invalid_argument("knn_query: need 1 <= K <= H");
  if (theta.size() != z.param_dim()) throw std::invalid_argument("knn_query: bad theta");

  std::vector<std::pair<double, long>> dist(static_cast<size_t>(h));
  for (long e = 0; e < h; ++e) {
    dist[static_cast<size_t>(e)] = {(z.xi(e) - theta).squaredNorm(), e};
  }
  const auto mid = dist.begin() + k;
  std::nth_element(dist.begin(), mid - 1, dist.end());
  std::sort(dist.begin(), mid);  // (distance, index) order fixes ties
  std::vector<long> out(static_cast<size_t>(k));
  for (long i = 0; i < k; ++i) out[static_cast<size_t>(i)] = dist[static_cast<size_t>(i)].second;
  return out;
}

namespace {

std::vector<double> knn_weights(const ReferenceSet& z, const std::vector<long>& neighbors,
                                const ParamVec& theta, const KnnConfig& config,
                                bool* fell_back) {
  if (fell_back) *fell_back = false;
  std::vector<double> w(neighbors.size(), 1.0);
  if (config.scheme == KnnConfig::WeightScheme::LinearTaper) {
    double far = 0.0;
    for (const long e : neighbors) far = std::max(far, (z.xi(e) - theta).norm());
    double total = 0.0;
    for (size_t i = 0; i < neighbors.size(); ++i) {
      const double d = (z.xi(neighbors[i]) - theta).norm();
      w[i] = far > 0.0 ? 1.0 - d / far : 0.0;
      total += w[i];
    }
    if (!(total > 0.0)) {
      // The farthest retrieved point always has weight zero; with a single
      // neighbour nothing remains, so revert to uniform weights.
      std::fill(w.begin(), w.end(), 1.0);
      if (fell_back) *fell_back = true;
    }
  }
  return w;
}

}  // namespace

KnnMoments knn_moments(const ReferenceSet& z, const std::vector<long>& neighbors,
                       const ParamVec& theta, const KnnConfig& config) {
  if (neighbors.empty()) throw std::invalid_argument("knn_moments: no neighbors");
  const long p = z.summary_dim();
  const long m = z.summaries_per_entry();
  KnnMoments out;
  const auto w = knn_weights(z, neighbors, theta, config, &out.fell_back_uniform);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);

  out.mu = Vector::Zero(p);
  for (size_t i = 0; i < neighbors.size(); ++i) {
    Vector entry_mean = Vector::Zero(p);
    for (long j = 0; j < m; ++j) entry_mean += z.summary(neighbors[i], j);
    out.mu += w[i] * (entry_mean / static_cast<double>(m));
  }
  out.mu /= total;

  out.sigma = Matrix::Zero(p, p);
  for (size_t i = 0; i < neighbors.size(); ++i) {
    Matrix entry_scatter = Matrix::Zero(p, p);
    for (long j = 0; j < m; ++j) {
      const Vector c = z.summary(neighbors[i], j) - out.mu;
      entry_scatter += c * c.transpose();
    }
    out.sigma += w[i] * (entry_scatter / static_cast<double>(m));
  }
  out.sigma /= total;
  return out;
}

double knn_ball_probability(const ReferenceSet& z, const std::vector<long>& neighbors,
                            const ParamVec& theta, const KnnConfig& config,
                            const lfree::DistanceSpec& dist, const Vector& s0) {
  if (neighbors.empty()) throw std::invalid_argument("knn_ball_probability: no neighbors");
  bool fell_back = false;
  const auto w = knn_weights(z, neighbors, theta, config, &fell_back);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  const long m = z.summaries_per_entry();
  double acc = 0.0;
  for (size_t i = 0; i < neighbors.size(); ++i) {
    long inside = 0;
    for (long j = 0; j < m; ++j) {
      if (dist.within(z.summary(neighbors[i], j), s0)) ++inside;
    }
    acc += w[i] * (static_cast<double>(inside) / static_cast<double>(m));
  }
  return acc / total;
}

void save_reference_set(const ReferenceSet& z, const std::string& path) {
  io::CsvWriter w(path);
  for (long j = 0; j < z.param_dim(); ++j) w.field("xi_" + std::to_string(j + 1));
  for (long j = 0; j < z.summary_dim(); ++j) w.field("s_" + std::to_string(j + 1));
  w.field("m_index");
  w.end_row();
  for (long e = 0; e < z.entry_count(); ++e) {
    for (long j = 0; j < z.summaries_per_entry(); ++j) {
      const auto xi = z.xi(e);
      for (long c = 0; c < z.param_dim(); ++c) w.field(xi(c));
      const auto s = z.summary(e, j);
      for (long c = 0; c < z.summary_dim(); ++c) w.field(s(c));
      w.field(j + 1);
      w.end_row();
    }
  }
  w.close();

  nlohmann::json meta;
  meta["H"] = z.entry_count();
  meta["m"] = z.summaries_per_entry();
  meta["p"] = z.summary_dim();
  meta["d"] = z.param_dim();
  meta["seed"] = z.build_seed;
  std::ofstream out(path + ".json");
  if (!out) throw std::runtime_error("save_reference_set: cannot open " + path + ".json");
  out << meta.dump(2) << "\n";
}

ReferenceSet load_reference_set(const std::string& path) {
  std::ifstream meta_in(path + ".json");
  if (!meta_in) throw std::runtime_error("load_reference_set: missing " + path + ".json");
  nlohmann::json meta;
  meta_in >> meta;
  const long h = meta.at("H").get<long>();
  const long m = meta.at("m").get<long>();
  const long p = meta.at("p").get<long>();
  const long d = meta.at("d").get<long>();

  io::CsvReader r(path);
  r.read_row();  // header
  ReferenceSet z(d, p, m);
  z.build_seed = meta.value("seed", 0ull);
  reserve_entries(z, h);
  ParamVec xi(d);
  std::vector<Vector> sums;
  for (long e = 0; e < h; ++e) {
    sums.clear();
    for (long j = 0; j < m; ++j) {
      const auto fields = r.read_row();
      if (static_cast<long>(fields.size()) != d + p + 1) {
        throw std::runtime_error("load_reference_set: ragged row in " + path);
      }
      for (long c = 0; c < d; ++c) xi(c) = std::stod(fields[static_cast<size_t>(c)]);
      Vector s(p);
      for (long c = 0; c < p; ++c) s(c) = std::stod(fields[static_cast<size_t>(d + c)]);
      sums.push_back(std::move(s));
    }
    z.append(xi, sums);
  }
  return z;
}

}  // namespace abmc::refset
