#include "abmc/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace abmc {

Partition partition_dataset(long n, long j, RngStream& rng) {
  if (j < 1 || j > n) {
    throw std::invalid_argument("partition_dataset: need 1 <= J <= N");
  }
  std::vector<long> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), 0L);
  // Fisher-Yates with the stream's bounded draws.
  for (long i = n - 1; i > 0; --i) {
    const long k = rng.uniform_int(0, i);
    std::swap(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(k)]);
  }
  Partition part;
  part.batches.resize(static_cast<size_t>(j));
  const long base = n / j;
  const long extra = n % j;  // first `extra` batches get one more row
  long pos = 0;
  for (long b = 0; b < j; ++b) {
    const long size = base + (b < extra ? 1 : 0);
    auto& batch = part.batches[static_cast<size_t>(b)];
    batch.assign(perm.begin() + pos, perm.begin() + pos + size);
    std::sort(batch.begin(), batch.end());
    pos += size;
  }
  return part;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

Dataset load_dataset_csv(const std::string& path, const CsvLoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_dataset_csv: cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_dataset_csv: empty file " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);

  long y_col = -1;
  std::vector<long> x_cols;
  for (size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "y") {
      y_col = static_cast<long>(c);
    } else if (header[c].size() > 1 && header[c][0] == 'x') {
      x_cols.push_back(static_cast<long>(c));
    }
  }
  if (y_col < 0) throw std::runtime_error("load_dataset_csv: no response column named 'y'");

  std::vector<double> ys;
  std::vector<std::vector<double>> xs;
  long row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw std::runtime_error("load_dataset_csv: field count mismatch at line " +
                               std::to_string(row));
    }
    ys.push_back(std::stod(fields[static_cast<size_t>(y_col)]));
    std::vector<double> xrow;
    xrow.reserve(x_cols.size());
    for (const long c : x_cols) xrow.push_back(std::stod(fields[static_cast<size_t>(c)]));
    xs.push_back(std::move(xrow));
  }
  const long n = static_cast<long>(ys.size());
  if (n < 1) throw std::runtime_error("load_dataset_csv: no data rows in " + path);

  Dataset data;
  data.response = Eigen::Map<Vector>(ys.data(), n);
  data.covariates.resize(n, static_cast<long>(x_cols.size()));
  for (long i = 0; i < n; ++i) {
    for (size_t c = 0; c < x_cols.size(); ++c) {
      data.covariates(i, static_cast<long>(c)) = xs[static_cast<size_t>(i)][c];
    }
  }
  if (!data.response.allFinite() || !data.covariates.allFinite()) {
    throw std::runtime_error("load_dataset_csv: non-finite value in " + path);
  }
  if (opts.standardize) {
    for (long c = 0; c < data.covariates.cols(); ++c) {
      const double lo = data.covariates.col(c).minCoeff();
      const double hi = data.covariates.col(c).maxCoeff();
      const double range = hi - lo;
      if (range > 0.0) {
        data.covariates.col(c) = (data.covariates.col(c).array() - lo) / range;
      } else {
        data.covariates.col(c).setZero();
      }
    }
  }
  return data;
}

void save_dataset_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_dataset_csv: cannot open " + path);
  out << "y";
  for (long c = 0; c < data.covariate_dim(); ++c) out << ",x" << (c + 1);
  out << "\n";
  char buf[64];
  for (long i = 0; i < data.n(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", data.response(i));
    out << buf;
    for (long c = 0; c < data.covariate_dim(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", data.covariates(i, c));
      out << ',' << buf;
    }
    out << "\n";
  }
}

}  // namespace abmc
