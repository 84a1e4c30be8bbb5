#include <doctest.h>

#include <algorithm>
#include <set>

#include "abmc/dataset.hpp"
#include "abmc/kmeans.hpp"
#include "abmc/mc.hpp"
#include "abmc/rng.hpp"
#include "abmc/stats.hpp"

using namespace abmc;

TEST_CASE("rng streams reproduce and differ") {
  RngStream a(42, 7);
  RngStream b(42, 7);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  RngStream c(42, 8);
  RngStream d(42, 7);
  bool any_diff = false;
  for (int i = 0; i < 64; ++i) any_diff |= (c.next_u64() != d.next_u64());
  CHECK(any_diff);

  // mixed draw kinds stay in sync too
  RngStream e(9, 1), f(9, 1);
  for (int i = 0; i < 200; ++i) {
    CHECK(e.normal() == f.normal());
    CHECK(e.uniform_int(0, 99) == f.uniform_int(0, 99));
  }
}

TEST_CASE("rng uniform_int covers range without bias artifacts") {
  RngStream r(123);
  std::vector<long> counts(10, 0);
  const int n = 200000;
  for (int i = 0; i < n; ++i) ++counts[static_cast<size_t>(r.uniform_int(0, 9))];
  for (const long c : counts) {
    CHECK(c > n / 10 - 4 * std::sqrt(n * 0.1 * 0.9));
    CHECK(c < n / 10 + 4 * std::sqrt(n * 0.1 * 0.9));
  }
}

TEST_CASE("partition_dataset splits near-equally and deterministically") {
  RngStream r(1);
  SUBCASE("single batch is the identity") {
    const Partition p = partition_dataset(10, 1, r);
    REQUIRE(p.batch_count() == 1);
    CHECK(p.batches[0].size() == 10);
    for (long i = 0; i < 10; ++i) CHECK(p.batches[0][static_cast<size_t>(i)] == i);
  }
  SUBCASE("five batches of two, disjoint and covering") {
    const Partition p = partition_dataset(10, 5, r);
    std::set<long> seen;
    for (const auto& b : p.batches) {
      CHECK(b.size() == 2);
      seen.insert(b.begin(), b.end());
    }
    CHECK(seen.size() == 10);
  }
  SUBCASE("N=10000 J=3 gives sizes 3334/3333/3333 and reruns identically") {
    RngStream r1(99), r2(99);
    const Partition a = partition_dataset(10000, 3, r1);
    const Partition b = partition_dataset(10000, 3, r2);
    CHECK(a.batches[0].size() == 3334);
    CHECK(a.batches[1].size() == 3333);
    CHECK(a.batches[2].size() == 3333);
    CHECK(a.batches == b.batches);
  }
  SUBCASE("invalid J rejected") {
    CHECK_THROWS_AS(partition_dataset(10, 0, r), std::invalid_argument);
    CHECK_THROWS_AS(partition_dataset(10, 11, r), std::invalid_argument);
  }
}

TEST_CASE("partition invariants hold over random sizes") {
  RngStream r(7);
  for (int trial = 0; trial < 50; ++trial) {
    const long n = r.uniform_int(1, 500);
    const long j = r.uniform_int(1, n);
    const Partition p = partition_dataset(n, j, r);
    REQUIRE(p.batch_count() == j);
    std::set<long> seen;
    long lo = n, hi = 0;
    for (const auto& b : p.batches) {
      CHECK(!b.empty());
      lo = std::min<long>(lo, static_cast<long>(b.size()));
      hi = std::max<long>(hi, static_cast<long>(b.size()));
      for (const long i : b) {
        CHECK(i >= 0);
        CHECK(i < n);
        CHECK(seen.insert(i).second);  // disjoint
      }
    }
    CHECK(seen.size() == static_cast<size_t>(n));  // covering
    CHECK(hi - lo <= 1);
  }
}

TEST_CASE("kmeans basics") {
  RngStream r(5);
  SUBCASE("K=1 centroid is the sample mean") {
    Matrix v(4, 2);
    v << 0, 0, 2, 0, 0, 2, 2, 2;
    const Clustering c = kmeans(v, 1, r);
    CHECK(c.centroids.row(0)(0) == doctest::Approx(1.0));
    CHECK(c.centroids.row(0)(1) == doctest::Approx(1.0));
  }
  SUBCASE("two separated clouds recover the labeling and brute-force spread") {
    RngStream gen(11);
    const long per = 40;
    Matrix v(2 * per, 2);
    for (long i = 0; i < per; ++i) {
      v(i, 0) = gen.normal(0.0, 0.1);
      v(i, 1) = gen.normal(0.0, 0.1);
      v(per + i, 0) = gen.normal(8.0, 0.1);
      v(per + i, 1) = gen.normal(8.0, 0.1);
    }
    const Clustering c = kmeans(v, 2, r);
    // each cloud in one cluster
    const long c0 = c.assignment[0];
    for (long i = 0; i < per; ++i) CHECK(c.assignment[static_cast<size_t>(i)] == c0);
    const long c1 = c.assignment[static_cast<size_t>(per)];
    CHECK(c1 != c0);
    for (long i = per; i < 2 * per; ++i) CHECK(c.assignment[static_cast<size_t>(i)] == c1);
    // brute-force within spread: mean squared distance to the cloud mean
    for (int cloud = 0; cloud < 2; ++cloud) {
      const auto block = v.middleRows(cloud * per, per);
      const Vector mean = block.colwise().mean();
      double ms = 0.0;
      for (long i = 0; i < per; ++i) ms += (block.row(i).transpose() - mean).squaredNorm();
      ms /= static_cast<double>(per);
      const long cl = c.assignment[static_cast<size_t>(cloud * per)];
      CHECK(c.within_spread[static_cast<size_t>(cl)] == doctest::Approx(ms).epsilon(1e-12));
    }
  }
  SUBCASE("K=N degenerates to zero spread") {
    Matrix v(5, 1);
    v << 1, 2, 3, 4, 5;
    const Clustering c = kmeans(v, 5, r);
    for (const double s : c.within_spread) CHECK(s == doctest::Approx(0.0));
    std::set<long> used(c.assignment.begin(), c.assignment.end());
    CHECK(used.size() == 5);
  }
  SUBCASE("objective is non-increasing") {
    RngStream gen(3);
    Matrix v(300, 3);
    for (long i = 0; i < v.size(); ++i) v(i / 3, i % 3) = gen.normal();
    for (const long k : {2L, 5L, 17L}) {
      RngStream rr(1000 + k);
      const Clustering c = kmeans(v, k, rr);
      for (size_t t = 1; t < c.objective_log.size(); ++t) {
        CHECK(c.objective_log[t] <= c.objective_log[t - 1] + 1e-9);
      }
    }
  }
  SUBCASE("errors") {
    Matrix v(3, 1);
    v << 1, 2, 3;
    CHECK_THROWS_AS(kmeans(v, 4, r), std::invalid_argument);
    CHECK_THROWS_AS(kmeans(Matrix(0, 1), 1, r), std::invalid_argument);
  }
}

TEST_CASE("mc_estimate matches the stated functionals") {
  SUBCASE("constant sequence returns the constant") {
    ParamVec c(2);
    c << 3.0, -1.0;
    std::vector<ParamVec> samples(17, c);
    const Vector est = mc_estimate(samples, Functional::component_mean());
    CHECK(est(0) == doctest::Approx(3.0));
    CHECK(est(1) == doctest::Approx(-1.0));
  }
  SUBCASE("second moment of {1,2,3} is 14/3") {
    std::vector<ParamVec> samples;
    for (const double v : {1.0, 2.0, 3.0}) {
      ParamVec p(1);
      p << v;
      samples.push_back(p);
    }
    const Vector est = mc_estimate(samples, Functional::component_second_moment());
    CHECK(est(0) == doctest::Approx(14.0 / 3.0));
  }
  SUBCASE("cdf at 0 over {-1, 0, 2} is 2/3") {
    std::vector<ParamVec> samples;
    for (const double v : {-1.0, 0.0, 2.0}) {
      ParamVec p(1);
      p << v;
      samples.push_back(p);
    }
    Vector t(1);
    t << 0.0;
    const Vector est = mc_estimate(samples, Functional::cdf_at(t));
    CHECK(est(0) == doctest::Approx(2.0 / 3.0));
  }
  SUBCASE("empty input rejected") {
    CHECK_THROWS_AS(mc_estimate({}, Functional::component_mean()), std::invalid_argument);
  }
}

TEST_CASE("mc_estimate is linear in h and permutation invariant") {
  RngStream r(21);
  std::vector<ParamVec> samples;
  for (int i = 0; i < 40; ++i) {
    ParamVec p(3);
    for (int j = 0; j < 3; ++j) p(j) = r.normal();
    samples.push_back(p);
  }
  auto h1 = [](const ParamVec& x) -> Vector { return x; };
  auto h2 = [](const ParamVec& x) -> Vector { return x.array().square().matrix(); };
  const double a = 2.5, b = -0.75;
  auto combo = [&](const ParamVec& x) -> Vector { return a * h1(x) + b * h2(x); };
  const Vector lhs = mc_estimate(samples, combo);
  const Vector rhs = a * mc_estimate(samples, h1) + b * mc_estimate(samples, h2);
  CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() < 1e-12);

  auto shuffled = samples;
  RngStream perm(4);
  for (size_t i = shuffled.size() - 1; i > 0; --i) {
    std::swap(shuffled[i], shuffled[static_cast<size_t>(perm.uniform_int(0, static_cast<long>(i)))]);
  }
  const Vector v1 = mc_estimate(samples, Functional::component_mean());
  const Vector v2 = mc_estimate(shuffled, Functional::component_mean());
  CHECK((v1 - v2).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("csv dataset loader round-trips and standardizes") {
  Dataset d;
  d.response.resize(3);
  d.response << 1, 0, 1;
  d.covariates.resize(3, 2);
  d.covariates << 0.5, 10.0, 0.25, 20.0, 1.0, 40.0;
  const std::string path = "test_dataset_tmp.csv";
  save_dataset_csv(d, path);
  const Dataset back = load_dataset_csv(path);
  CHECK((back.response - d.response).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((back.covariates - d.covariates).lpNorm<Eigen::Infinity>() == 0.0);

  const Dataset std01 = load_dataset_csv(path, {true});
  CHECK(std01.covariates.col(0).minCoeff() == doctest::Approx(0.0));
  CHECK(std01.covariates.col(0).maxCoeff() == doctest::Approx(1.0));
  CHECK(std01.covariates.col(1).minCoeff() == doctest::Approx(0.0));
  CHECK(std01.covariates.col(1).maxCoeff() == doctest::Approx(1.0));
  std::remove(path.c_str());
}

TEST_CASE("quantile and multinomial helpers") {
  CHECK(quantile({1, 2, 3, 4}, 0.5) == doctest::Approx(2.5));
  CHECK(quantile({4, 1, 3, 2}, 0.5) == doctest::Approx(2.5));

  RngStream r(31);
  Vector w(3);
  w << 1.0, 1.0, 2.0;
  long total3 = 0;
  const int trials = 40000;
  for (int t = 0; t < trials; ++t) {
    const auto counts = multinomial(4, w, r);
    CHECK(counts[0] + counts[1] + counts[2] == 4);
    total3 += counts[2];
  }
  // P(category 3) = 1/2, so the mean count per draw of 4 is 2.
  const double mean3 = static_cast<double>(total3) / trials;
  CHECK(mean3 == doctest::Approx(2.0).epsilon(0.02));
}
