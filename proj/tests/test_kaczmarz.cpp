#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mhk/kaczmarz.hpp"
#include "mhk/rng.hpp"

using namespace mhk;

namespace {

CoefVector random_coefs(int m, Rng& rng) {
  CoefVector v(m);
  for (double& x : v.values()) x = 2.0 * rng.uniform() - 1.0;
  return v;
}

// Uniform points whose values come from a known coefficient vector, plus noise.
SampleSet consistent_samples(const CoefVector& truth, std::size_t count, double noise, Rng& rng) {
  SampleSet s;
  for (std::size_t i = 0; i < count; ++i) {
    const Point p{rng.uniform(), rng.uniform()};
    s.points.push_back(p);
    s.values.push_back(dot(embed(p, truth.level()), truth) + noise * (2.0 * rng.uniform() - 1.0));
  }
  return s;
}

}  // namespace

TEST_CASE("dense: one row, one unknown") {
  DenseMatrix a(1, 1);
  a(0, 0) = 2.0;
  const std::vector<double> b = {4.0};
  const std::vector<std::size_t> order = {0};
  const auto v = kaczmarz_dense(a, b, order, {0.0});
  CHECK(v[0] == 2.0);
}

TEST_CASE("dense: a sweep over orthogonal rows solves the system") {
  DenseMatrix h(4, 4);
  const double rows[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) h(i, j) = rows[i][j];
  const std::vector<double> x = {0.5, -1.0, 2.0, 0.25};
  std::vector<double> b(4, 0.0);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) b[i] += h(i, j) * x[j];
  const std::vector<std::size_t> order = {2, 0, 3, 1};
  const auto v = kaczmarz_dense(h, b, order, {7.0, 7.0, 7.0, 7.0});
  for (std::size_t j = 0; j < 4; ++j) CHECK(v[j] == doctest::Approx(x[j]).epsilon(1e-15));
}

TEST_CASE("dense: input errors") {
  DenseMatrix a(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 2.0;
  const std::vector<double> b = {1.0, 1.0};
  const std::vector<std::size_t> order = {0};
  CHECK_THROWS_AS(kaczmarz_dense(a, b, order, {0.0, 0.0}), std::invalid_argument);
  a(1, 1) = 1.0;
  const std::vector<std::size_t> bad = {2};
  CHECK_THROWS_AS(kaczmarz_dense(a, b, bad, {0.0, 0.0}), std::out_of_range);
  CHECK_THROWS_AS(kaczmarz_dense(a, b, order, {0.0}), std::invalid_argument);
}

TEST_CASE("sparse steps agree with dense steps on the full matrix") {
  const int m = 3;
  const std::uint64_t n = 8;
  const DenseMatrix a = full_matrix(m);
  Rng rng(1);
  std::vector<double> b(a.rows);
  for (double& x : b) x = rng.uniform();
  std::vector<std::size_t> order(300);
  for (std::size_t& i : order) i = rng.below(a.rows);

  const CoefVector start = random_coefs(m, rng);
  const auto dense = kaczmarz_dense(a, b, order, std::vector<double>(start.values().begin(), start.values().end()));
  CoefVector sparse = start;
  for (std::size_t i : order) {
    const Point center{(i % n + 0.5) / n, (i / n + 0.5) / n};
    kaczmarz_sparse_step(sparse, embed(center, m), b[i]);
  }
  for (std::size_t j = 0; j < sparse.size(); ++j) CHECK(std::abs(sparse[j] - dense[j]) < 1e-12);
}

TEST_CASE("one sparse step satisfies its own equation") {
  Rng rng(2);
  for (int m = 1; m <= 16; ++m) {
    CoefVector v = random_coefs(m, rng);
    const SparseEmbedding e = embed({rng.uniform(), rng.uniform()}, m);
    kaczmarz_sparse_step(v, e, 0.375);
    CHECK(dot(e, v) == doctest::Approx(0.375).epsilon(1e-13));
  }
}

TEST_CASE("consistent system: error shrinks and never grows") {
  const int m = 4;
  std::vector<double> ratios;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(100 + seed);
    const CoefVector truth = random_coefs(m, rng);
    const SampleSet s = consistent_samples(truth, 600, 0.0, rng);
    KaczmarzConfig cfg;
    cfg.iterations = 600;
    const auto result = kaczmarz_run(s, m, cfg, &truth);
    const auto& t = result.trace.sq_error;
    REQUIRE(t.size() == 601);
    for (std::size_t k = 1; k < t.size(); ++k) REQUIRE(t[k] <= t[k - 1] * (1.0 + 1e-12) + 1e-28);
    ratios.push_back(t.front() / t.back());
  }
  std::nth_element(ratios.begin(), ratios.begin() + 10, ratios.end());
  CHECK(ratios[10] >= 10.0);
}

TEST_CASE("noisy system settles at D sigma^2 / (1 + m/2)") {
  // With uniform rows of a tight frame the error obeys
  //   E|e_{k+1}|^2 = (1 - 1/D) E|e_k|^2 + sigma^2 / |Psi|^2,
  // so the stationary level is D sigma^2 / |Psi|^2.
  const int m = 3;
  const double half_width = 0.2;
  const double sigma2 = half_width * half_width / 3.0;
  const double expected = static_cast<double>(dimension(m)) * sigma2 / (1.0 + m / 2.0);
  double total = 0.0;
  std::size_t count = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Rng rng(500 + seed);
    const CoefVector truth = random_coefs(m, rng);
    const SampleSet s = consistent_samples(truth, 2000, half_width, rng);
    KaczmarzConfig cfg;
    cfg.iterations = s.size();
    const auto result = kaczmarz_run(s, m, cfg, &truth);
    for (std::size_t k = 1000; k < result.trace.sq_error.size(); ++k) {
      total += result.trace.sq_error[k];
      ++count;
    }
  }
  const double mean = total / static_cast<double>(count);
  CHECK(mean == doctest::Approx(expected).epsilon(0.1));
}

TEST_CASE("with replacement: reproducible, and different from use-once") {
  Rng rng(3);
  const CoefVector truth = random_coefs(3, rng);
  const SampleSet s = consistent_samples(truth, 50, 0.1, rng);
  KaczmarzConfig cfg;
  cfg.iterations = 200;
  cfg.seed = 9;
  cfg.order = SampleOrder::with_replacement;
  const auto a = kaczmarz_run(s, 3, cfg);
  const auto b = kaczmarz_run(s, 3, cfg);
  CHECK(a.coef == b.coef);
  cfg.seed = 10;
  CHECK_FALSE(kaczmarz_run(s, 3, cfg).coef == a.coef);
  CHECK(a.trace.empty());
}

TEST_CASE("initial iterate") {
  Rng rng(4);
  const CoefVector truth = random_coefs(2, rng);
  const SampleSet s = consistent_samples(truth, 10, 0.0, rng);
  KaczmarzConfig cfg;
  cfg.iterations = 10;
  cfg.initial = truth;
  const auto result = kaczmarz_run(s, 2, cfg);
  CHECK(squared_distance(result.coef, truth) < 1e-28);
}

TEST_CASE("kaczmarz_run input errors") {
  SampleSet s;
  KaczmarzConfig cfg;
  CHECK_THROWS_AS(kaczmarz_run(s, 3, cfg), std::invalid_argument);
  s.points = {{0.1, 0.1}, {0.2, 0.2}};
  s.values = {1.0};
  CHECK_THROWS_AS(kaczmarz_run(s, 3, cfg), std::invalid_argument);
  s.values = {1.0, 2.0};
  cfg.iterations = 0;
  CHECK_THROWS_AS(kaczmarz_run(s, 3, cfg), std::invalid_argument);
  cfg.iterations = 3;
  CHECK_THROWS_AS(kaczmarz_run(s, 3, cfg), std::invalid_argument);
  cfg.order = SampleOrder::with_replacement;
  CHECK_NOTHROW(kaczmarz_run(s, 3, cfg));
  cfg.initial = CoefVector(4);
  CHECK_THROWS_AS(kaczmarz_run(s, 3, cfg), std::invalid_argument);
  cfg.initial.reset();
  const CoefVector wrong(2);
  CHECK_THROWS_AS(kaczmarz_run(s, 3, cfg, &wrong), std::invalid_argument);
  CHECK_THROWS_AS(kaczmarz_run(s, 0, cfg), std::invalid_argument);
  CHECK_THROWS_AS(squared_distance(CoefVector(2), CoefVector(3)), std::invalid_argument);
}

TEST_CASE("trace CSV") {
  ConvergenceTrace t;
  t.sq_error = {1.0, 0.5, 0.1};
  std::ostringstream out;
  t.write_csv(out);
  CHECK(out.str() == "k,sq_error\n0,1\n1,0.5\n2,0.10000000000000001\n");
}
