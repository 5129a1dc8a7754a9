#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mhk/approximator.hpp"
#include "mhk/functions.hpp"
#include "mhk/rng.hpp"
#include "mhk/smolyak.hpp"

using namespace mhk;

namespace {

FitConfig config(std::size_t iterations, bool recenter = false) {
  FitConfig cfg;
  cfg.kaczmarz.iterations = iterations;
  cfg.recenter = recenter;
  return cfg;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

// Plain mean over all 2^m x 2^m cell centers.
double cell_mean(const Model& model) {
  const std::uint64_t n = std::uint64_t{1} << model.level();
  double total = 0.0;
  for (std::uint64_t j = 0; j < n; ++j)
    for (std::uint64_t i = 0; i < n; ++i) total += evaluate(model, {(i + 0.5) / n, (j + 0.5) / n});
  return total / static_cast<double>(n * n);
}

}  // namespace

TEST_CASE("default iteration count") {
  CHECK(default_iterations(7, 8.0) == 24108);
  CHECK(default_iterations(1, 1.0) == 1);
  CHECK_THROWS_AS(default_iterations(3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(default_iterations(0, 1.0), std::invalid_argument);
}

TEST_CASE("draw_samples") {
  const auto& f = find_function("bilinear").f;
  const SampleSet a = draw_samples(f, 20000, 5);
  const SampleSet b = draw_samples(f, 20000, 5);
  CHECK(a.points == b.points);
  CHECK(a.values == b.values);
  CHECK(a.seed == 5);
  CHECK_FALSE(draw_samples(f, 10, 6).points == draw_samples(f, 10, 5).points);
  double mx = 0.0, my = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mx += a.points[i].x;
    my += a.points[i].y;
    mean += a.values[i];
    REQUIRE(a.values[i] == a.points[i].x * a.points[i].y);
  }
  // Means of 20000 uniforms lie within 5 standard errors (0.0102) of 1/2.
  CHECK(std::abs(mx / a.size() - 0.5) < 0.0102);
  CHECK(std::abs(my / a.size() - 0.5) < 0.0102);
  CHECK(std::abs(mean / a.size() - 0.25) < 0.01);
  CHECK_THROWS_AS(draw_samples(f, 0, 1), std::invalid_argument);
}

TEST_CASE("one sample in one cell") {
  SampleSet s;
  s.points = {{0.1, 0.1}};
  s.values = {3.0};
  const Model model = fit(s, 1, config(1));
  // The iterate moves along Psi(x) by 3 / |Psi|^2 and so reproduces 3 at x.
  CHECK(evaluate(model, {0.1, 0.1}) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(evaluate(model, {0.2, 0.4}) == doctest::Approx(3.0).epsilon(1e-15));
  // Same strip, other half in x: 2 - 1 times the step.
  CHECK(evaluate(model, {0.9, 0.1}) == doctest::Approx(3.0 * 0.5 / 1.5).epsilon(1e-15));
  // Other strip, other half: -1/2 times the step.
  CHECK(evaluate(model, {0.9, 0.9}) == doctest::Approx(-3.0 * 0.5 / 1.5).epsilon(1e-15));
  CHECK(model.meta.iterations == 1);
}

TEST_CASE("recentering reproduces constants exactly") {
  for (int m : {1, 4, 8}) {
    const SampleSet s = draw_samples([](Point) { return 4.25; }, 100, 3);
    const Model model = fit(s, m, config(100, true));
    CHECK(model.meta.offset == 4.25);
    CHECK(evaluate(model, {0.3, 0.7}) == 4.25);
    CHECK(integrate(model) == 4.25);
  }
  // Without the offset 100 steps cannot resolve 1280 coefficients.
  const SampleSet s = draw_samples([](Point) { return 4.25; }, 100, 3);
  CHECK(std::abs(evaluate(fit(s, 8, config(100, false)), {0.3, 0.7}) - 4.25) > 1e-6);
}

TEST_CASE("integrate equals the mean over cells") {
  Rng rng(1);
  for (int m = 1; m <= 7; ++m) {
    CoefVector c(m);
    for (double& x : c.values()) x = rng.uniform() - 0.5;
    Model model = model_from_coefficients(c);
    model.meta.offset = 0.125;
    CHECK(integrate(model) == doctest::Approx(cell_mean(model)).epsilon(1e-12));
  }
}

TEST_CASE("touch counts: m+1 per evaluation, n per integral") {
  for (int m : {1, 6, 12}) {
    const Model model = model_from_coefficients(CoefVector(m));
    TouchCounter c;
    evaluate(model, {0.4, 0.4}, &c);
    CHECK(c.reads == static_cast<std::uint64_t>(m + 1));
    TouchCounter ci;
    integrate(model, &ci);
    CHECK(ci.reads == (std::uint64_t{1} << m));
    CHECK(ci.writes == 0);
  }
}

TEST_CASE("evaluate_batch matches evaluate") {
  Rng rng(2);
  CoefVector c(6);
  for (double& x : c.values()) x = rng.uniform();
  Model model = model_from_coefficients(c);
  model.meta.offset = -1.0;
  std::vector<Point> pts(101);
  for (Point& p : pts) p = {rng.uniform(), rng.uniform()};
  std::vector<double> out(pts.size());
  evaluate_batch(model, pts, out);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(out[i] == doctest::Approx(evaluate(model, pts[i])).epsilon(1e-15));
  std::vector<double> short_out(3);
  CHECK_THROWS_AS(evaluate_batch(model, pts, short_out), std::invalid_argument);
  pts[7] = {1.0, 0.0};
  CHECK_THROWS_AS(evaluate_batch(model, pts, out), std::domain_error);
}

TEST_CASE("oracle integral error shrinks with m") {
  const TestFunction& tf = find_function("paper-example");
  double previous = 1e9;
  for (int m = 3; m <= 9; m += 2) {
    const Model oracle = model_from_coefficients(build_weight_vector(CenterSamples::from_function(m, tf.f)));
    const double err = std::abs(integrate(oracle) - *tf.reference_integral);
    CHECK(err < previous);
    previous = err;
  }
  CHECK(previous < 1e-3);
}

TEST_CASE("torus_add") {
  CHECK(torus_add({0.5, 0.25}, {0.75, 0.5}) == Point{0.25, 0.75});
  CHECK(torus_add({0.0, 0.0}, {0.0, 0.0}) == Point{0.0, 0.0});
  const Point p = torus_add({std::nextafter(1.0, 0.0), 0.5}, {std::nextafter(1.0, 0.0), 0.5});
  CHECK(p.x < 1.0);
  CHECK(p.y == 0.0);
}

TEST_CASE("spin ensemble") {
  const SampleSet s = draw_samples(find_function("paper-example").f, 3000, 11);
  const FitConfig cfg = config(3000);

  // A single zero shift is the plain fit.
  const std::vector<Point> zero = {{0.0, 0.0}};
  const SpinEnsemble one = fit_spin(s, 5, cfg, zero);
  const Model plain = fit(s, 5, cfg);
  CHECK(one.models[0].coef == plain.coef);
  CHECK(one.evaluate({0.3, 0.3}) == evaluate(plain, {0.3, 0.3}));

  const SpinEnsemble e = fit_spin(s, 5, cfg, 8, 42);
  REQUIRE(e.size() == 8);
  // Each member is the fit of the shifted samples.
  SampleSet moved = s;
  for (Point& p : moved.points) p = torus_add(p, e.shifts[3]);
  CHECK(fit(moved, 5, cfg).coef == e.models[3].coef);
  REQUIRE(e.models[3].meta.shift.has_value());
  CHECK(*e.models[3].meta.shift == e.shifts[3]);

  const Point p{0.61, 0.17};
  double mean = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) mean += evaluate(e.models[k], torus_add(p, e.shifts[k]));
  CHECK(e.evaluate(p) == doctest::Approx(mean / 8.0).epsilon(1e-14));

  std::vector<Point> pts = {p, {0.0, 0.0}, {0.99, 0.5}};
  std::vector<double> out(3);
  e.evaluate_batch(pts, out);
  for (std::size_t i = 0; i < 3; ++i) CHECK(out[i] == doctest::Approx(e.evaluate(pts[i])).epsilon(1e-14));

  double ints = 0.0;
  for (const Model& m : e.models) ints += integrate(m);
  CHECK(e.integrate() == doctest::Approx(ints / 8.0).epsilon(1e-14));

  const SpinEnsemble again = fit_spin(s, 5, cfg, 8, 42);
  CHECK(again.shifts == e.shifts);
  for (std::size_t k = 0; k < 8; ++k) CHECK(again.models[k].coef == e.models[k].coef);

  CHECK_THROWS_AS(fit_spin(s, 5, cfg, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(SpinEnsemble{}.evaluate(p), std::logic_error);
}

TEST_CASE("l2_error") {
  const Function f = [](Point p) { return p.x - p.y; };
  const BatchEvaluator exact = [&](std::span<const Point> pts, std::span<double> out) {
    for (std::size_t i = 0; i < pts.size(); ++i) out[i] = f(pts[i]);
  };
  const BatchEvaluator shifted = [&](std::span<const Point> pts, std::span<double> out) {
    for (std::size_t i = 0; i < pts.size(); ++i) out[i] = f(pts[i]) + 0.5;
  };
  const L2Estimate zero = l2_error(exact, f, 1000, 1);
  CHECK(zero.estimate == 0.0);
  CHECK(zero.std_error == 0.0);
  const L2Estimate half = l2_error(shifted, f, 1000, 1);
  CHECK(half.estimate == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(half.std_error < 1e-12);
  CHECK_THROWS_AS(l2_error(exact, f, 99, 1), std::invalid_argument);

  // Against 0 the L2 norm of x - y is 1/sqrt(6).
  const Model zero_model = model_from_coefficients(CoefVector(3));
  const L2Estimate norm = l2_error(zero_model, f, 200000, 7);
  CHECK(std::abs(norm.estimate - 1.0 / std::sqrt(6.0)) < 5.0 * norm.std_error);
  CHECK(norm.std_error > 0.0);
}

TEST_CASE("oracle L2 error decays with m") {
  const TestFunction& tf = find_function("paper-example");
  double previous = 1e9;
  for (int m = 3; m <= 8; ++m) {
    const Model oracle = model_from_coefficients(build_weight_vector(CenterSamples::from_function(m, tf.f)));
    const double err = l2_error(oracle, tf.f, 50000, 3).estimate;
    CHECK(err < previous);
    previous = err;
  }
}

TEST_CASE("more samples help") {
  const TestFunction& tf = find_function("paper-example");
  const int m = 6;
  const std::size_t l = default_iterations(m, 8.0);
  std::vector<double> few, many;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SampleSet s = draw_samples(tf.f, l, seed);
    few.push_back(l2_error(fit(s, m, config(l / 8)), tf.f, 20000, seed).estimate);
    many.push_back(l2_error(fit(s, m, config(l)), tf.f, 20000, seed).estimate);
  }
  CHECK(median(many) < median(few));
}

TEST_CASE("fit is deterministic") {
  const SampleSet s = draw_samples(find_function("holder-half").f, 5000, 77);
  FitConfig cfg = config(5000);
  CHECK(fit(s, 6, cfg).coef == fit(s, 6, cfg).coef);
  cfg.kaczmarz.order = SampleOrder::with_replacement;
  cfg.kaczmarz.seed = 3;
  CHECK(fit(s, 6, cfg).coef == fit(s, 6, cfg).coef);
}
