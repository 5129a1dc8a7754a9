#pragma once

// End-to-end reconstruction from random samples: fit a coefficient vector by
// sparse Kaczmarz, evaluate it in O(m) per point, integrate it in O(2^m),
// average fits over random torus shifts, and estimate L2 errors.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mhk/embedding.hpp"
#include "mhk/kaczmarz.hpp"
#include "mhk/samples.hpp"

namespace mhk {

struct ModelMeta {
  std::uint64_t iterations = 0;
  double c1 = 0.0;
  std::uint64_t seed = 0;
  /// Added back to every evaluation (f - f(X_1) recentering).
  double offset = 0.0;
  /// Torus shift the samples were moved by before fitting.
  std::optional<Point> shift;
};

struct Model {
  CoefVector coef;
  ModelMeta meta;

  int level() const { return coef.level(); }
};

struct FitConfig {
  KaczmarzConfig kaczmarz;
  /// Recorded in the model; the iteration count itself comes from kaczmarz.
  double c1 = 8.0;
  bool recenter = false;
};

/// ceil(c1 * n * ln(n)^2) with n = 2^m.
std::size_t default_iterations(int m, double c1);

Model fit(const SampleSet& samples, int m, const FitConfig& cfg);

/// Model whose coefficients are given directly (e.g. the Smolyak weight vector).
Model model_from_coefficients(CoefVector coef);

/// <Psi(p), coef> + offset. Does not apply meta.shift.
double evaluate(const Model& model, Point p, TouchCounter* counter = nullptr);

/// evaluate at every point through the active SIMD kernel.
void evaluate_batch(const Model& model, std::span<const Point> points, std::span<double> out);

/// Exact integral of the piecewise-constant approximation over [0,1)^2:
/// mean of the 2^m strip coefficients plus offset.
double integrate(const Model& model, TouchCounter* counter = nullptr);

/// Per-coordinate fractional part of a + b, kept in [0, 1).
Point torus_add(Point a, Point b);

struct SpinEnsemble {
  std::vector<Point> shifts;
  std::vector<Model> models;

  std::size_t size() const { return models.size(); }
  /// (1/q) sum_k evaluate(model_k, torus_add(p, shift_k)).
  double evaluate(Point p) const;
  void evaluate_batch(std::span<const Point> points, std::span<double> out) const;
  /// Mean of the member integrals (shifts preserve the torus integral).
  double integrate() const;
};

/// Fits q models, one per uniform shift drawn from the `shifts` stream of
/// shift_seed; the fits run concurrently.
SpinEnsemble fit_spin(const SampleSet& samples, int m, const FitConfig& cfg, std::size_t q,
                      std::uint64_t shift_seed);

/// Same as fit_spin with explicit shifts.
SpinEnsemble fit_spin(const SampleSet& samples, int m, const FitConfig& cfg, std::span<const Point> shifts);

struct L2Estimate {
  double estimate = 0.0;
  /// Delta-method standard error of the estimate.
  double std_error = 0.0;
};

using BatchEvaluator = std::function<void(std::span<const Point>, std::span<double>)>;

/// Monte Carlo L2 distance between approx and reference at mc_points uniform
/// points from the `monte_carlo` stream of seed. Requires mc_points >= 100.
L2Estimate l2_error(const BatchEvaluator& approx, const Function& reference, std::size_t mc_points,
                    std::uint64_t seed);
L2Estimate l2_error(const Model& model, const Function& reference, std::size_t mc_points, std::uint64_t seed);
L2Estimate l2_error(const SpinEnsemble& ensemble, const Function& reference, std::size_t mc_points,
                    std::uint64_t seed);

}  // namespace mhk
