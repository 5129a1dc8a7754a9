#include "mhk/approximator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "mhk/rng.hpp"
#include "mhk/simd.hpp"

namespace mhk {

std::size_t default_iterations(int m, double c1) {
  check_level(m);
  if (!(c1 > 0.0)) throw std::invalid_argument("c1 must be positive");
  const double n = std::ldexp(1.0, m);
  const double ln = std::log(n);
  return static_cast<std::size_t>(std::ceil(c1 * n * ln * ln));
}

Model fit(const SampleSet& samples, int m, const FitConfig& cfg) {
  samples.validate();
  if (samples.size() == 0) throw std::invalid_argument("fit: empty sample set");

  Model model;
  model.meta.iterations = cfg.kaczmarz.iterations;
  model.meta.c1 = cfg.c1;
  model.meta.seed = samples.seed.value_or(cfg.kaczmarz.seed);
  if (cfg.recenter) {
    model.meta.offset = samples.values.front();
    SampleSet centered = samples;
    for (double& v : centered.values) v -= model.meta.offset;
    model.coef = kaczmarz_run(centered, m, cfg.kaczmarz).coef;
  } else {
    model.coef = kaczmarz_run(samples, m, cfg.kaczmarz).coef;
  }
  return model;
}

Model model_from_coefficients(CoefVector coef) {
  Model model;
  model.coef = std::move(coef);
  return model;
}

double evaluate(const Model& model, Point p, TouchCounter* counter) {
  return dot(embed(p, model.level()), model.coef, counter) + model.meta.offset;
}

void evaluate_batch(const Model& model, std::span<const Point> points, std::span<double> out) {
  if (out.size() != points.size()) throw std::invalid_argument("evaluate_batch: output size mismatch");
  for (const Point& p : points) check_point(p);
  simd::active_kernels().evaluate(model.level(), model.coef.values(), points, out);
  if (model.meta.offset != 0.0) {
    for (double& v : out) v += model.meta.offset;
  }
}

double integrate(const Model& model, TouchCounter* counter) {
  const std::size_t n = std::size_t{1} << model.level();
  const auto strips = model.coef.values().first(n);
  double total = 0.0;
  if (counter != nullptr) {
    std::vector<double> seen;
    seen.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      ++counter->reads;
      seen.push_back(model.coef[i]);
    }
    total = simd::active_kernels().sum(seen);
  } else {
    total = simd::active_kernels().sum(strips);
  }
  return total / static_cast<double>(n) + model.meta.offset;
}

Point torus_add(Point a, Point b) {
  auto frac = [](double v) {
    const double f = v - std::floor(v);
    return f >= 1.0 ? 0.0 : f;
  };
  return {frac(a.x + b.x), frac(a.y + b.y)};
}

double SpinEnsemble::evaluate(Point p) const {
  if (models.empty()) throw std::logic_error("SpinEnsemble: no models");
  double total = 0.0;
  for (std::size_t k = 0; k < models.size(); ++k) total += mhk::evaluate(models[k], torus_add(p, shifts[k]));
  return total / static_cast<double>(models.size());
}

void SpinEnsemble::evaluate_batch(std::span<const Point> points, std::span<double> out) const {
  if (models.empty()) throw std::logic_error("SpinEnsemble: no models");
  if (out.size() != points.size()) throw std::invalid_argument("evaluate_batch: output size mismatch");
  std::vector<Point> moved(points.size());
  std::vector<double> values(points.size());
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t k = 0; k < models.size(); ++k) {
    for (std::size_t i = 0; i < points.size(); ++i) moved[i] = torus_add(points[i], shifts[k]);
    mhk::evaluate_batch(models[k], moved, values);
    for (std::size_t i = 0; i < points.size(); ++i) out[i] += values[i];
  }
  const auto q = static_cast<double>(models.size());
  for (double& v : out) v /= q;
}

double SpinEnsemble::integrate() const {
  if (models.empty()) throw std::logic_error("SpinEnsemble: no models");
  double total = 0.0;
  for (const Model& model : models) total += mhk::integrate(model);
  return total / static_cast<double>(models.size());
}

SpinEnsemble fit_spin(const SampleSet& samples, int m, const FitConfig& cfg, std::span<const Point> shifts) {
  if (shifts.empty()) throw std::invalid_argument("fit_spin: need at least one shift");
  samples.validate();
  for (const Point& s : shifts) check_point(s);

  SpinEnsemble ensemble;
  ensemble.shifts.assign(shifts.begin(), shifts.end());
  ensemble.models.resize(shifts.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < shifts.size(); k = next++) {
      try {
        SampleSet moved;
        moved.seed = samples.seed;
        moved.values = samples.values;
        moved.points.reserve(samples.size());
        for (const Point& p : samples.points) moved.points.push_back(torus_add(p, shifts[k]));
        Model model = fit(moved, m, cfg);
        model.meta.shift = shifts[k];
        ensemble.models[k] = std::move(model);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const std::size_t threads =
      std::min<std::size_t>(shifts.size(), std::max(1U, std::thread::hardware_concurrency()));
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return ensemble;
}

SpinEnsemble fit_spin(const SampleSet& samples, int m, const FitConfig& cfg, std::size_t q,
                      std::uint64_t shift_seed) {
  if (q == 0) throw std::invalid_argument("fit_spin: q must be at least 1");
  Rng rng(shift_seed, Stream::shifts);
  std::vector<Point> shifts(q);
  for (Point& s : shifts) {
    s.x = rng.uniform();
    s.y = rng.uniform();
  }
  return fit_spin(samples, m, cfg, shifts);
}

L2Estimate l2_error(const BatchEvaluator& approx, const Function& reference, std::size_t mc_points,
                    std::uint64_t seed) {
  if (mc_points < 100) throw std::invalid_argument("l2_error: need at least 100 Monte Carlo points");
  Rng rng(seed, Stream::monte_carlo);
  std::vector<Point> points(mc_points);
  for (Point& p : points) {
    p.x = rng.uniform();
    p.y = rng.uniform();
  }
  std::vector<double> approx_values(mc_points);
  std::vector<double> ref_values(mc_points);
  approx(points, approx_values);
  for (std::size_t i = 0; i < mc_points; ++i) ref_values[i] = reference(points[i]);

  const double count = static_cast<double>(mc_points);
  const double mean_sq = simd::active_kernels().sum_sq_diff(approx_values, ref_values) / count;
  double spread = 0.0;
  for (std::size_t i = 0; i < mc_points; ++i) {
    const double d = approx_values[i] - ref_values[i];
    const double c = d * d - mean_sq;
    spread += c * c;
  }
  const double se_mean_sq = std::sqrt(spread / (count - 1.0) / count);
  L2Estimate out;
  out.estimate = std::sqrt(mean_sq);
  out.std_error = mean_sq > 0.0 ? se_mean_sq / (2.0 * out.estimate) : 0.0;
  return out;
}

L2Estimate l2_error(const Model& model, const Function& reference, std::size_t mc_points, std::uint64_t seed) {
  return l2_error([&](std::span<const Point> p, std::span<double> out) { evaluate_batch(model, p, out); },
                  reference, mc_points, seed);
}

L2Estimate l2_error(const SpinEnsemble& ensemble, const Function& reference, std::size_t mc_points,
                    std::uint64_t seed) {
  return l2_error([&](std::span<const Point> p, std::span<double> out) { ensemble.evaluate_batch(p, out); },
                  reference, mc_points, seed);
}

}  // namespace mhk
