#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "mhk/functions.hpp"
#include "mhk/model_io.hpp"
#include "mhk/rng.hpp"
#include "mhk/smolyak.hpp"

namespace mhk::cli {

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

BatchEvaluator pointwise(Function f) {
  return [f = std::move(f)](std::span<const Point> points, std::span<double> out) {
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = f(points[i]);
  };
}

Approximant from_model(Model model) {
  auto shared = std::make_shared<const Model>(std::move(model));
  return {[shared](std::span<const Point> p, std::span<double> out) { evaluate_batch(*shared, p, out); },
          integrate(*shared)};
}

Approximant from_ensemble(SpinEnsemble ensemble) {
  auto shared = std::make_shared<const SpinEnsemble>(std::move(ensemble));
  return {[shared](std::span<const Point> p, std::span<double> out) { shared->evaluate_batch(p, out); },
          shared->integrate()};
}

std::string optional_cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Mode parse_mode(const std::string& name) {
  if (name == "function") return Mode::function;
  if (name == "smolyak") return Mode::smolyak;
  if (name == "random") return Mode::random;
  if (name == "spin") return Mode::spin;
  if (name == "montecarlo") return Mode::montecarlo;
  throw std::invalid_argument("unknown mode '" + name + "' (function, smolyak, random, spin, montecarlo)");
}

void RunConfig::validate() const {
  check_level(m);
  if (!(c1 > 0.0)) throw std::invalid_argument("--c1 must be positive");
  if (grid < 2) throw std::invalid_argument("--grid must be at least 2");
  if (mc_points < 100) throw std::invalid_argument("--mc-points must be at least 100");
  if (trials == 0) throw std::invalid_argument("--trials must be at least 1");
  if (!samples) find_function(function);
  if (reference) find_function(*reference);
  if (samples && (mode == Mode::function || mode == Mode::smolyak)) {
    throw std::invalid_argument("--samples cannot be combined with mode function/smolyak");
  }
}

std::size_t RunConfig::iterations() const { return l != 0 ? l : default_iterations(m, c1); }

std::size_t RunConfig::spin_count() const { return spins != 0 ? spins : std::size_t{1} << m; }

SampleSet gather_samples(const RunConfig& cfg) {
  if (cfg.samples) {
    std::ifstream in(*cfg.samples);
    if (!in) throw IoError("cannot open " + cfg.samples->string());
    try {
      return read_samples_csv(in);
    } catch (const std::runtime_error& e) {
      throw IoError(cfg.samples->string() + ": " + e.what());
    }
  }
  return draw_samples(find_function(cfg.function).f, cfg.iterations(), cfg.seed);
}

FitConfig fit_config(const RunConfig& cfg, std::size_t iterations) {
  FitConfig fc;
  fc.kaczmarz.iterations = iterations;
  fc.kaczmarz.seed = cfg.seed;
  fc.c1 = cfg.c1;
  fc.recenter = cfg.recenter;
  return fc;
}

Model smolyak_model(const std::string& function, int m) {
  const auto samples = CenterSamples::from_function(m, find_function(function).f);
  return model_from_coefficients(build_weight_vector(samples));
}

Approximant load_approximant(const std::filesystem::path& input) {
  if (std::filesystem::is_directory(input)) return from_ensemble(load_ensemble(input));
  return from_model(load_model(input));
}

Approximant build_approximant(const RunConfig& cfg) {
  switch (cfg.mode) {
    case Mode::function: {
      const TestFunction& tf = find_function(cfg.function);
      return {pointwise(tf.f), tf.reference_integral};
    }
    case Mode::smolyak: {
      auto samples = std::make_shared<const CenterSamples>(
          CenterSamples::from_function(cfg.m, find_function(cfg.function).f));
      Approximant a = from_model(model_from_coefficients(build_weight_vector(*samples)));
      a.evaluate = pointwise([samples](Point p) { return smolyak_eval(*samples, p); });
      return a;
    }
    case Mode::random: {
      const SampleSet s = gather_samples(cfg);
      const std::size_t iters = cfg.samples ? std::min(cfg.l != 0 ? cfg.l : s.size(), s.size()) : s.size();
      return from_model(fit(s, cfg.m, fit_config(cfg, iters)));
    }
    case Mode::spin: {
      const SampleSet s = gather_samples(cfg);
      const std::size_t iters = cfg.samples ? std::min(cfg.l != 0 ? cfg.l : s.size(), s.size()) : s.size();
      return from_ensemble(fit_spin(s, cfg.m, fit_config(cfg, iters), cfg.spin_count(), cfg.seed));
    }
    case Mode::montecarlo: {
      const SampleSet s = gather_samples(cfg);
      double total = 0.0;
      for (double v : s.values) total += v;
      return {nullptr, total / static_cast<double>(s.size())};
    }
  }
  throw std::logic_error("unhandled mode");
}

std::vector<double> evaluate_grid(const BatchEvaluator& approx, std::size_t g) {
  if (!approx) throw std::invalid_argument("this mode has no pointwise approximation to grid");
  std::vector<Point> points;
  points.reserve(g * g);
  for (std::size_t j = 0; j < g; ++j) {
    for (std::size_t i = 0; i < g; ++i) {
      points.push_back({(static_cast<double>(i) + 0.5) / static_cast<double>(g),
                        (static_cast<double>(j) + 0.5) / static_cast<double>(g)});
    }
  }
  std::vector<double> values(points.size());
  approx(points, values);
  return values;
}

void write_grid_csv(std::ostream& out, const std::vector<double>& values, std::size_t g) {
  out << "x,y,value\n";
  for (std::size_t j = 0; j < g; ++j) {
    for (std::size_t i = 0; i < g; ++i) {
      const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(g);
      const double y = (static_cast<double>(j) + 0.5) / static_cast<double>(g);
      out << format_double(x) << ',' << format_double(y) << ',' << format_double(values[j * g + i]) << '\n';
    }
  }
}

void write_grid_pgm(std::ostream& out, const std::vector<double>& values, std::size_t g) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double low = *lo;
  const double range = *hi - *lo;
  out << "P5\n" << g << ' ' << g << "\n255\n";
  std::vector<char> row(g);
  for (std::size_t r = 0; r < g; ++r) {
    const std::size_t j = g - 1 - r;
    for (std::size_t i = 0; i < g; ++i) {
      const double t = range > 0.0 ? (values[j * g + i] - low) / range : 0.0;
      row[i] = static_cast<char>(static_cast<unsigned char>(std::lround(std::clamp(t, 0.0, 1.0) * 255.0)));
    }
    out.write(row.data(), static_cast<std::streamsize>(g));
  }
}

std::pair<int, int> parse_level_range(const std::string& text) {
  try {
    const auto dots = text.find("..");
    std::size_t used = 0;
    if (dots == std::string::npos) {
      const int m = std::stoi(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {m, m};
    }
    const int lo = std::stoi(text.substr(0, dots), &used);
    if (used != dots) throw std::invalid_argument(text);
    const std::string tail = text.substr(dots + 2);
    const int hi = std::stoi(tail, &used);
    if (used != tail.size() || hi < lo) throw std::invalid_argument(text);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw std::invalid_argument("bad level range '" + text + "' (expected M or LO..HI)");
  }
}

std::vector<CompareRow> run_compare(const RunConfig& cfg, int m_min, int m_max) {
  check_level(m_min);
  check_level(m_max);
  const TestFunction& tf = find_function(cfg.function);
  const auto levels = static_cast<std::size_t>(m_max - m_min + 1);

  struct TrialResult {
    double fit_l2 = 0.0;
    double spin_l2 = 0.0;
    double fit_integral = 0.0;
    double spin_integral = 0.0;
    double mc_integral = 0.0;
  };
  std::vector<TrialResult> trials(levels * cfg.trials);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t job = next++; job < trials.size(); job = next++) {
      try {
        const int m = m_min + static_cast<int>(job / cfg.trials);
        const std::size_t trial = job % cfg.trials;
        const std::uint64_t seed = child_seed(cfg.seed, static_cast<std::uint64_t>(m) * 1000 + trial);
        RunConfig level_cfg = cfg;
        level_cfg.m = m;
        const std::size_t l = level_cfg.iterations();
        const SampleSet samples = draw_samples(tf.f, l, seed);
        FitConfig fc = fit_config(level_cfg, l);
        fc.kaczmarz.seed = seed;

        TrialResult& out = trials[job];
        const Model model = fit(samples, m, fc);
        out.fit_l2 = l2_error(model, tf.f, cfg.mc_points, seed).estimate;
        out.fit_integral = integrate(model);
        double total = 0.0;
        for (double v : samples.values) total += v;
        out.mc_integral = total / static_cast<double>(samples.size());
        if (cfg.spins > 0) {
          const SpinEnsemble ensemble = fit_spin(samples, m, fc, cfg.spins, seed);
          out.spin_l2 = l2_error(ensemble, tf.f, cfg.mc_points, seed).estimate;
          out.spin_integral = ensemble.integrate();
        }
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  {
    const std::size_t threads =
        std::min<std::size_t>(trials.size(), std::max(1U, std::thread::hardware_concurrency()));
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<CompareRow> rows;
  for (std::size_t li = 0; li < levels; ++li) {
    const int m = m_min + static_cast<int>(li);
    RunConfig level_cfg = cfg;
    level_cfg.m = m;
    CompareRow row;
    row.m = m;
    row.n = std::size_t{1} << m;
    row.l = level_cfg.iterations();

    const Model oracle = smolyak_model(cfg.function, m);
    row.smolyak_l2 = l2_error(oracle, tf.f, cfg.mc_points, cfg.seed).estimate;

    std::vector<double> fit_l2, spin_l2, fit_int, spin_int, mc_int;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const TrialResult& r = trials[li * cfg.trials + t];
      fit_l2.push_back(r.fit_l2);
      spin_l2.push_back(r.spin_l2);
      if (tf.reference_integral) {
        fit_int.push_back(std::abs(r.fit_integral - *tf.reference_integral));
        spin_int.push_back(std::abs(r.spin_integral - *tf.reference_integral));
        mc_int.push_back(std::abs(r.mc_integral - *tf.reference_integral));
      }
    }
    row.fit_l2 = median(fit_l2);
    if (cfg.spins > 0) row.spin_l2 = median(spin_l2);
    if (tf.reference_integral) {
      row.smolyak_integral_error = std::abs(integrate(oracle) - *tf.reference_integral);
      row.fit_integral_error = median(fit_int);
      if (cfg.spins > 0) row.spin_integral_error = median(spin_int);
      row.mc_integral_error = median(mc_int);
    }
    rows.push_back(row);
  }
  if (!tf.reference_integral) {
    std::cerr << "warning: function '" << tf.name << "' has no reference integral; integration columns left empty\n";
  }
  return rows;
}

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows) {
  out << "m,n,l,smolyak_l2,fit_l2,spin_l2,smolyak_int_err,fit_int_err,spin_int_err,mc_int_err\n";
  for (const auto& r : rows) {
    out << r.m << ',' << r.n << ',' << r.l << ',' << format_double(r.smolyak_l2) << ','
        << format_double(r.fit_l2) << ',' << optional_cell(r.spin_l2) << ','
        << optional_cell(r.smolyak_integral_error) << ',' << optional_cell(r.fit_integral_error) << ','
        << optional_cell(r.spin_integral_error) << ',' << optional_cell(r.mc_integral_error) << '\n';
  }
}

int report_checks(std::ostream& out, const std::vector<CheckResult>& results) {
  bool ok = true;
  for (const auto& r : results) {
    char line[256];
    std::snprintf(line, sizeof line, "%s  %-58s tol=%-8.1e measured=%.3e\n", r.passed ? "PASS" : "FAIL",
                  r.name.c_str(), r.tolerance, r.measured);
    out << line;
    ok = ok && r.passed;
  }
  return ok ? kSuccess : kVerificationFailed;
}

}  // namespace mhk::cli
