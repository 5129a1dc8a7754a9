#pragma once

// Command implementations behind the mhkz executable.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mhk/approximator.hpp"
#include "mhk/verify.hpp"

namespace mhk::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kVerificationFailed = 2,
  kIoFailure = 3,
};

enum class Mode { function, smolyak, random, spin, montecarlo };

/// Throws std::invalid_argument for an unknown name.
Mode parse_mode(const std::string& name);

struct RunConfig {
  std::string function = "paper-example";
  int m = 7;
  double c1 = 8.0;
  std::size_t l = 0;  ///< 0 selects ceil(c1 n ln^2 n)
  std::uint64_t seed = 1;
  std::size_t spins = 0;  ///< 0 selects n = 2^m for spin fits
  bool recenter = false;
  Mode mode = Mode::random;
  std::size_t grid = 256;
  std::size_t mc_points = 200000;
  std::size_t trials = 5;
  std::optional<std::string> reference;
  std::optional<std::filesystem::path> samples;

  /// Validates mode-specific requirements; throws std::invalid_argument.
  void validate() const;
  std::size_t iterations() const;
  std::size_t spin_count() const;
};

/// Samples from --samples or drawn from the configured function.
SampleSet gather_samples(const RunConfig& cfg);

FitConfig fit_config(const RunConfig& cfg, std::size_t iterations);

/// Oracle model whose coefficients are the Smolyak weight vector.
Model smolyak_model(const std::string& function, int m);

/// Something that can be evaluated on a grid or integrated.
struct Approximant {
  BatchEvaluator evaluate;
  std::optional<double> integral;
};

/// Loads a model file or ensemble directory.
Approximant load_approximant(const std::filesystem::path& input);

/// Builds the approximant described by cfg.mode (fitting when needed).
Approximant build_approximant(const RunConfig& cfg);

/// Values on the (i + 1/2)/G grid, row-major in y then x.
std::vector<double> evaluate_grid(const BatchEvaluator& approx, std::size_t g);

/// Header "x,y,value".
void write_grid_csv(std::ostream& out, const std::vector<double>& values, std::size_t g);

/// Binary P5, linear min->0, max->255, top row = largest y.
void write_grid_pgm(std::ostream& out, const std::vector<double>& values, std::size_t g);

struct CompareRow {
  int m = 0;
  std::size_t n = 0;
  std::size_t l = 0;
  double smolyak_l2 = 0.0;
  double fit_l2 = 0.0;
  std::optional<double> spin_l2;
  std::optional<double> smolyak_integral_error;
  std::optional<double> fit_integral_error;
  std::optional<double> spin_integral_error;
  std::optional<double> mc_integral_error;
};

/// One row per level in [m_min, m_max]; random columns are medians over
/// cfg.trials seeds derived from cfg.seed; the spin column needs cfg.spins > 0.
std::vector<CompareRow> run_compare(const RunConfig& cfg, int m_min, int m_max);

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows);

/// "3..7" or "7".
std::pair<int, int> parse_level_range(const std::string& text);

/// Prints one line per check; returns kVerificationFailed if any fails.
int report_checks(std::ostream& out, const std::vector<CheckResult>& results);

std::string format_double(double v);

}  // namespace mhk::cli
