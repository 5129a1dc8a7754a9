#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "mhk/embedding.hpp"
#include "mhk/samples.hpp"

namespace mhk {

/// Generic randomized Kaczmarz: for each index i in order, project v onto
/// the hyperplane <a_i, v> = b_i. Rows must share one Euclidean norm
/// (relative tolerance 1e-9); throws std::invalid_argument otherwise and
/// std::out_of_range for a bad row index.
std::vector<double> kaczmarz_dense(const DenseMatrix& rows, std::span<const double> b,
                                   std::span<const std::size_t> row_indices, std::vector<double> v0);

/// v += (target - <e, v>) / (1 + m/2) * e.
void kaczmarz_sparse_step(CoefVector& v, const SparseEmbedding& e, double target);

enum class SampleOrder {
  use_once,          ///< sample i drives step i
  with_replacement,  ///< each step draws a sample index uniformly
};

struct KaczmarzConfig {
  std::size_t iterations = 1;
  std::uint64_t seed = 0;
  SampleOrder order = SampleOrder::use_once;
  /// Starting iterate; zero when empty.
  std::optional<CoefVector> initial;
};

/// ||v_k - reference||^2 for k = 0..iterations.
struct ConvergenceTrace {
  std::vector<double> sq_error;

  bool empty() const { return sq_error.empty(); }
  /// Header "k,sq_error", one row per k.
  void write_csv(std::ostream& out) const;
};

struct KaczmarzResult {
  CoefVector coef;
  ConvergenceTrace trace;
};

/// Runs cfg.iterations sparse steps with sample values as targets.
/// Throws std::invalid_argument for an empty sample set, zero iterations or
/// (use-once) more iterations than samples.
KaczmarzResult kaczmarz_run(const SampleSet& samples, int m, const KaczmarzConfig& cfg,
                            const CoefVector* trace_reference = nullptr);

double squared_distance(const CoefVector& a, const CoefVector& b);

}  // namespace mhk
