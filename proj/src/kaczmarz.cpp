#include "mhk/kaczmarz.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>

#include "mhk/rng.hpp"

namespace mhk {

std::vector<double> kaczmarz_dense(const DenseMatrix& rows, std::span<const double> b,
                                   std::span<const std::size_t> row_indices, std::vector<double> v0) {
  if (b.size() != rows.rows || v0.size() != rows.cols) {
    throw std::invalid_argument("kaczmarz_dense: dimension mismatch");
  }
  std::vector<double> norms(rows.rows);
  for (std::size_t i = 0; i < rows.rows; ++i) {
    double s = 0.0;
    for (double a : rows.row(i)) s += a * a;
    norms[i] = s;
  }
  for (std::size_t i = 0; i < rows.rows; ++i) {
    if (std::abs(norms[i] - norms[0]) > 1e-9 * norms[0] || norms[i] == 0.0) {
      throw std::invalid_argument("kaczmarz_dense: row " + std::to_string(i) + " norm differs from row 0");
    }
  }

  std::vector<double> v = std::move(v0);
  for (std::size_t i : row_indices) {
    if (i >= rows.rows) throw std::out_of_range("kaczmarz_dense: row index " + std::to_string(i));
    const auto a = rows.row(i);
    double inner = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) inner += a[j] * v[j];
    const double scale = (b[i] - inner) / norms[i];
    for (std::size_t j = 0; j < a.size(); ++j) v[j] += scale * a[j];
  }
  return v;
}

void kaczmarz_sparse_step(CoefVector& v, const SparseEmbedding& e, double target) {
  const double residual = target - dot(e, v);
  axpy_into(e, residual / (1.0 + 0.5 * e.m), v);
}

void ConvergenceTrace::write_csv(std::ostream& out) const {
  out << "k,sq_error\n";
  char buf[64];
  for (std::size_t k = 0; k < sq_error.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", k, sq_error[k]);
    out << buf;
  }
}

double squared_distance(const CoefVector& a, const CoefVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("squared_distance: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

KaczmarzResult kaczmarz_run(const SampleSet& samples, int m, const KaczmarzConfig& cfg,
                            const CoefVector* trace_reference) {
  check_level(m);
  if (samples.size() == 0) throw std::invalid_argument("kaczmarz_run: empty sample set");
  if (samples.values.size() != samples.points.size()) {
    throw std::invalid_argument("kaczmarz_run: points/values length mismatch");
  }
  if (cfg.iterations == 0) throw std::invalid_argument("kaczmarz_run: iterations must be positive");
  if (cfg.order == SampleOrder::use_once && cfg.iterations > samples.size()) {
    throw std::invalid_argument("kaczmarz_run: " + std::to_string(cfg.iterations) + " iterations but only " +
                                std::to_string(samples.size()) + " samples in use-once mode");
  }
  if (cfg.initial && cfg.initial->level() != m) {
    throw std::invalid_argument("kaczmarz_run: initial iterate has the wrong level");
  }
  if (trace_reference != nullptr && trace_reference->level() != m) {
    throw std::invalid_argument("kaczmarz_run: trace reference has the wrong level");
  }

  KaczmarzResult result{cfg.initial ? *cfg.initial : CoefVector(m), {}};
  CoefVector& v = result.coef;
  if (trace_reference != nullptr) {
    result.trace.sq_error.reserve(cfg.iterations + 1);
    result.trace.sq_error.push_back(squared_distance(v, *trace_reference));
  }

  Rng picker(cfg.seed, Stream::replacement);
  for (std::size_t k = 0; k < cfg.iterations; ++k) {
    const std::size_t i = cfg.order == SampleOrder::use_once ? k : picker.below(samples.size());
    const SparseEmbedding e = embed(samples.points[i], m);
    kaczmarz_sparse_step(v, e, samples.values[i]);
    if (trace_reference != nullptr) result.trace.sq_error.push_back(squared_distance(v, *trace_reference));
  }
  return result;
}

}  // namespace mhk
