#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mhk/dyadic.hpp"

namespace mhk {

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

/// Counts coefficient reads and writes performed by the sparse kernels.
/// Pass a pointer to any kernel taking one; nullptr disables counting.
struct TouchCounter {
  std::uint64_t reads = 0;
  std::uint64_t writes = 0;
};

/// Dense coefficient vector of length (m + 2) 2^(m-1).
class CoefVector {
 public:
  CoefVector() = default;
  explicit CoefVector(int m);
  /// Throws std::invalid_argument if values.size() != dimension(m).
  CoefVector(int m, std::vector<double> values);

  int level() const { return m_; }
  std::size_t size() const { return values_.size(); }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  friend bool operator==(const CoefVector&, const CoefVector&) = default;

 private:
  int m_ = 0;
  std::vector<double> values_;
};

struct EmbeddingTerm {
  std::size_t index = 0;
  double coef = 0.0;
};

/// The m + 1 nonzeros of the embedding of a point: coefficient 1 at beta0
/// and +-1/sqrt(2) at one T rectangle per band, stored in band order.
struct SparseEmbedding {
  int m = 0;
  std::size_t beta0 = 0;
  std::array<EmbeddingTerm, kMaxLevel> terms{};

  std::span<const EmbeddingTerm> entries() const { return {terms.data(), static_cast<std::size_t>(m)}; }
  double squared_norm() const;
};

SparseEmbedding embed(Point p, int m);
SparseEmbedding embed(const Location& loc);

/// v[beta0] + sum_k coef_k v[index_k].
double dot(const SparseEmbedding& e, const CoefVector& v, TouchCounter* counter = nullptr);

/// v += scale * embedding, touching exactly m + 1 entries.
void axpy_into(const SparseEmbedding& e, double scale, CoefVector& v, TouchCounter* counter = nullptr);

/// Row-major dense matrix; only used at test scale.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
};

inline constexpr int kMaxFullMatrixLevel = 7;

/// All 2^(2m) cell embeddings as rows, cells enumerated y-major
/// (row index = cell_row * 2^m + cell_column). Throws for m > 7.
DenseMatrix full_matrix(int m);

/// Embedding materialized as a dense row of length dimension(m).
std::vector<double> dense_row(const SparseEmbedding& e);

}  // namespace mhk
