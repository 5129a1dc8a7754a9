#include "mhk/embedding.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace mhk {

namespace {

void check_same_level(const SparseEmbedding& e, const CoefVector& v) {
  if (e.m != v.level()) {
    throw std::invalid_argument("embedding level " + std::to_string(e.m) +
                                " does not match coefficient level " + std::to_string(v.level()));
  }
}

}  // namespace

CoefVector::CoefVector(int m) : m_(m), values_(dimension(m), 0.0) {}

CoefVector::CoefVector(int m, std::vector<double> values) : m_(m), values_(std::move(values)) {
  if (values_.size() != dimension(m)) {
    throw std::invalid_argument("coefficient count " + std::to_string(values_.size()) +
                                " != dimension " + std::to_string(dimension(m)));
  }
}

double SparseEmbedding::squared_norm() const {
  double s = 1.0;
  for (const auto& t : entries()) s += t.coef * t.coef;
  return s;
}

SparseEmbedding embed(const Location& loc) {
  SparseEmbedding e;
  e.m = loc.m;
  e.beta0 = loc.beta[0];
  for (int k = 1; k <= loc.m; ++k) {
    e.terms[k - 1] = {loc.beta[k], loc.sign[k - 1] > 0 ? kInvSqrt2 : -kInvSqrt2};
  }
  return e;
}

SparseEmbedding embed(Point p, int m) { return embed(locate(p, m)); }

namespace {

// Every coefficient access goes through read/write so the counted variant
// measures what the kernel actually touches.
template <bool Count>
double dot_impl(const SparseEmbedding& e, std::span<const double> v, TouchCounter* counter) {
  auto read = [&](std::size_t i) {
    if constexpr (Count) ++counter->reads;
    return v[i];
  };
  double acc = read(e.beta0);
  for (const auto& t : e.entries()) acc += t.coef * read(t.index);
  return acc;
}

template <bool Count>
void axpy_impl(const SparseEmbedding& e, double scale, std::span<double> v, TouchCounter* counter) {
  auto write = [&](std::size_t i, double delta) {
    if constexpr (Count) ++counter->writes;
    v[i] += delta;
  };
  write(e.beta0, scale);
  for (const auto& t : e.entries()) write(t.index, scale * t.coef);
}

}  // namespace

double dot(const SparseEmbedding& e, const CoefVector& v, TouchCounter* counter) {
  check_same_level(e, v);
  return counter != nullptr ? dot_impl<true>(e, v.values(), counter) : dot_impl<false>(e, v.values(), nullptr);
}

void axpy_into(const SparseEmbedding& e, double scale, CoefVector& v, TouchCounter* counter) {
  check_same_level(e, v);
  if (counter != nullptr) {
    axpy_impl<true>(e, scale, v.values(), counter);
  } else {
    axpy_impl<false>(e, scale, v.values(), nullptr);
  }
}

DenseMatrix full_matrix(int m) {
  check_level(m);
  if (m > kMaxFullMatrixLevel) {
    throw std::invalid_argument("full_matrix: m=" + std::to_string(m) + " exceeds test-scale limit " +
                                std::to_string(kMaxFullMatrixLevel));
  }
  const std::uint64_t n = std::uint64_t{1} << m;
  DenseMatrix a(n * n, dimension(m));
  for (std::uint64_t row = 0; row < n; ++row) {
    for (std::uint64_t col = 0; col < n; ++col) {
      const SparseEmbedding e = embed(locate_cell(col, row, m));
      const std::size_t r = row * n + col;
      a(r, e.beta0) = 1.0;
      for (const auto& t : e.entries()) a(r, t.index) = t.coef;
    }
  }
  return a;
}

std::vector<double> dense_row(const SparseEmbedding& e) {
  std::vector<double> row(dimension(e.m), 0.0);
  row[e.beta0] = 1.0;
  for (const auto& t : e.entries()) row[t.index] = t.coef;
  return row;
}

}  // namespace mhk
