#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "mhk/embedding.hpp"
#include "mhk/simd.hpp"

namespace mhk::simd {

namespace {

void evaluate_scalar(int m, std::span<const double> coef, std::span<const Point> points, std::span<double> out) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [column, row] = cell_of(points[i], m);
    const SparseEmbedding e = embed(locate_cell(column, row, m));
    double acc = coef[e.beta0];
    for (const auto& t : e.entries()) acc += t.coef * coef[t.index];
    out[i] = acc;
  }
}

double combine(const double (&lanes)[4]) { return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]); }

double sum_scalar(std::span<const double> values) {
  double lanes[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t body = values.size() & ~std::size_t{3};
  for (std::size_t i = 0; i < body; i += 4) {
    for (std::size_t l = 0; l < 4; ++l) lanes[l] += values[i + l];
  }
  double total = combine(lanes);
  for (std::size_t i = body; i < values.size(); ++i) total += values[i];
  return total;
}

double sum_sq_diff_scalar(std::span<const double> a, std::span<const double> b) {
  double lanes[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t body = a.size() & ~std::size_t{3};
  for (std::size_t i = 0; i < body; i += 4) {
    for (std::size_t l = 0; l < 4; ++l) {
      const double d = a[i + l] - b[i + l];
      lanes[l] += d * d;
    }
  }
  double total = combine(lanes);
  for (std::size_t i = body; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    total += d * d;
  }
  return total;
}

}  // namespace

namespace detail {
const Kernels scalar_kernels{evaluate_scalar, sum_scalar, sum_sq_diff_scalar};
}  // namespace detail

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(__i386__)
      return detail::avx2_kernels != nullptr && __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa best_isa() {
  static const Isa chosen = [] {
    const char* force = std::getenv("MHK_FORCE_SCALAR");
    if (force != nullptr && *force != '\0' && std::string(force) != "0") return Isa::scalar;
    return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
  }();
  return chosen;
}

const Kernels& kernels(Isa isa) {
  if (!isa_supported(isa)) {
    throw std::runtime_error("ISA " + std::string(isa_name(isa)) + " not supported on this machine");
  }
  return isa == Isa::avx2 ? *detail::avx2_kernels : detail::scalar_kernels;
}

}  // namespace mhk::simd
