#pragma once

// Data-parallel kernels with a scalar reference and an AVX2 variant chosen at
// runtime. Both variants produce bit-identical results: the scalar reduction
// kernels accumulate in the same four-lane order the vector code uses, and
// the build disables floating-point contraction.

#include <cstddef>
#include <span>
#include <string_view>

#include "mhk/dyadic.hpp"

namespace mhk::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// Compiled in and supported by the running CPU.
bool isa_supported(Isa isa);

/// Widest supported ISA, unless MHK_FORCE_SCALAR is set in the environment.
Isa best_isa();

struct Kernels {
  /// out[i] = <Psi(points[i]), coef> for a level-m coefficient vector.
  /// Points must already be validated to lie in [0,1)^2.
  void (*evaluate)(int m, std::span<const double> coef, std::span<const Point> points, std::span<double> out);
  /// Sum of values, four interleaved partial sums combined pairwise.
  double (*sum)(std::span<const double> values);
  /// Sum of (a[i] - b[i])^2 in the same lane order as sum.
  double (*sum_sq_diff)(std::span<const double> a, std::span<const double> b);
};

/// Throws std::runtime_error for an unsupported ISA.
const Kernels& kernels(Isa isa);

inline const Kernels& active_kernels() { return kernels(best_isa()); }

namespace detail {
extern const Kernels scalar_kernels;
// Null when the AVX2 translation unit is compiled for another architecture.
extern const Kernels* const avx2_kernels;
}  // namespace detail

}  // namespace mhk::simd
