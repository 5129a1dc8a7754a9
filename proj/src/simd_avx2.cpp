#include "mhk/simd.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

#include <cstdint>

#include "mhk/embedding.hpp"

namespace mhk::simd {

namespace {

// Loads points i..i+3 and splits them into x and y lanes in point order.
inline void load_points(const Point* p, __m256d& xs, __m256d& ys) {
  const __m256d a = _mm256_loadu_pd(&p[0].x);  // x0 y0 x1 y1
  const __m256d b = _mm256_loadu_pd(&p[2].x);  // x2 y2 x3 y3
  xs = _mm256_permute4x64_pd(_mm256_unpacklo_pd(a, b), 0xD8);
  ys = _mm256_permute4x64_pd(_mm256_unpackhi_pd(a, b), 0xD8);
}

// Cell indices fit in 32 bits for m <= 26, as do all coefficient indices.
void evaluate_avx2(int m, std::span<const double> coef, std::span<const Point> points, std::span<double> out) {
  const double* base = coef.data();
  const __m256d scale = _mm256_set1_pd(static_cast<double>(std::uint64_t{1} << m));
  const __m128i one = _mm_set1_epi32(1);
  const __m256d inv_sqrt2 = _mm256_set1_pd(kInvSqrt2);
  const std::int32_t strips = std::int32_t{1} << m;
  const std::int32_t band = std::int32_t{1} << (m - 1);

  std::size_t i = 0;
  for (; i + 4 <= points.size(); i += 4) {
    __m256d xs;
    __m256d ys;
    load_points(&points[i], xs, ys);
    const __m128i column = _mm256_cvttpd_epi32(_mm256_floor_pd(_mm256_mul_pd(xs, scale)));
    const __m128i row = _mm256_cvttpd_epi32(_mm256_floor_pd(_mm256_mul_pd(ys, scale)));

    __m256d acc = _mm256_i32gather_pd(base, row, 8);
    for (int k = 1; k <= m; ++k) {
      const __m128i col_k = _mm_srl_epi32(column, _mm_cvtsi32_si128(m - k + 1));
      const __m128i row_k = _mm_srl_epi32(row, _mm_cvtsi32_si128(k));
      const __m128i offset = _mm_add_epi32(_mm_sll_epi32(row_k, _mm_cvtsi32_si128(k - 1)), col_k);
      const __m128i index = _mm_add_epi32(offset, _mm_set1_epi32(strips + (k - 1) * band));
      const __m256d value = _mm256_i32gather_pd(base, index, 8);

      // +1 in the left half, -1 in the right half
      const __m128i right = _mm_and_si128(_mm_srl_epi32(column, _mm_cvtsi32_si128(m - k)), one);
      const __m128i sign = _mm_sub_epi32(one, _mm_add_epi32(right, right));
      const __m256d weight = _mm256_mul_pd(_mm256_cvtepi32_pd(sign), inv_sqrt2);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(weight, value));
    }
    _mm256_storeu_pd(&out[i], acc);
  }
  if (i < points.size()) {
    detail::scalar_kernels.evaluate(m, coef, points.subspan(i), out.subspan(i));
  }
}

double horizontal(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

double sum_avx2(std::span<const double> values) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t body = values.size() & ~std::size_t{3};
  for (std::size_t i = 0; i < body; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(&values[i]));
  double total = horizontal(acc);
  for (std::size_t i = body; i < values.size(); ++i) total += values[i];
  return total;
}

double sum_sq_diff_avx2(std::span<const double> a, std::span<const double> b) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t body = a.size() & ~std::size_t{3};
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i]));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double total = horizontal(acc);
  for (std::size_t i = body; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    total += d * d;
  }
  return total;
}

const Kernels avx2_table{evaluate_avx2, sum_avx2, sum_sq_diff_avx2};

}  // namespace

namespace detail {
const Kernels* const avx2_kernels = &avx2_table;
}  // namespace detail

}  // namespace mhk::simd

#else

namespace mhk::simd::detail {
const Kernels* const avx2_kernels = nullptr;
}  // namespace mhk::simd::detail

#endif
