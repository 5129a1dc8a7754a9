#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mhk/embedding.hpp"
#include "mhk/rng.hpp"
#include "mhk/simd.hpp"

using namespace mhk;

namespace {

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

std::vector<Point> test_points(std::size_t count, Rng& rng) {
  std::vector<Point> pts;
  const double top = std::nextafter(1.0, 0.0);
  // Corners and cell edges first, then random points.
  for (Point p : {Point{0.0, 0.0}, Point{top, top}, Point{0.0, top}, Point{top, 0.0}, Point{0.5, 0.5},
                  Point{0.25, 0.75}, Point{std::nextafter(0.5, 0.0), std::nextafter(0.5, 0.0)}}) {
    if (pts.size() < count) pts.push_back(p);
  }
  while (pts.size() < count) pts.push_back({rng.uniform(), rng.uniform()});
  return pts;
}

}  // namespace

TEST_CASE("scalar evaluate matches the sparse dot product") {
  Rng rng(1);
  const auto& k = simd::kernels(simd::Isa::scalar);
  for (int m : {1, 2, 5, 9}) {
    CoefVector v(m);
    for (double& x : v.values()) x = rng.uniform() - 0.5;
    const auto pts = test_points(37, rng);
    std::vector<double> out(pts.size());
    k.evaluate(m, v.values(), pts, out);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(same_bits(out[i], dot(embed(pts[i], m), v)));
  }
}

TEST_CASE("scalar reductions use four interleaved lanes") {
  const auto& k = simd::kernels(simd::Isa::scalar);
  const std::vector<double> none;
  CHECK(k.sum(none) == 0.0);
  const std::vector<double> v = {1e16, 1.0, -1e16, 1.0, 3.0};
  // Lanes 1e16, 1, -1e16, 1 are combined pairwise, then the tail is added.
  const double expected = ((1e16 + 1.0) + (-1e16 + 1.0)) + 3.0;
  CHECK(same_bits(k.sum(v), expected));
  const std::vector<double> zero(5, 0.0);
  CHECK(same_bits(k.sum_sq_diff(v, zero), ((1e32 + 1.0) + (1e32 + 1.0)) + 9.0));
}

TEST_CASE("AVX2 kernels are bit-identical to the scalar reference") {
  if (!simd::isa_supported(simd::Isa::avx2)) {
    MESSAGE("AVX2 not available; skipping");
    return;
  }
  const auto& s = simd::kernels(simd::Isa::scalar);
  const auto& a = simd::kernels(simd::Isa::avx2);
  Rng rng(2);
  for (int m : {1, 2, 3, 7, 12, 20}) {
    CoefVector v(m);
    for (double& x : v.values()) x = rng.uniform() * 2.0 - 1.0;
    for (std::size_t count : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 33u, 1000u}) {
      const auto pts = test_points(count, rng);
      std::vector<double> out_s(count), out_a(count);
      s.evaluate(m, v.values(), pts, out_s);
      a.evaluate(m, v.values(), pts, out_a);
      for (std::size_t i = 0; i < count; ++i) REQUIRE(same_bits(out_s[i], out_a[i]));
    }
  }
  for (std::size_t count : {0u, 1u, 2u, 3u, 4u, 5u, 9u, 16u, 1001u, 65536u}) {
    std::vector<double> x(count), y(count);
    for (std::size_t i = 0; i < count; ++i) {
      x[i] = std::ldexp(rng.uniform() - 0.5, static_cast<int>(rng.below(40)) - 20);
      y[i] = rng.uniform();
    }
    CHECK(same_bits(s.sum(x), a.sum(x)));
    CHECK(same_bits(s.sum_sq_diff(x, y), a.sum_sq_diff(x, y)));
  }
}

TEST_CASE("dispatch") {
  CHECK(simd::isa_supported(simd::Isa::scalar));
  CHECK(simd::isa_name(simd::Isa::scalar) == "scalar");
  CHECK(simd::isa_name(simd::Isa::avx2) == "avx2");
  CHECK(simd::isa_supported(simd::best_isa()));
  if (std::getenv("MHK_FORCE_SCALAR") != nullptr) CHECK(simd::best_isa() == simd::Isa::scalar);
  if (!simd::isa_supported(simd::Isa::avx2)) CHECK_THROWS_AS(simd::kernels(simd::Isa::avx2), std::runtime_error);
}
