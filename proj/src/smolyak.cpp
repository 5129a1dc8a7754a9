#include "mhk/smolyak.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace mhk {

namespace {

struct IndexRange {
  std::uint64_t first;
  std::uint64_t count;
};

// Level-`level` dyadic intervals overlapping [index 2^-k, (index+1) 2^-k).
IndexRange overlapping(std::uint32_t level, std::uint32_t k, std::uint64_t index) {
  if (level >= k) return {index << (level - k), std::uint64_t{1} << (level - k)};
  return {index >> (k - level), 1};
}

double sum_overlapping(const CenterSamples& s, const DyadicRect& rect, std::uint32_t kx, std::uint32_t ky,
                       bool fine) {
  const IndexRange xs = overlapping(kx, rect.kx, rect.ix);
  const IndexRange ys = overlapping(ky, rect.ky, rect.iy);
  double total = 0.0;
  for (std::uint64_t ix = xs.first; ix < xs.first + xs.count; ++ix) {
    for (std::uint64_t iy = ys.first; iy < ys.first + ys.count; ++iy) {
      total += fine ? s.fine(kx, ix, iy) : s.coarse(kx, ix, iy);
    }
  }
  return total;
}

}  // namespace

CenterSamples::CenterSamples(int m, std::vector<std::vector<double>> fine,
                             std::vector<std::vector<double>> coarse)
    : m_(m), fine_(std::move(fine)), coarse_(std::move(coarse)) {
  check_level(m);
  const std::size_t n = std::size_t{1} << m;
  bool ok = fine_.size() == static_cast<std::size_t>(m) + 1 && coarse_.size() == static_cast<std::size_t>(m);
  for (const auto& band : fine_) ok = ok && band.size() == n;
  for (const auto& band : coarse_) ok = ok && band.size() == n / 2;
  if (!ok) throw std::invalid_argument("CenterSamples: malformed sample tables for m=" + std::to_string(m));
}

CenterSamples CenterSamples::from_function(int m, const std::function<double(Point)>& f) {
  check_level(m);
  std::vector<std::vector<double>> fine(static_cast<std::size_t>(m) + 1);
  std::vector<std::vector<double>> coarse(static_cast<std::size_t>(m));
  const auto mu = static_cast<std::uint32_t>(m);
  for (std::uint32_t kx = 0; kx <= mu; ++kx) {
    const std::uint32_t ky = mu - kx;
    auto& band = fine[kx];
    band.reserve(std::size_t{1} << m);
    for (std::uint64_t ix = 0; ix < (std::uint64_t{1} << kx); ++ix) {
      for (std::uint64_t iy = 0; iy < (std::uint64_t{1} << ky); ++iy) {
        band.push_back(f(DyadicRect{kx, ky, ix, iy}.center()));
      }
    }
  }
  for (std::uint32_t kx = 0; kx < mu; ++kx) {
    const std::uint32_t ky = mu - 1 - kx;
    auto& band = coarse[kx];
    band.reserve(std::size_t{1} << (m - 1));
    for (std::uint64_t ix = 0; ix < (std::uint64_t{1} << kx); ++ix) {
      for (std::uint64_t iy = 0; iy < (std::uint64_t{1} << ky); ++iy) {
        band.push_back(f(DyadicRect{kx, ky, ix, iy}.center()));
      }
    }
  }
  return CenterSamples(m, std::move(fine), std::move(coarse));
}

std::size_t CenterSamples::fine_count() const {
  std::size_t total = 0;
  for (const auto& band : fine_) total += band.size();
  return total;
}

std::size_t CenterSamples::coarse_count() const {
  std::size_t total = 0;
  for (const auto& band : coarse_) total += band.size();
  return total;
}

double CenterSamples::at(const DyadicRect& r) const {
  const auto mu = static_cast<std::uint32_t>(m_);
  const bool in_range = r.ix < (std::uint64_t{1} << r.kx) && r.iy < (std::uint64_t{1} << r.ky);
  if (in_range && r.kx + r.ky == mu) return fine(r.kx, r.ix, r.iy);
  if (in_range && r.kx + r.ky + 1 == mu) return coarse(r.kx, r.ix, r.iy);
  throw std::out_of_range("CenterSamples: no sample for rectangle (" + std::to_string(r.kx) + "," +
                          std::to_string(r.ky) + "," + std::to_string(r.ix) + "," + std::to_string(r.iy) + ")");
}

double smolyak_eval(const CenterSamples& samples, Point p) {
  check_point(p);
  const int m = samples.level();
  const auto [column, row] = cell_of(p, m);
  const auto mu = static_cast<std::uint32_t>(m);
  double total = 0.0;
  for (std::uint32_t k = 0; k <= mu; ++k) {
    total += samples.fine(k, column >> (mu - k), row >> k);
  }
  for (std::uint32_t k = 1; k <= mu; ++k) {
    total -= samples.coarse(k - 1, column >> (mu - k + 1), row >> k);
  }
  return total;
}

double s_r(const CenterSamples& samples, const DyadicRect& rect, int r) {
  const int m = samples.level();
  if (r < 0 || r > m) throw std::invalid_argument("s_r: width level " + std::to_string(r) + " outside [0, m]");
  const auto ru = static_cast<std::uint32_t>(r);
  const auto mu = static_cast<std::uint32_t>(m);
  double total = sum_overlapping(samples, rect, ru, mu - ru, true);
  if (r < m) total -= sum_overlapping(samples, rect, ru, mu - 1 - ru, false);
  return total;
}

CoefVector build_weight_vector(const CenterSamples& samples, WeightExponent exponent) {
  const int m = samples.level();
  const IndexLayout layout(m);
  CoefVector w(m);

  for (std::size_t j = 0; j < layout.strip_count(); ++j) {
    const DyadicRect strip = layout.rect_of_index(j);
    double acc = 0.0;
    for (int r = 0; r <= m; ++r) acc += std::ldexp(s_r(samples, strip, r), -r);
    w[j] = acc;
  }

  for (std::size_t j = layout.strip_count(); j < layout.dim(); ++j) {
    const int band = layout.band_of(j);
    const int kappa = exponent == WeightExponent::half_width ? band + 1 : band;
    const auto [left, right] = halves(layout.rect_of_index(j));
    double acc = 0.0;
    for (int r = kappa; r <= m; ++r) {
      acc += std::ldexp(s_r(samples, left, r) - s_r(samples, right, r), -r);
    }
    w[j] = std::ldexp(acc, kappa) * kInvSqrt2;
  }
  return w;
}

}  // namespace mhk
