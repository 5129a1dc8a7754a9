#include "mhk/dyadic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mhk {

namespace {

// [i 2^-k, (i+1) 2^-k) contains or is contained in [j 2^-l, (j+1) 2^-l)
bool nested(std::uint32_t k, std::uint64_t i, std::uint32_t l, std::uint64_t j) {
  if (k <= l) return (j >> (l - k)) == i;
  return (i >> (k - l)) == j;
}

}  // namespace

double DyadicRect::width() const { return std::ldexp(1.0, -static_cast<int>(kx)); }
double DyadicRect::height() const { return std::ldexp(1.0, -static_cast<int>(ky)); }
double DyadicRect::area() const { return std::ldexp(1.0, -static_cast<int>(kx + ky)); }
double DyadicRect::x_min() const { return static_cast<double>(ix) * width(); }
double DyadicRect::x_max() const { return static_cast<double>(ix + 1) * width(); }
double DyadicRect::y_min() const { return static_cast<double>(iy) * height(); }
double DyadicRect::y_max() const { return static_cast<double>(iy + 1) * height(); }

Point DyadicRect::center() const {
  return {(static_cast<double>(ix) + 0.5) * width(), (static_cast<double>(iy) + 0.5) * height()};
}

bool DyadicRect::contains(Point p) const {
  return p.x >= x_min() && p.x < x_max() && p.y >= y_min() && p.y < y_max();
}

std::pair<DyadicRect, DyadicRect> halves(const DyadicRect& t) {
  if (t.kx >= static_cast<std::uint32_t>(kMaxLevel)) {
    throw std::invalid_argument("halves: rectangle too narrow to split");
  }
  return {DyadicRect{t.kx + 1, t.ky, 2 * t.ix, t.iy}, DyadicRect{t.kx + 1, t.ky, 2 * t.ix + 1, t.iy}};
}

bool intersects_positively(const DyadicRect& a, const DyadicRect& b) {
  return nested(a.kx, a.ix, b.kx, b.ix) && nested(a.ky, a.iy, b.ky, b.iy);
}

void check_level(int m) {
  if (m < kMinLevel || m > kMaxLevel) {
    throw std::invalid_argument("level m=" + std::to_string(m) + " outside [" +
                                std::to_string(kMinLevel) + ", " + std::to_string(kMaxLevel) + "]");
  }
}

std::size_t dimension(int m) {
  check_level(m);
  return static_cast<std::size_t>(m + 2) << (m - 1);
}

void check_point(Point p) {
  // Negated comparisons also reject NaN.
  if (!(p.x >= 0.0 && p.x < 1.0 && p.y >= 0.0 && p.y < 1.0)) {
    throw std::domain_error("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                            ") outside [0,1)^2");
  }
}

std::pair<std::uint64_t, std::uint64_t> cell_of(Point p, int m) {
  const double scale = std::ldexp(1.0, m);
  return {static_cast<std::uint64_t>(std::floor(p.x * scale)),
          static_cast<std::uint64_t>(std::floor(p.y * scale))};
}

Location locate_cell(std::uint64_t column, std::uint64_t row, int m) {
  check_level(m);
  const std::uint64_t n = std::uint64_t{1} << m;
  if (column >= n || row >= n) throw std::out_of_range("locate_cell: cell outside grid");
  const std::size_t half = std::size_t{1} << (m - 1);

  Location loc;
  loc.m = m;
  loc.beta[0] = row;
  for (int k = 1; k <= m; ++k) {
    const std::uint64_t col = column >> (m - k + 1);
    const std::uint64_t r = row >> k;
    loc.beta[k] = n + static_cast<std::size_t>(k - 1) * half + (r << (k - 1)) + col;
    loc.sign[k - 1] = ((column >> (m - k)) & 1U) ? -1 : 1;
  }
  return loc;
}

Location locate(Point p, int m) {
  check_level(m);
  check_point(p);
  const auto [column, row] = cell_of(p, m);
  return locate_cell(column, row, m);
}

IndexLayout::IndexLayout(int m) : m_(m), dim_(dimension(m)) {}

int IndexLayout::band_of(std::size_t index) const {
  if (index < strip_count() || index >= dim_) {
    throw std::out_of_range("band_of: index " + std::to_string(index) + " not in T block");
  }
  return static_cast<int>((index - strip_count()) >> (m_ - 1));
}

std::size_t IndexLayout::t_index(int band, std::uint64_t col, std::uint64_t row) const {
  if (band < 0 || band >= m_ || col >= (std::uint64_t{1} << band) ||
      row >= (std::uint64_t{1} << (m_ - band - 1))) {
    throw std::out_of_range("t_index: band/position outside layout");
  }
  return strip_count() + static_cast<std::size_t>(band) * band_size() + (row << band) + col;
}

DyadicRect IndexLayout::rect_of_index(std::size_t index) const {
  if (index >= dim_) {
    throw std::out_of_range("rect_of_index: index " + std::to_string(index) + " >= " +
                            std::to_string(dim_));
  }
  if (index < strip_count()) {
    return DyadicRect{0, static_cast<std::uint32_t>(m_), 0, index};
  }
  const std::size_t local = index - strip_count();
  const auto band = static_cast<std::uint32_t>(local >> (m_ - 1));
  const std::size_t offset = local & (band_size() - 1);
  return DyadicRect{band, static_cast<std::uint32_t>(m_) - 1 - band, offset & ((std::size_t{1} << band) - 1),
                    offset >> band};
}

}  // namespace mhk
