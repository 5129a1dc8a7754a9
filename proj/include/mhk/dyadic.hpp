#pragma once

// Dyadic rectangles of the unit square and the coefficient index layout
// shared by the embedding, the weight vector and the Kaczmarz iterates.
//
// Indices are 0-based throughout. The layout for level m is
//
//   [0, 2^m)                   R block: strips of width 1, height 2^-m,
//                              index iy
//   [2^m, 2^m + m 2^(m-1))     T block: band b = 0..m-1 holds the 2^(m-1)
//                              rectangles of width 2^-b, height 2^(b-m+1),
//                              local offset = row * 2^b + col

#include <array>
#include <cstddef>
#include <cstdint>
#include <utility>

namespace mhk {

inline constexpr int kMinLevel = 1;
inline constexpr int kMaxLevel = 26;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Half-open rectangle [ix 2^-kx, (ix+1) 2^-kx) x [iy 2^-ky, (iy+1) 2^-ky).
struct DyadicRect {
  std::uint32_t kx = 0;
  std::uint32_t ky = 0;
  std::uint64_t ix = 0;
  std::uint64_t iy = 0;

  double width() const;
  double height() const;
  double area() const;
  double x_min() const;
  double x_max() const;
  double y_min() const;
  double y_max() const;
  Point center() const;
  bool contains(Point p) const;

  friend bool operator==(const DyadicRect&, const DyadicRect&) = default;
};

/// Left and right halves in x. Throws if kx + 1 would exceed kMaxLevel.
std::pair<DyadicRect, DyadicRect> halves(const DyadicRect& t);

/// True iff the open interiors overlap, i.e. on both axes one side interval
/// contains the other.
bool intersects_positively(const DyadicRect& a, const DyadicRect& b);

/// Throws std::invalid_argument unless kMinLevel <= m <= kMaxLevel.
void check_level(int m);

/// Number of coefficients (m + 2) 2^(m-1).
std::size_t dimension(int m);

/// Throws std::domain_error unless both coordinates lie in [0, 1).
void check_point(Point p);

/// Result of locating a point: beta[0] is the R strip, beta[k] (k = 1..m) the
/// band k-1 T rectangle containing the point, sign[k-1] is +1 when the point
/// lies in its left half.
struct Location {
  int m = 0;
  std::array<std::size_t, kMaxLevel + 1> beta{};
  std::array<int, kMaxLevel> sign{};
};

Location locate(Point p, int m);

/// Same as locate for the point's 2^-m x 2^-m cell (column, row). The
/// embedding only depends on the cell.
Location locate_cell(std::uint64_t column, std::uint64_t row, int m);

/// Cell (column, row) of the 2^-m grid containing p; p must be checked.
std::pair<std::uint64_t, std::uint64_t> cell_of(Point p, int m);

class IndexLayout {
 public:
  explicit IndexLayout(int m);

  int level() const { return m_; }
  std::size_t dim() const { return dim_; }
  std::size_t strip_count() const { return std::size_t{1} << m_; }
  std::size_t band_size() const { return std::size_t{1} << (m_ - 1); }

  /// Band of a T-block index; throws for R-block or out-of-range indices.
  int band_of(std::size_t index) const;

  /// Global index of the band-b rectangle at (col, row).
  std::size_t t_index(int band, std::uint64_t col, std::uint64_t row) const;

  /// Inverse of the layout; throws std::out_of_range.
  DyadicRect rect_of_index(std::size_t index) const;

 private:
  int m_;
  std::size_t dim_;
};

inline DyadicRect rect_of_index(std::size_t index, int m) {
  return IndexLayout(m).rect_of_index(index);
}

}  // namespace mhk
