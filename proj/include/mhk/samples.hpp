#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <vector>

#include "mhk/dyadic.hpp"

namespace mhk {

using Function = std::function<double(Point)>;

/// Scattered samples (point, value) on [0,1)^2.
struct SampleSet {
  std::vector<Point> points;
  std::vector<double> values;
  std::optional<std::uint64_t> seed;

  std::size_t size() const { return points.size(); }

  /// Throws std::invalid_argument on length mismatch, std::domain_error on a
  /// point outside [0,1)^2.
  void validate() const;
};

/// count i.i.d. uniform points from the `points` stream of seed, values f(point).
SampleSet draw_samples(const Function& f, std::size_t count, std::uint64_t seed);

/// Reads "x,y,value" rows; a leading non-numeric header row is skipped.
/// Throws std::runtime_error with the line number on malformed input.
SampleSet read_samples_csv(std::istream& in);

}  // namespace mhk
