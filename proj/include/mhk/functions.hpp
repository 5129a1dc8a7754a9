#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mhk/samples.hpp"

namespace mhk {

struct TestFunction {
  std::string name;
  Function f;
  /// Mixed Hoelder exponent (documentation only).
  double alpha = 1.0;
  std::optional<double> reference_integral;
  /// How reference_integral was obtained.
  std::string integral_source;
};

/// Built-in functions: paper-example, constant, separable-x, bilinear,
/// holder-half.
const std::vector<TestFunction>& registry();

/// Throws std::invalid_argument listing the known names.
const TestFunction& find_function(const std::string& name);

}  // namespace mhk
