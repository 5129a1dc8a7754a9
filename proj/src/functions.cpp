#include "mhk/functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mhk {

namespace {

// tools/reference_integral.py: adaptive quadrature (abs err ~6e-15) and
// 4096^2 / 8192^2 midpoint rules with Richardson extrapolation agree to 1e-16.
constexpr double kOscillatorIntegral = -3.244973119804341e-04;

double oscillator(Point p) {
  return std::sin(20.0 * p.x * p.x + 10.0 * p.y) * std::sin(std::numbers::pi * p.x) *
         std::sin(std::numbers::pi * p.y);
}

double root_kink(double t) { return std::sqrt(std::abs(t - 0.5)); }

std::vector<TestFunction> make_registry() {
  std::vector<TestFunction> r;
  r.push_back({"paper-example", oscillator, 1.0, kOscillatorIntegral,
               "adaptive quadrature, cross-checked by 8192^2 midpoint rule"});
  r.push_back({"constant", [](Point) { return 1.0; }, 1.0, 1.0, "exact"});
  r.push_back({"separable-x", [](Point p) { return std::sin(3.0 * p.x); }, 1.0, (1.0 - std::cos(3.0)) / 3.0,
               "exact: (1 - cos 3) / 3"});
  r.push_back({"bilinear", [](Point p) { return p.x * p.y; }, 1.0, 0.25, "exact"});
  r.push_back({"holder-half", [](Point p) { return root_kink(p.x) * root_kink(p.y); }, 0.5, 2.0 / 9.0,
               "exact: (sqrt(2) / 3)^2"});
  return r;
}

}  // namespace

const std::vector<TestFunction>& registry() {
  static const std::vector<TestFunction> functions = make_registry();
  return functions;
}

const TestFunction& find_function(const std::string& name) {
  for (const auto& f : registry()) {
    if (f.name == name) return f;
  }
  std::string known;
  for (const auto& f : registry()) known += (known.empty() ? "" : ", ") + f.name;
  throw std::invalid_argument("unknown function '" + name + "' (known: " + known + ")");
}

}  // namespace mhk
