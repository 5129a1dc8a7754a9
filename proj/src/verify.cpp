#include "mhk/verify.hpp"

#include <algorithm>
#include <cmath>

#include "mhk/approximator.hpp"
#include "mhk/embedding.hpp"
#include "mhk/functions.hpp"
#include "mhk/kaczmarz.hpp"
#include "mhk/rng.hpp"

namespace mhk {

namespace {

CheckResult finish(std::string name, double tolerance, double measured) {
  return {std::move(name), tolerance, measured, measured <= tolerance};
}

Point cell_center(std::uint64_t column, std::uint64_t row, int m) {
  const double h = std::ldexp(1.0, -m);
  return {(static_cast<double>(column) + 0.5) * h, (static_cast<double>(row) + 0.5) * h};
}

CoefVector random_coefs(int m, Rng& rng) {
  CoefVector v(m);
  for (double& x : v.values()) x = 2.0 * rng.uniform() - 1.0;
  return v;
}

}  // namespace

const std::vector<std::string>& exactness_functions() {
  static const std::vector<std::string> names = {"paper-example", "separable-x", "bilinear", "holder-half"};
  return names;
}

CheckResult check_gram_identity(int max_level, double tolerance) {
  double worst = 0.0;
  for (int m = 1; m <= max_level; ++m) {
    const DenseMatrix a = full_matrix(m);
    const std::size_t d = a.cols;
    std::vector<double> gram(d * d, 0.0);
    for (std::size_t r = 0; r < a.rows; ++r) {
      const auto row = a.row(r);
      for (std::size_t i = 0; i < d; ++i) {
        if (row[i] == 0.0) continue;
        for (std::size_t j = 0; j < d; ++j) gram[i * d + j] += row[i] * row[j];
      }
    }
    const double expected = std::ldexp(1.0, m);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        worst = std::max(worst, std::abs(gram[i * d + j] - (i == j ? expected : 0.0)));
      }
    }
  }
  return finish("gram identity A^T A = 2^m I (m=1.." + std::to_string(max_level) + ")", tolerance, worst);
}

CheckResult check_exactness(int max_level, const std::vector<std::string>& functions, WeightExponent exponent,
                            double weight_perturbation, double tolerance) {
  double worst = 0.0;
  for (const auto& name : functions) {
    const TestFunction& tf = find_function(name);
    for (int m = 1; m <= max_level; ++m) {
      const CenterSamples samples = CenterSamples::from_function(m, tf.f);
      CoefVector w = build_weight_vector(samples, exponent);
      w[0] += weight_perturbation;
      const std::uint64_t n = std::uint64_t{1} << m;
      for (std::uint64_t row = 0; row < n; ++row) {
        for (std::uint64_t col = 0; col < n; ++col) {
          const Point c = cell_center(col, row, m);
          worst = std::max(worst, std::abs(dot(embed(c, m), w) - smolyak_eval(samples, c)));
        }
      }
    }
  }
  std::string label = exponent == WeightExponent::half_width ? "" : ", parent-width exponent";
  if (weight_perturbation != 0.0) label += ", perturbed w";
  return finish("exactness <Psi, w> = smolyak (m=1.." + std::to_string(max_level) + label + ")", tolerance,
                worst);
}

CheckResult check_rectangle_counts(int max_level) {
  double defects = 0.0;
  for (int m = 1; m <= max_level; ++m) {
    const std::uint64_t n = std::uint64_t{1} << m;
    std::uint64_t count = 0;
    for (int k = 0; k <= m; ++k) {
      // Each rectangle of width 2^-k, height 2^(k-m) covers 2^(m-k) x 2^k cells.
      std::vector<int> cover(n * n, 0);
      double area = 0.0;
      for (std::uint64_t ix = 0; ix < (std::uint64_t{1} << k); ++ix) {
        for (std::uint64_t iy = 0; iy < (n >> k); ++iy) {
          const DyadicRect r{static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(m - k), ix, iy};
          ++count;
          area += r.area();
          for (std::uint64_t cx = ix << (m - k); cx < (ix + 1) << (m - k); ++cx) {
            for (std::uint64_t cy = iy << k; cy < (iy + 1) << k; ++cy) ++cover[cy * n + cx];
          }
        }
      }
      defects += std::abs(area - 1.0);
      for (int c : cover) defects += std::abs(c - 1);
    }
    defects += std::abs(static_cast<double>(count) - static_cast<double>((m + 1) * n));
  }
  return finish("dyadic counts and disjoint cover (m=1.." + std::to_string(max_level) + ")", 0.0, defects);
}

CheckResult check_locate_consistency(int max_level, std::size_t points_per_level) {
  Rng rng(20240601);
  double misses = 0.0;
  for (int m = 1; m <= max_level; ++m) {
    const IndexLayout layout(m);
    for (std::size_t i = 0; i < points_per_level; ++i) {
      const Point p{rng.uniform(), rng.uniform()};
      const Location loc = locate(p, m);
      for (int k = 0; k <= m; ++k) {
        if (!layout.rect_of_index(loc.beta[k]).contains(p)) misses += 1.0;
      }
    }
  }
  return finish("locate returns containing rectangles (m=1.." + std::to_string(max_level) + ")", 0.0, misses);
}

CheckResult check_single_step_projection(int max_level, double tolerance) {
  Rng rng(77);
  double worst = 0.0;
  for (int m = 1; m <= max_level; ++m) {
    for (int trial = 0; trial < 200; ++trial) {
      CoefVector v = random_coefs(m, rng);
      const SparseEmbedding e = embed({rng.uniform(), rng.uniform()}, m);
      const double target = 4.0 * rng.uniform() - 2.0;
      kaczmarz_sparse_step(v, e, target);
      worst = std::max(worst, std::abs(dot(e, v) - target) / std::max(1.0, std::abs(target)));
    }
  }
  return finish("single-step hyperplane projection (m=1.." + std::to_string(max_level) + ")", tolerance, worst);
}

CheckResult check_integration_consistency(int max_level, double tolerance) {
  Rng rng(91);
  double worst = 0.0;
  for (int m = 1; m <= max_level; ++m) {
    const Model model = model_from_coefficients(random_coefs(m, rng));
    const std::uint64_t n = std::uint64_t{1} << m;
    double total = 0.0;
    for (std::uint64_t row = 0; row < n; ++row) {
      for (std::uint64_t col = 0; col < n; ++col) total += evaluate(model, cell_center(col, row, m));
    }
    worst = std::max(worst, std::abs(integrate(model) - total / static_cast<double>(n * n)));
  }
  return finish("integrate = mean over cell centers (m=1.." + std::to_string(max_level) + ")", tolerance, worst);
}

CheckResult check_martingale_orthogonality(int max_level, double tolerance) {
  Rng rng(5);
  double worst = 0.0;
  for (int m = 1; m <= max_level; ++m) {
    CoefVector v = random_coefs(m, rng);
    double norm = 0.0;
    for (double x : v.values()) norm += x * x;
    for (double& x : v.values()) x /= std::sqrt(norm);

    const std::uint64_t n = std::uint64_t{1} << m;
    const auto terms = static_cast<std::size_t>(m) + 1;
    std::vector<double> cross(terms * terms, 0.0);
    for (std::uint64_t row = 0; row < n; ++row) {
      for (std::uint64_t col = 0; col < n; ++col) {
        const SparseEmbedding e = embed(locate_cell(col, row, m));
        std::vector<double> parts(terms);
        parts[0] = v[e.beta0];
        for (int k = 1; k <= m; ++k) parts[k] = e.terms[k - 1].coef * v[e.terms[k - 1].index];
        for (std::size_t a = 0; a < terms; ++a) {
          for (std::size_t b = 0; b < terms; ++b) cross[a * terms + b] += parts[a] * parts[b];
        }
      }
    }
    for (std::size_t a = 0; a < terms; ++a) {
      for (std::size_t b = 0; b < terms; ++b) {
        if (a != b) worst = std::max(worst, std::abs(cross[a * terms + b]) / static_cast<double>(n * n));
      }
    }
  }
  return finish("martingale cross terms vanish (m=1.." + std::to_string(max_level) + ")", tolerance, worst);
}

std::vector<CheckResult> run_exact_checks(const VerifyOptions& options) {
  const int m = options.max_level;
  std::vector<CheckResult> results;
  results.push_back(check_rectangle_counts(m));
  results.push_back(check_locate_consistency(m, 2000));
  results.push_back(check_gram_identity(m));
  results.push_back(
      check_exactness(m, exactness_functions(), options.exponent, options.weight_perturbation));
  results.push_back(check_single_step_projection(m));
  results.push_back(check_martingale_orthogonality(std::min(m, 4)));
  results.push_back(check_integration_consistency(m));
  return results;
}

}  // namespace mhk
