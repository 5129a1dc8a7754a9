#include "mhk/samples.hpp"

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mhk/rng.hpp"

namespace mhk {

namespace {

bool parse_double(std::string_view text, double& out) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

void SampleSet::validate() const {
  if (points.size() != values.size()) {
    throw std::invalid_argument("SampleSet: " + std::to_string(points.size()) + " points but " +
                                std::to_string(values.size()) + " values");
  }
  for (const Point& p : points) check_point(p);
}

SampleSet draw_samples(const Function& f, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("draw_samples: count must be positive");
  Rng rng(seed, Stream::points);
  SampleSet s;
  s.seed = seed;
  s.points.reserve(count);
  s.values.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    s.points.push_back({x, y});
    s.values.push_back(f({x, y}));
  }
  return s;
}

SampleSet read_samples_csv(std::istream& in) {
  SampleSet s;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    double fields[3];
    std::string_view rest = line;
    bool ok = true;
    for (int i = 0; i < 3 && ok; ++i) {
      const auto comma = rest.find(',');
      const std::string_view token = i < 2 ? rest.substr(0, comma) : rest;
      ok = (i == 2 || comma != std::string_view::npos) && parse_double(token, fields[i]);
      if (i < 2 && comma != std::string_view::npos) rest.remove_prefix(comma + 1);
    }
    if (!ok) {
      if (line_no == 1) continue;  // header
      throw std::runtime_error("samples csv: malformed row at line " + std::to_string(line_no));
    }
    const Point p{fields[0], fields[1]};
    try {
      check_point(p);
    } catch (const std::domain_error& e) {
      throw std::runtime_error("samples csv: line " + std::to_string(line_no) + ": " + e.what());
    }
    s.points.push_back(p);
    s.values.push_back(fields[2]);
  }
  if (s.points.empty()) throw std::runtime_error("samples csv: no samples");
  return s;
}

}  // namespace mhk
