#include "mhk/model_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace mhk {

namespace {

template <class T>
void put_le(std::ostream& out, T value) {
  std::uint64_t bits = 0;
  if constexpr (std::is_same_v<T, double>) {
    bits = std::bit_cast<std::uint64_t>(value);
  } else {
    bits = static_cast<std::uint64_t>(value);
  }
  char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFFU);
  out.write(bytes, sizeof(T));
}

template <class T>
T get_le(std::istream& in, const char* field) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw IoError(std::string("model file truncated reading ") + field);
  }
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  if constexpr (std::is_same_v<T, double>) {
    return std::bit_cast<double>(bits);
  } else {
    return static_cast<T>(bits);
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_model(std::ostream& out, const Model& model) {
  const Point shift = model.meta.shift.value_or(Point{});
  out.write(kModelMagic, sizeof kModelMagic);
  put_le<std::uint16_t>(out, kModelVersion);
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(model.level()));
  put_le<double>(out, model.meta.offset);
  put_le<double>(out, shift.x);
  put_le<double>(out, shift.y);
  put_le<std::uint64_t>(out, model.coef.size());
  for (double c : model.coef.values()) put_le<double>(out, c);
  if (!out) throw IoError("failed writing model");
}

Model read_model(std::istream& in) {
  char magic[4];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kModelMagic, sizeof magic) != 0) {
    throw IoError("not a model file (bad magic)");
  }
  const auto version = get_le<std::uint16_t>(in, "version");
  if (version != kModelVersion) throw IoError("unsupported model version " + std::to_string(version));
  const auto m = static_cast<int>(get_le<std::uint16_t>(in, "level"));
  if (m < kMinLevel || m > kMaxLevel) throw IoError("model level " + std::to_string(m) + " out of range");

  Model model;
  model.meta.offset = get_le<double>(in, "offset");
  const Point shift{get_le<double>(in, "shift x"), get_le<double>(in, "shift y")};
  if (shift.x != 0.0 || shift.y != 0.0) model.meta.shift = shift;
  const auto count = get_le<std::uint64_t>(in, "count");
  if (count != dimension(m)) {
    throw IoError("coefficient count " + std::to_string(count) + " does not match level " + std::to_string(m));
  }
  std::vector<double> values(count);
  for (double& v : values) v = get_le<double>(in, "coefficients");
  model.coef = CoefVector(m, std::move(values));
  return model;
}

void save_model(const std::filesystem::path& path, const Model& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_model(out, model);
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return read_model(in);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void save_ensemble(const std::filesystem::path& dir, const SpinEnsemble& ensemble) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  std::ostringstream manifest;
  manifest << "format = mhkz-ensemble\n";
  manifest << "version = " << kModelVersion << "\n";
  manifest << "level = " << (ensemble.models.empty() ? 0 : ensemble.models.front().level()) << "\n";
  manifest << "count = " << ensemble.size() << "\n";
  for (std::size_t k = 0; k < ensemble.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "model_%03zu.mhkz", k);
    save_model(dir / name, ensemble.models[k]);
    manifest << "model." << k << " = " << name << "\n";
    manifest << "shift." << k << " = " << format_double(ensemble.shifts[k].x) << " "
             << format_double(ensemble.shifts[k].y) << "\n";
  }
  std::ofstream out(dir / "manifest.txt", std::ios::trunc);
  if (!(out << manifest.str())) throw IoError("failed writing manifest in " + dir.string());
}

SpinEnsemble load_ensemble(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.txt");
  if (!in) throw IoError("cannot open " + (dir / "manifest.txt").string());
  std::map<std::string, std::string> entries;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (line.empty() || line.front() == '#' || eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    entries[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  if (entries["format"] != "mhkz-ensemble") throw IoError(dir.string() + ": not an ensemble manifest");

  std::size_t count = 0;
  try {
    count = std::stoul(entries.at("count"));
  } catch (const std::exception&) {
    throw IoError(dir.string() + ": manifest lacks a valid count");
  }
  SpinEnsemble ensemble;
  for (std::size_t k = 0; k < count; ++k) {
    const std::string key = std::to_string(k);
    const auto model_it = entries.find("model." + key);
    const auto shift_it = entries.find("shift." + key);
    if (model_it == entries.end() || shift_it == entries.end()) {
      throw IoError(dir.string() + ": manifest missing entry " + key);
    }
    Point shift;
    std::istringstream fields(shift_it->second);
    if (!(fields >> shift.x >> shift.y)) throw IoError(dir.string() + ": bad shift." + key);
    ensemble.models.push_back(load_model(dir / model_it->second));
    ensemble.shifts.push_back(shift);
  }
  if (ensemble.models.empty()) throw IoError(dir.string() + ": empty ensemble");
  return ensemble;
}

}  // namespace mhk
