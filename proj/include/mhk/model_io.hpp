#pragma once

// Binary model files (little-endian):
//
//   offset  size  field
//        0     4  magic "MHKZ"
//        4     2  version (u16) = 1
//        6     2  level m (u16)
//        8     8  recentering offset (f64)
//       16     8  shift x (f64), 0 when unshifted
//       24     8  shift y (f64), 0 when unshifted
//       32     8  coefficient count (u64) = (m + 2) 2^(m-1)
//       40   8*N  coefficients (f64)
//
// A spin ensemble is a directory holding one model file per shift plus
// manifest.txt with "key = value" lines.

#include <filesystem>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "mhk/approximator.hpp"

namespace mhk {

inline constexpr char kModelMagic[4] = {'M', 'H', 'K', 'Z'};
inline constexpr std::uint16_t kModelVersion = 1;
inline constexpr std::size_t kModelHeaderBytes = 40;

/// Raised for unreadable, truncated or malformed files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_model(std::ostream& out, const Model& model);
Model read_model(std::istream& in);

void save_model(const std::filesystem::path& path, const Model& model);
Model load_model(const std::filesystem::path& path);

/// Writes model_NNN.mhkz files and manifest.txt into dir (created if needed).
void save_ensemble(const std::filesystem::path& dir, const SpinEnsemble& ensemble);
SpinEnsemble load_ensemble(const std::filesystem::path& dir);

}  // namespace mhk
