#pragma once

#include <filesystem>
#include <string>

namespace fragmenta::testing {

/// Empty directory under the system temp dir, recreated on each call.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("fragmenta_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fragmenta::testing
