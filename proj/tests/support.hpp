#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

namespace testsupport {

/// Unique path under the system temp dir; caller removes it.
inline std::filesystem::path temp_path(const std::string& stem) {
  static std::mt19937_64 rng(std::random_device{}());
  return std::filesystem::temp_directory_path() /
         (stem + "-" + std::to_string(rng()));
}

struct TempFile {
  std::filesystem::path path;

  explicit TempFile(const std::string& stem) : path(temp_path(stem)) {}
  TempFile(const std::string& stem, const std::string& content)
      : path(temp_path(stem)) {
    std::ofstream out(path, std::ios::binary);
    out << content;
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
};

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::string out((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  return out;
}

}  // namespace testsupport
