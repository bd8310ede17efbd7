#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace CLI {
class App;
}

namespace hawe::cli {

/// CRC-32 (IEEE) of a file's bytes.
std::uint32_t file_crc32(const std::filesystem::path& path);

/// Flat key=value run record. Keys keep insertion order so two runs with the
/// same configuration produce byte-identical manifests.
class Manifest {
 public:
  explicit Manifest(std::string command);

  void set(const std::string& key, const std::string& value);
  /// Records every option of `sub` (given or defaulted) as config.<name>.
  void add_options(const CLI::App& sub);
  /// Records size and CRC-32 of an output file as artifact.<name>.*.
  void add_artifact(const std::string& name, const std::filesystem::path& path);
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace hawe::cli
