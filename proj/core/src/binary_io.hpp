#pragma once

// Little-endian binary helpers shared by the corpus and model file formats.

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <type_traits>
#include <vector>

#include "hawe/error.hpp"

namespace hawe::detail {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

class BinaryWriter {
 public:
  explicit BinaryWriter(const std::filesystem::path& path)
      : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
  }

  void bytes(const void* data, std::size_t n) {
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  }

  template <class T>
    requires std::is_arithmetic_v<T>
  void put(T value) {
    bytes(&value, sizeof value);
  }

  template <class T>
    requires std::is_arithmetic_v<T>
  void put_vector(const std::vector<T>& values) {
    put<std::uint64_t>(values.size());
    bytes(values.data(), values.size() * sizeof(T));
  }

  void put_string(const std::string& s) {
    put<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }

  void finish() {
    out_.flush();
    if (!out_) throw std::runtime_error("write failed: " + path_.string());
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(const std::filesystem::path& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw InputError("cannot open " + path.string());
  }

  void bytes(void* data, std::size_t n) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw InputError(path_.string() + ": truncated file");
    }
  }

  template <class T>
    requires std::is_arithmetic_v<T>
  T get() {
    T value;
    bytes(&value, sizeof value);
    return value;
  }

  /// `limit` guards against absurd lengths read from a corrupt file.
  template <class T>
    requires std::is_arithmetic_v<T>
  std::vector<T> get_vector(std::uint64_t limit = (1ULL << 40)) {
    const auto n = get<std::uint64_t>();
    if (n > limit) throw InputError(path_.string() + ": corrupt length field");
    std::vector<T> values(n);
    bytes(values.data(), n * sizeof(T));
    return values;
  }

  std::string get_string() {
    const auto n = get<std::uint32_t>();
    if (n > (1u << 24)) throw InputError(path_.string() + ": corrupt string length");
    std::string s(n, '\0');
    bytes(s.data(), n);
    return s;
  }

  /// Reads the magic tag and version; throws InputError on mismatch.
  void expect_header(const char (&magic)[9], std::uint32_t version) {
    char tag[8];
    in_.read(tag, 8);
    if (in_.gcount() != 8 || std::memcmp(tag, magic, 8) != 0) {
      throw InputError(path_.string() + ": bad magic header (not a " +
                       std::string(magic, 8) + " file)");
    }
    const auto v = get<std::uint32_t>();
    if (v != version) {
      throw InputError(path_.string() + ": unsupported format version " + std::to_string(v) +
                       " (expected " + std::to_string(version) + ")");
    }
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
};

}  // namespace hawe::detail
