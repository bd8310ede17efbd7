#include "manifest.hpp"

#include <boost/crc.hpp>

#include <CLI11.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace hawe::cli {

std::uint32_t file_crc32(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  boost::crc_32_type crc;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    crc.process_bytes(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return crc.checksum();
}

Manifest::Manifest(std::string command) {
  entries_.emplace_back("command", std::move(command));
  entries_.emplace_back("version", "0.1.0");
}

void Manifest::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

void Manifest::add_options(const CLI::App& sub) {
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt == sub.get_help_ptr() || opt->get_lnames().empty()) continue;
    const std::string key = "config." + opt->get_lnames().front();
    std::string value;
    if (opt->get_expected_min() == 0) {
      bool on = false;
      if (opt->count() > 0) {
        on = opt->as<bool>();
      } else {
        const std::string d = opt->get_default_str();
        on = d == "true" || d == "1";
      }
      value = on ? "true" : "false";
    } else if (opt->count() > 0) {
      for (const auto& r : opt->results()) {
        if (!value.empty()) value += ',';
        value += r;
      }
    } else {
      value = opt->get_default_str();
    }
    set(key, value);
  }
}

void Manifest::add_artifact(const std::string& name, const std::filesystem::path& path) {
  char crc[16];
  std::snprintf(crc, sizeof crc, "%08x", file_crc32(path));
  set("artifact." + name + ".path", path.string());
  set("artifact." + name + ".bytes", std::to_string(std::filesystem::file_size(path)));
  set("artifact." + name + ".crc32", crc);
}

void Manifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  for (const auto& [k, v] : entries_) out << k << '=' << v << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace hawe::cli
