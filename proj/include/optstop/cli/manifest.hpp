#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace optstop::cli {

struct RunManifest {
  std::string command;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  std::optional<std::uint64_t> master_seed;
  std::string tool_version;
  double wall_clock_seconds = 0.0;
  std::string output_digest;  // "sha256:<hex>" of the output bytes

  nlohmann::ordered_json to_json() const;
  static RunManifest from_json(const nlohmann::ordered_json& j);
};

std::string sha256_hex(std::string_view bytes);

/// Writes `contents` to a temporary sibling of `path`, then renames it into
/// place, so a failed run never leaves a partial file behind.
void write_file_atomically(const std::filesystem::path& path, std::string_view contents);

/// `<out>.manifest.json`
std::filesystem::path manifest_path_for(const std::filesystem::path& out);

}  // namespace optstop::cli
