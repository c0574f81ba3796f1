#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace genem::util {

// Throws FormatError when the file is missing or unreadable.
std::string read_file(const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);

// Write to a sibling temp file, fsync, then rename over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

}  // namespace genem::util
