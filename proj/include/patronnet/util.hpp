#pragma once

#include <filesystem>
#include <string>

namespace patronnet {

inline constexpr const char* kToolName = "patronnet";
inline constexpr const char* kToolVersion = "0.1.0";

std::string read_file_text(const std::filesystem::path& path);

// Writes via a temp file in the same directory followed by a rename, so a
// reader never observes a partially written file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string sha256_hex(const std::string& bytes);

// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double value);

}  // namespace patronnet
