#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tfbench {

// Throws Error("IO_ERROR") when the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it into place, so readers
// never observe a half-written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// One element per line; a trailing newline does not produce an empty last
// line and a trailing '\r' is dropped from each line.
std::vector<std::string> read_lines(const std::filesystem::path& path);
std::vector<std::string> split_lines(std::string_view contents);
void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines);

std::string sha256_hex(std::string_view bytes);

}  // namespace tfbench
