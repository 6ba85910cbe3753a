#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace flowids {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_text_file(const std::string& path);
std::vector<std::uint8_t> read_binary_file(const std::string& path);

// Writes to a temp file in the same directory, then renames over the target.
void write_file_atomic(const std::string& path, std::string_view content);
void write_file_atomic(const std::string& path, const std::vector<std::uint8_t>& content);

bool file_exists(const std::string& path);

// Lines split on '\n'; a trailing '\r' is stripped. Final empty line dropped.
std::vector<std::string> split_lines(std::string_view text);

}  // namespace flowids
