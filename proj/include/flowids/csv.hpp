#pragma once

// Small CSV helpers (RFC 4180 quoting) plus the canonical float rendering
// used in flow CSV files: fixed six decimals with trailing zeros trimmed,
// so write -> parse -> write is byte-stable.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace flowids {

std::string csv_escape(std::string_view field);
std::string csv_join(const std::vector<std::string>& fields);

// Splits one logical CSV record. Handles quoted fields with embedded commas
// and doubled quotes; does not handle embedded newlines (callers read lines).
std::vector<std::string> csv_split(std::string_view line);

std::string format_float6(double value);
std::string format_int(long long value);

std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

}  // namespace flowids
