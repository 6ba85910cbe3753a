#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "flowids/flow.hpp"

namespace flowids {

struct FlowCsvError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string flow_csv_header();
std::string flow_csv_row(const FlowRecord& record);

// Writes header + one row per flow (atomically); returns the row count.
// Non-TCP rows leave all 24 TCP cells empty; label cells stay empty until
// labeling. Floats carry six decimals, trailing zeros trimmed.
std::uint64_t write_flow_csv(std::span<const FlowRecord> flows, const std::string& path);

struct FlowCsvReadResult {
    std::vector<FlowRecord> flows;
    std::vector<std::string> warnings;
};

// Parses a flow CSV, accepting known header aliases (sMaxAckDelay, Protocol,
// ...). Throws FlowCsvError naming any unknown or missing column.
FlowCsvReadResult read_flow_csv(const std::string& path);
FlowCsvReadResult parse_flow_csv(const std::string& content, const std::string& origin);

}  // namespace flowids
