#pragma once

// The 54-column flow CSV schema: 3 key columns, 23 general features, 24 TCP
// features, 4 label columns. Column order is the wire contract for every CSV
// this toolkit reads or writes.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace flowids {

inline constexpr std::size_t kFlowColumnCount = 54;

inline constexpr std::size_t kFirstGeneralColumn = 3;    // start
inline constexpr std::size_t kFirstTcpColumn = 26;       // sttl
inline constexpr std::size_t kFirstLabelColumn = 50;     // IT-B-Label
inline constexpr std::size_t kTcpColumnCount = 24;

const std::array<std::string_view, kFlowColumnCount>& flow_column_names();

// Index for a canonical name or a known alias (sMaxAckDelay, sInterpacket,
// Protocol, ...); nullopt for anything unrecognized.
std::optional<std::size_t> flow_column_index(std::string_view name);

bool flow_column_is_integer(std::size_t index);

// Feature columns kept by the cleaning step, in schema order: protocol plus
// everything from duration through rFragmentRate (44 columns).
const std::vector<std::size_t>& cleaned_feature_columns();

// s-/r- dual feature names (sPackets <-> rPackets, ...), over a feature-name list.
std::vector<std::pair<std::string, std::string>> dual_feature_pairs(
    const std::vector<std::string>& names);

}  // namespace flowids
