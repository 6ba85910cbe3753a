#include "flowids/flow_schema.hpp"

#include <unordered_map>

namespace flowids {

const std::array<std::string_view, kFlowColumnCount>& flow_column_names() {
    static const std::array<std::string_view, kFlowColumnCount> names = {
        "sAddress",      "rAddress",      "protocol",      "start",
        "end",           "startOffset",   "endOffset",     "duration",
        "sPackets",      "rPackets",      "sBytesMax",     "rBytesMax",
        "sBytesMin",     "rBytesMin",     "sBytesAvg",     "rBytesAvg",
        "sLoad",         "rLoad",         "sPayloadMax",   "rPayloadMax",
        "sPayloadMin",   "rPayloadMin",   "sPayloadAvg",   "rPayloadAvg",
        "sInterPacket",  "rInterPacket",  "sttl",          "rttl",
        "sAckDelayMax",  "rAckDelayMax",  "sAckDelayMin",  "rAckDelayMin",
        "sAckDelayAvg",  "rAckDelayAvg",  "sAckRate",      "rAckRate",
        "sFinRate",      "rFinRate",      "sPshRate",      "rPshRate",
        "sRstRate",      "rRstRate",      "sUrgRate",      "rUrgRate",
        "sSynRate",      "rSynRate",      "sWinTCP",       "rWinTCP",
        "sFragmentRate", "rFragmentRate", "IT-B-Label",    "IT-M-Label",
        "NST-B-Label",   "NST-M-Label",
    };
    return names;
}

std::optional<std::size_t> flow_column_index(std::string_view name) {
    static const std::unordered_map<std::string_view, std::size_t> lookup = [] {
        std::unordered_map<std::string_view, std::size_t> map;
        const auto& names = flow_column_names();
        for (std::size_t i = 0; i < names.size(); ++i) map.emplace(names[i], i);
        // aliases seen in externally produced flow files
        static const std::pair<std::string_view, std::string_view> aliases[] = {
            {"sMaxAckDelay", "sAckDelayMax"}, {"rMaxAckDelay", "rAckDelayMax"},
            {"sMinAckDelay", "sAckDelayMin"}, {"rMinAckDelay", "rAckDelayMin"},
            {"sAvgAckDelay", "sAckDelayAvg"}, {"rAvgAckDelay", "rAckDelayAvg"},
            {"sInterpacket", "sInterPacket"}, {"rInterpacket", "rInterPacket"},
            {"Protocol", "protocol"},         {"sWinTcp", "sWinTCP"},
            {"rWinTcp", "rWinTCP"},
        };
        for (const auto& [alias, canonical] : aliases) map.emplace(alias, map.at(canonical));
        return map;
    }();
    const auto it = lookup.find(name);
    if (it == lookup.end()) return std::nullopt;
    return it->second;
}

bool flow_column_is_integer(std::size_t index) {
    switch (index) {
        case 8:   // sPackets
        case 9:   // rPackets
        case 10:  // sBytesMax
        case 11:  // rBytesMax
        case 12:  // sBytesMin
        case 13:  // rBytesMin
        case 18:  // sPayloadMax
        case 19:  // rPayloadMax
        case 20:  // sPayloadMin
        case 21:  // rPayloadMin
            return true;
        default:
            return false;
    }
}

const std::vector<std::size_t>& cleaned_feature_columns() {
    static const std::vector<std::size_t> columns = [] {
        std::vector<std::size_t> cols;
        cols.push_back(2);  // protocol, ordinal-encoded downstream
        for (std::size_t i = 7; i < kFirstLabelColumn; ++i) cols.push_back(i);
        return cols;
    }();
    return columns;
}

std::vector<std::pair<std::string, std::string>> dual_feature_pairs(
    const std::vector<std::string>& names) {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& name : names) {
        if (name.size() < 2 || name[0] != 's') continue;
        const std::string counterpart = "r" + name.substr(1);
        for (const auto& other : names) {
            if (other == counterpart) {
                pairs.emplace_back(name, counterpart);
                break;
            }
        }
    }
    return pairs;
}

}  // namespace flowids
