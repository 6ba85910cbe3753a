#pragma once

// Attack log CSV: `attack,startStamp,endStamp,attackerIP,attackerMAC,description`.

#include <string>
#include <vector>

#include "flowids/packet.hpp"

namespace flowids {

struct AttackLogEntry {
    std::string attack;
    double start_ts = 0.0;
    double end_ts = 0.0;
    std::string attacker_ip;   // comparator-normalized (re-rendered dotted quad)
    std::string attacker_mac;  // comparator-normalized (lowercase hex)
    std::string extra;
    std::size_t file_order = 0;
};

struct AttackLogParseResult {
    std::vector<AttackLogEntry> entries;  // sorted by start_ts, stable on ties
    std::vector<std::string> errors;      // rejected rows, each naming its row number
    std::vector<std::string> warnings;    // overlapping entries and the like
};

AttackLogParseResult parse_attack_log(const std::string& path);
AttackLogParseResult parse_attack_log_text(const std::string& content, const std::string& origin);

std::string attack_log_header();
std::string attack_log_row(const AttackLogEntry& entry);

}  // namespace flowids
