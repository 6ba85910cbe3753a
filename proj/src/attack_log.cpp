#include "flowids/attack_log.hpp"

#include <algorithm>

#include "flowids/csv.hpp"
#include "flowids/io_util.hpp"

namespace flowids {

namespace {

const char* kHeaderFields[6] = {"attack", "startStamp", "endStamp",
                                "attackerIP", "attackerMAC", "description"};

std::string normalize_ip(const std::string& text) {
    const auto parsed = Ipv4Addr::parse(text);
    return parsed ? parsed->to_string() : text;
}

std::string normalize_mac(const std::string& text) {
    const auto parsed = MacAddr::parse(text);
    return parsed ? parsed->to_string() : text;
}

}  // namespace

std::string attack_log_header() {
    return "attack,startStamp,endStamp,attackerIP,attackerMAC,description";
}

std::string attack_log_row(const AttackLogEntry& entry) {
    return csv_join({entry.attack, format_float6(entry.start_ts), format_float6(entry.end_ts),
                     entry.attacker_ip, entry.attacker_mac, entry.extra});
}

AttackLogParseResult parse_attack_log_text(const std::string& content, const std::string& origin) {
    AttackLogParseResult result;
    const auto lines = split_lines(content);
    if (lines.empty()) {
        result.errors.push_back(origin + ": empty file, expected an attack log header");
        return result;
    }

    const auto header = csv_split(lines[0]);
    if (header.size() != 6) {
        result.errors.push_back(origin + ": attack log header must have 6 fields, got " +
                                std::to_string(header.size()));
        return result;
    }
    for (int i = 0; i < 6; ++i) {
        if (header[static_cast<std::size_t>(i)] != kHeaderFields[i]) {
            result.errors.push_back(origin + ": attack log header field " + std::to_string(i + 1) +
                                    " is '" + header[static_cast<std::size_t>(i)] +
                                    "', expected '" + kHeaderFields[i] + "'");
            return result;
        }
    }

    for (std::size_t line_no = 1; line_no < lines.size(); ++line_no) {
        if (lines[line_no].empty()) continue;
        const std::string row_name = origin + ": row " + std::to_string(line_no + 1);
        const auto cells = csv_split(lines[line_no]);
        if (cells.size() != 6) {
            result.errors.push_back(row_name + " has " + std::to_string(cells.size()) +
                                    " fields, expected 6; row rejected");
            continue;
        }
        const auto start = parse_double(cells[1]);
        const auto end = parse_double(cells[2]);
        if (!start || !end) {
            result.errors.push_back(row_name + ": unparseable timestamp; row rejected");
            continue;
        }
        if (*end < *start) {
            result.errors.push_back(row_name + ": end " + cells[2] + " precedes start " +
                                    cells[1] + "; row rejected");
            continue;
        }
        AttackLogEntry entry;
        entry.attack = cells[0];
        entry.start_ts = *start;
        entry.end_ts = *end;
        entry.attacker_ip = normalize_ip(cells[3]);
        entry.attacker_mac = normalize_mac(cells[4]);
        entry.extra = cells[5];
        entry.file_order = result.entries.size();
        result.entries.push_back(std::move(entry));
    }

    std::stable_sort(result.entries.begin(), result.entries.end(),
                     [](const AttackLogEntry& a, const AttackLogEntry& b) {
                         return a.start_ts < b.start_ts;
                     });
    for (std::size_t i = 1; i < result.entries.size(); ++i) {
        const auto& prev = result.entries[i - 1];
        const auto& cur = result.entries[i];
        if (cur.start_ts <= prev.end_ts) {
            result.warnings.push_back(origin + ": attack windows overlap: '" + prev.attack +
                                      "' and '" + cur.attack + "'");
        }
    }
    return result;
}

AttackLogParseResult parse_attack_log(const std::string& path) {
    return parse_attack_log_text(read_text_file(path), path);
}

}  // namespace flowids
