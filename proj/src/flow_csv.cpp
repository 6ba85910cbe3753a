#include "flowids/flow_csv.hpp"

#include <cmath>

#include "flowids/csv.hpp"
#include "flowids/flow_schema.hpp"
#include "flowids/io_util.hpp"

namespace flowids {

std::string flow_csv_header() {
    std::vector<std::string> names;
    names.reserve(kFlowColumnCount);
    for (auto name : flow_column_names()) names.emplace_back(name);
    return csv_join(names);
}

std::string flow_csv_row(const FlowRecord& record) {
    std::vector<std::string> cells;
    cells.reserve(kFlowColumnCount);
    cells.push_back(record.s_address);
    cells.push_back(record.r_address);
    cells.push_back(record.protocol);
    for (std::size_t col = kFirstGeneralColumn; col < kFirstLabelColumn; ++col) {
        const bool tcp_cell = col >= kFirstTcpColumn;
        if (tcp_cell && !record.has_tcp) {
            cells.emplace_back();
            continue;
        }
        const double value = record.numeric_cell(col);
        cells.push_back(flow_column_is_integer(col)
                            ? format_int(static_cast<long long>(std::llround(value)))
                            : format_float6(value));
    }
    if (record.labeled) {
        cells.push_back(format_int(record.it_b));
        cells.push_back(record.it_m);
        cells.push_back(format_int(record.nst_b));
        cells.push_back(record.nst_m);
    } else {
        cells.emplace_back();
        cells.emplace_back();
        cells.emplace_back();
        cells.emplace_back();
    }
    return csv_join(cells);
}

std::uint64_t write_flow_csv(std::span<const FlowRecord> flows, const std::string& path) {
    std::string out = flow_csv_header();
    out.push_back('\n');
    for (const FlowRecord& record : flows) {
        out += flow_csv_row(record);
        out.push_back('\n');
    }
    write_file_atomic(path, out);
    return flows.size();
}

namespace {

void assign_numeric(FlowRecord& record, std::size_t column, double value) {
    switch (column) {
        case 3: record.start = value; break;
        case 4: record.end = value; break;
        case 5: record.start_offset = value; break;
        case 6: record.end_offset = value; break;
        case 7: record.duration = value; break;
        case 8: record.s_packets = static_cast<std::int64_t>(value); break;
        case 9: record.r_packets = static_cast<std::int64_t>(value); break;
        case 10: record.s_bytes_max = static_cast<std::int64_t>(value); break;
        case 11: record.r_bytes_max = static_cast<std::int64_t>(value); break;
        case 12: record.s_bytes_min = static_cast<std::int64_t>(value); break;
        case 13: record.r_bytes_min = static_cast<std::int64_t>(value); break;
        case 14: record.s_bytes_avg = value; break;
        case 15: record.r_bytes_avg = value; break;
        case 16: record.s_load = value; break;
        case 17: record.r_load = value; break;
        case 18: record.s_payload_max = static_cast<std::int64_t>(value); break;
        case 19: record.r_payload_max = static_cast<std::int64_t>(value); break;
        case 20: record.s_payload_min = static_cast<std::int64_t>(value); break;
        case 21: record.r_payload_min = static_cast<std::int64_t>(value); break;
        case 22: record.s_payload_avg = value; break;
        case 23: record.r_payload_avg = value; break;
        case 24: record.s_inter_packet = value; break;
        case 25: record.r_inter_packet = value; break;
        case 26: record.s_ttl = value; break;
        case 27: record.r_ttl = value; break;
        case 28: record.s_ack_delay_max = value; break;
        case 29: record.r_ack_delay_max = value; break;
        case 30: record.s_ack_delay_min = value; break;
        case 31: record.r_ack_delay_min = value; break;
        case 32: record.s_ack_delay_avg = value; break;
        case 33: record.r_ack_delay_avg = value; break;
        case 34: record.s_ack_rate = value; break;
        case 35: record.r_ack_rate = value; break;
        case 36: record.s_fin_rate = value; break;
        case 37: record.r_fin_rate = value; break;
        case 38: record.s_psh_rate = value; break;
        case 39: record.r_psh_rate = value; break;
        case 40: record.s_rst_rate = value; break;
        case 41: record.r_rst_rate = value; break;
        case 42: record.s_urg_rate = value; break;
        case 43: record.r_urg_rate = value; break;
        case 44: record.s_syn_rate = value; break;
        case 45: record.r_syn_rate = value; break;
        case 46: record.s_win_tcp = value; break;
        case 47: record.r_win_tcp = value; break;
        case 48: record.s_fragment_rate = value; break;
        case 49: record.r_fragment_rate = value; break;
        default: break;
    }
}

}  // namespace

FlowCsvReadResult parse_flow_csv(const std::string& content, const std::string& origin) {
    FlowCsvReadResult result;
    const auto lines = split_lines(content);
    if (lines.empty()) throw FlowCsvError(origin + ": empty file, expected a flow CSV header");

    const auto header = csv_split(lines[0]);
    std::vector<std::size_t> position_to_column(header.size());
    std::vector<bool> seen(kFlowColumnCount, false);
    for (std::size_t i = 0; i < header.size(); ++i) {
        const auto column = flow_column_index(header[i]);
        if (!column)
            throw FlowCsvError(origin + ": unknown column '" + header[i] + "' in flow CSV header");
        position_to_column[i] = *column;
        seen[*column] = true;
    }
    for (std::size_t c = 0; c < kFirstLabelColumn; ++c) {
        if (!seen[c])
            throw FlowCsvError(origin + ": flow CSV header is missing column '" +
                               std::string(flow_column_names()[c]) + "'");
    }

    for (std::size_t line_no = 1; line_no < lines.size(); ++line_no) {
        if (lines[line_no].empty()) continue;
        const auto cells = csv_split(lines[line_no]);
        if (cells.size() != header.size()) {
            result.warnings.push_back(origin + ": row " + std::to_string(line_no + 1) + " has " +
                                      std::to_string(cells.size()) + " cells, expected " +
                                      std::to_string(header.size()) + "; row skipped");
            continue;
        }
        FlowRecord record;
        bool any_tcp_cell = false;
        bool any_label_cell = false;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const std::size_t column = position_to_column[i];
            const std::string& cell = cells[i];
            if (column == 0) {
                record.s_address = cell;
            } else if (column == 1) {
                record.r_address = cell;
            } else if (column == 2) {
                record.protocol = cell;
            } else if (column < kFirstLabelColumn) {
                if (cell.empty()) continue;
                if (column >= kFirstTcpColumn) any_tcp_cell = true;
                const auto value = parse_double(cell);
                if (!value) {
                    result.warnings.push_back(origin + ": row " + std::to_string(line_no + 1) +
                                              ": cannot parse '" + cell + "' in column '" +
                                              std::string(flow_column_names()[column]) +
                                              "', cell treated as 0");
                    continue;
                }
                assign_numeric(record, column, *value);
            } else {
                if (!cell.empty()) any_label_cell = true;
                switch (column) {
                    case 50: record.it_b = cell.empty() ? 0 : static_cast<int>(parse_double(cell).value_or(0.0)); break;
                    case 51: record.it_m = cell.empty() ? "normal" : cell; break;
                    case 52: record.nst_b = cell.empty() ? 0 : static_cast<int>(parse_double(cell).value_or(0.0)); break;
                    case 53: record.nst_m = cell.empty() ? "normal" : cell; break;
                    default: break;
                }
            }
        }
        record.has_tcp = any_tcp_cell;
        record.labeled = any_label_cell;
        result.flows.push_back(std::move(record));
    }
    return result;
}

FlowCsvReadResult read_flow_csv(const std::string& path) {
    return parse_flow_csv(read_text_file(path), path);
}

}  // namespace flowids
