#include <optional>

#include "flowids/csv.hpp"
#include "flowids/io_util.hpp"
#include "flowids/synth.hpp"

namespace flowids {

// Script grammar (TOML subset):
//   key = value                 top level: seed, duration, start_time,
//                               interval, allow_overlap
//   [[endpoint]]                name, ip, mac
//   [[poller]]                  client, server, rate_hz
//   [[phase]]                   type, start, end, intensity
// '#' starts a comment; strings may be "quoted" or bare.

namespace {

std::string strip(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && (text[begin] == ' ' || text[begin] == '\t')) ++begin;
    while (end > begin && (text[end - 1] == ' ' || text[end - 1] == '\t')) --end;
    return std::string(text.substr(begin, end - begin));
}

std::string unquote(const std::string& value) {
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
        return value.substr(1, value.size() - 2);
    return value;
}

double require_number(const std::string& value, int line_no) {
    const auto parsed = parse_double(value);
    if (!parsed)
        throw SynthError("script line " + std::to_string(line_no) + ": '" + value +
                         "' is not a number");
    return *parsed;
}

struct Section {
    std::string name;  // "" for top level
    Endpoint endpoint;
    PollerSpec poller;
    AttackPhase phase;
    bool poller_has_rate = false;
};

}  // namespace

TraceScript parse_trace_script(const std::string& text) {
    TraceScript script;
    bool endpoints_given = false;
    bool pollers_given = false;

    Section section;
    auto flush_section = [&](int line_no) {
        if (section.name == "endpoint") {
            if (section.endpoint.name.empty())
                throw SynthError("script line " + std::to_string(line_no) +
                                 ": endpoint needs a name");
            script.endpoints.push_back(section.endpoint);
            endpoints_given = true;
        } else if (section.name == "poller") {
            if (section.poller.client.empty() || section.poller.server.empty())
                throw SynthError("script line " + std::to_string(line_no) +
                                 ": poller needs client and server");
            script.pollers.push_back(section.poller);
            pollers_given = true;
        } else if (section.name == "phase") {
            if (section.phase.type.empty())
                throw SynthError("script line " + std::to_string(line_no) +
                                 ": phase needs a type");
            script.phases.push_back(section.phase);
        }
        section = Section{};
    };

    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const int line_no = static_cast<int>(i + 1);
        std::string line = lines[i];
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        line = strip(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            flush_section(line_no);
            if (line.rfind("[[", 0) == 0 && line.size() > 4 &&
                line.substr(line.size() - 2) == "]]") {
                section.name = line.substr(2, line.size() - 4);
            } else {
                throw SynthError("script line " + std::to_string(line_no) +
                                 ": expected a [[table]] header, got '" + line + "'");
            }
            if (section.name != "endpoint" && section.name != "poller" &&
                section.name != "phase") {
                throw SynthError("script line " + std::to_string(line_no) + ": unknown table '" +
                                 section.name + "'");
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw SynthError("script line " + std::to_string(line_no) +
                             ": expected 'key = value', got '" + line + "'");
        const std::string key = strip(line.substr(0, eq));
        const std::string value = unquote(strip(line.substr(eq + 1)));

        if (section.name.empty()) {
            if (key == "seed") {
                script.seed = static_cast<std::uint64_t>(require_number(value, line_no));
            } else if (key == "duration") {
                script.duration = require_number(value, line_no);
            } else if (key == "start_time") {
                script.start_time = require_number(value, line_no);
            } else if (key == "interval") {
                script.interval = require_number(value, line_no);
            } else if (key == "allow_overlap") {
                script.allow_overlap = value == "true";
            } else {
                throw SynthError("script line " + std::to_string(line_no) + ": unknown key '" +
                                 key + "'");
            }
        } else if (section.name == "endpoint") {
            if (key == "name") {
                section.endpoint.name = value;
            } else if (key == "ip") {
                const auto ip = Ipv4Addr::parse(value);
                if (!ip)
                    throw SynthError("script line " + std::to_string(line_no) + ": bad ip '" +
                                     value + "'");
                section.endpoint.ip = *ip;
            } else if (key == "mac") {
                const auto mac = MacAddr::parse(value);
                if (!mac)
                    throw SynthError("script line " + std::to_string(line_no) + ": bad mac '" +
                                     value + "'");
                section.endpoint.mac = *mac;
            } else {
                throw SynthError("script line " + std::to_string(line_no) +
                                 ": unknown endpoint key '" + key + "'");
            }
        } else if (section.name == "poller") {
            if (key == "client") {
                section.poller.client = value;
            } else if (key == "server") {
                section.poller.server = value;
            } else if (key == "rate_hz") {
                section.poller.rate_hz = require_number(value, line_no);
                section.poller_has_rate = true;
            } else {
                throw SynthError("script line " + std::to_string(line_no) +
                                 ": unknown poller key '" + key + "'");
            }
        } else if (section.name == "phase") {
            if (key == "type") {
                section.phase.type = value;
            } else if (key == "start") {
                section.phase.start = require_number(value, line_no);
            } else if (key == "end") {
                section.phase.end = require_number(value, line_no);
            } else if (key == "intensity") {
                section.phase.intensity = require_number(value, line_no);
            } else {
                throw SynthError("script line " + std::to_string(line_no) +
                                 ": unknown phase key '" + key + "'");
            }
        }
    }
    flush_section(static_cast<int>(lines.size()));

    if (!endpoints_given) script.endpoints = default_topology();
    if (!pollers_given) script.pollers = default_pollers();
    return script;
}

TraceScript load_trace_script(const std::string& path) {
    try {
        return parse_trace_script(read_text_file(path));
    } catch (const SynthError& e) {
        throw SynthError(path + ": " + e.what());
    }
}

}  // namespace flowids
