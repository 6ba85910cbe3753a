#pragma once

// IT / NST flow labeling.
//
// IT (injection timing): a flow gets an attack's label iff its [start, end]
// overlaps the attack window, boundary touch included.
// NST (network security tools): additionally, one of the flow's addresses
// must be the attacker's (IP for IP flows, MAC for ARP flows).
// A flow overlapping several windows takes the entry with the latest start
// (ties: first in file order) and is counted as ambiguous.

#include <cstdint>
#include <span>
#include <vector>

#include "flowids/attack_log.hpp"
#include "flowids/flow.hpp"

namespace flowids {

struct LabelingSummary {
    std::uint64_t flows = 0;
    std::uint64_t it_attack_flows = 0;
    std::uint64_t nst_attack_flows = 0;
    std::uint64_t ambiguous_flows = 0;  // overlapped more than one window
};

LabelingSummary label_flows(std::vector<FlowRecord>& flows,
                            std::span<const AttackLogEntry> entries);

}  // namespace flowids
