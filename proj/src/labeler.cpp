#include "flowids/labeler.hpp"

namespace flowids {

namespace {

bool overlaps(const FlowRecord& flow, const AttackLogEntry& entry) {
    return flow.start <= entry.end_ts && entry.start_ts <= flow.end;
}

bool touches_attacker(const FlowRecord& flow, const AttackLogEntry& entry) {
    if (flow.protocol == "ARP")
        return flow.s_address == entry.attacker_mac || flow.r_address == entry.attacker_mac;
    return flow.s_address == entry.attacker_ip || flow.r_address == entry.attacker_ip;
}

// latest start wins; sorted-by-start input makes that the last candidate,
// and stable sort already put file order first among equal starts
const AttackLogEntry* pick(const std::vector<const AttackLogEntry*>& candidates) {
    const AttackLogEntry* best = nullptr;
    for (const AttackLogEntry* entry : candidates) {
        if (best == nullptr || entry->start_ts > best->start_ts) best = entry;
    }
    return best;
}

}  // namespace

LabelingSummary label_flows(std::vector<FlowRecord>& flows,
                            std::span<const AttackLogEntry> entries) {
    LabelingSummary summary;
    summary.flows = flows.size();

    std::vector<const AttackLogEntry*> it_candidates;
    std::vector<const AttackLogEntry*> nst_candidates;
    for (FlowRecord& flow : flows) {
        it_candidates.clear();
        nst_candidates.clear();
        for (const AttackLogEntry& entry : entries) {
            if (!overlaps(flow, entry)) continue;
            it_candidates.push_back(&entry);
            if (touches_attacker(flow, entry)) nst_candidates.push_back(&entry);
        }

        flow.labeled = true;
        if (const AttackLogEntry* it_entry = pick(it_candidates)) {
            flow.it_b = 1;
            flow.it_m = it_entry->attack;
            ++summary.it_attack_flows;
        } else {
            flow.it_b = 0;
            flow.it_m = "normal";
        }
        if (const AttackLogEntry* nst_entry = pick(nst_candidates)) {
            flow.nst_b = 1;
            flow.nst_m = nst_entry->attack;
            ++summary.nst_attack_flows;
        } else {
            flow.nst_b = 0;
            flow.nst_m = "normal";
        }
        if (it_candidates.size() > 1) ++summary.ambiguous_flows;
    }
    return summary;
}

}  // namespace flowids
