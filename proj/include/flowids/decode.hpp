#pragma once

#include <cstdint>
#include <span>

#include "flowids/packet.hpp"

namespace flowids {

struct DecodeStats {
    std::uint64_t malformed = 0;  // frames shorter than their declared headers
};

// Decodes one Ethernet frame. Total: never throws on bad input. Frames that
// cannot be parsed against their declared headers degrade to NonProtocol and
// bump stats.malformed. A single 802.1Q VLAN tag is unwrapped; LLC frames
// (length field <= 1500), IPv6 and unknown EtherTypes come back NonProtocol.
DecodedPacket decode_packet(std::span<const std::uint8_t> raw, double timestamp,
                            DecodeStats& stats);

}  // namespace flowids
