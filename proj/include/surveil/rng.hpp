#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace surveil {

using Engine = std::mt19937_64;

// Stable 64-bit tag for a named substream (FNV-1a).
constexpr std::uint64_t stream_tag(std::string_view name) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Independent generator for (seed, tag, index). Each Monte Carlo trial or sweep point
// gets its own index, so results do not depend on thread count or scheduling.
inline Engine make_stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index = 0) {
    auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
    auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    std::seed_seq seq{lo(seed), hi(seed), lo(tag), hi(tag), lo(index), hi(index)};
    return Engine(seq);
}

}  // namespace surveil
