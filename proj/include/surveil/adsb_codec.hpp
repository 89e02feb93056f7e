#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace surveil {

/// 112-bit extended squitter data block: DF(5) | CA/CF(3) | AA(24) | ME(56) | PI(24).
struct AdsbFrame {
    std::uint8_t downlink_format = 17;
    std::uint8_t capability = 0;  // CA when DF=17, CF when DF=18
    std::uint32_t icao_address = 0;
    std::uint64_t message = 0;    // ME, opaque 56 bits
    std::uint32_t parity = 0;

    bool is_code_format() const { return downlink_format == 18; }
    friend bool operator==(const AdsbFrame&, const AdsbFrame&) = default;
};

using FrameBytes = std::array<std::uint8_t, 14>;

// Mode S generator polynomial x^24 + x^23 + ... + x^10 + x^3 + 1 (0x1FFF409).
inline constexpr std::uint32_t kModeSPolynomial = 0xFFF409;

// Optional byte written in front of raw frames: the first eight half-microsecond chips
// of the Mode S preamble, 1010 0001.
inline constexpr std::uint8_t kPreambleByte = 0xA1;

// CRC-24 remainder of `bytes` (MSB-first) under the Mode S polynomial.
std::uint32_t crc24(std::span<const std::uint8_t> bytes);

// Parity is recomputed; the input parity field is ignored.
FrameBytes encode_frame(const AdsbFrame& frame);
AdsbFrame decode_frame(std::span<const std::uint8_t> bytes);

// One frame as 28 uppercase hex digits, optionally prefixed with the preamble byte.
std::string frame_to_hex(const FrameBytes& bytes, bool with_preamble = false);
// Accepts 28 or 30 hex digits (the latter must start with the preamble byte).
FrameBytes frame_from_hex(std::string_view hex);

/// SBS "MSG,3" airborne position message.
struct PositionReport {
    std::int64_t session_id = 0;
    std::int64_t aircraft_id = 0;
    std::uint32_t hex_ident = 0;  // 24-bit Mode S address
    std::int64_t flight_id = 0;
    std::string generated_date;
    std::string generated_time;
    std::string logged_date;
    std::string logged_time;
    std::int64_t altitude = 0;    // feet
    double latitude = 0.0;
    double longitude = 0.0;

    friend bool operator==(const PositionReport&, const PositionReport&) = default;
};

inline constexpr std::size_t kSbsFieldCount = 22;

std::string encode_sbs(const PositionReport& report);
PositionReport decode_sbs(std::string_view line);

}  // namespace surveil
