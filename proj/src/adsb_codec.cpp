#include "surveil/adsb_codec.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <vector>

#include "surveil/error.hpp"

namespace surveil {

namespace {

constexpr std::array<std::uint32_t, 256> make_crc_table() {
    std::array<std::uint32_t, 256> table{};
    for (std::uint32_t byte = 0; byte < 256; ++byte) {
        std::uint32_t reg = byte << 16;
        for (int bit = 0; bit < 8; ++bit) {
            reg = (reg & 0x800000) ? ((reg << 1) ^ kModeSPolynomial) : (reg << 1);
        }
        table[byte] = reg & 0xFFFFFF;
    }
    return table;
}

constexpr auto kCrcTable = make_crc_table();

void require_width(std::uint64_t value, int bits, const char* field) {
    if (value >> bits) throw EncodingError(field, "value exceeds " + std::to_string(bits) + " bits");
}

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

std::uint32_t crc24(std::span<const std::uint8_t> bytes) {
    std::uint32_t reg = 0;
    for (std::uint8_t b : bytes) {
        reg = ((reg << 8) ^ kCrcTable[((reg >> 16) ^ b) & 0xFF]) & 0xFFFFFF;
    }
    return reg;
}

FrameBytes encode_frame(const AdsbFrame& frame) {
    if (frame.downlink_format != 17 && frame.downlink_format != 18)
        throw EncodingError("downlink_format", "only DF 17 and 18 are extended squitter");
    require_width(frame.capability, 3, "capability");
    require_width(frame.icao_address, 24, "icao_address");
    require_width(frame.message, 56, "message");

    FrameBytes out{};
    out[0] = static_cast<std::uint8_t>((frame.downlink_format << 3) | frame.capability);
    out[1] = static_cast<std::uint8_t>(frame.icao_address >> 16);
    out[2] = static_cast<std::uint8_t>(frame.icao_address >> 8);
    out[3] = static_cast<std::uint8_t>(frame.icao_address);
    for (int i = 0; i < 7; ++i) out[4 + i] = static_cast<std::uint8_t>(frame.message >> (48 - 8 * i));
    const std::uint32_t parity = crc24(std::span(out).first(11));
    out[11] = static_cast<std::uint8_t>(parity >> 16);
    out[12] = static_cast<std::uint8_t>(parity >> 8);
    out[13] = static_cast<std::uint8_t>(parity);
    return out;
}

AdsbFrame decode_frame(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != 14)
        throw FramingError("extended squitter needs 14 octets, got " + std::to_string(bytes.size()));
    // Remainder over the whole block is zero for an intact frame.
    const std::uint32_t syndrome = crc24(bytes);
    if (syndrome != 0) throw IntegrityError("CRC-24 mismatch", syndrome);

    AdsbFrame f;
    f.downlink_format = static_cast<std::uint8_t>(bytes[0] >> 3);
    f.capability = static_cast<std::uint8_t>(bytes[0] & 0x7);
    if (f.downlink_format != 17 && f.downlink_format != 18)
        throw FramingError("downlink format " + std::to_string(f.downlink_format) +
                           " is not an extended squitter");
    f.icao_address = (std::uint32_t{bytes[1]} << 16) | (std::uint32_t{bytes[2]} << 8) | bytes[3];
    f.message = 0;
    for (int i = 0; i < 7; ++i) f.message = (f.message << 8) | bytes[4 + i];
    f.parity = (std::uint32_t{bytes[11]} << 16) | (std::uint32_t{bytes[12]} << 8) | bytes[13];
    return f;
}

std::string frame_to_hex(const FrameBytes& bytes, bool with_preamble) {
    static constexpr char digits[] = "0123456789ABCDEF";
    std::string out;
    out.reserve(30);
    auto put = [&](std::uint8_t b) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xF]);
    };
    if (with_preamble) put(kPreambleByte);
    for (auto b : bytes) put(b);
    return out;
}

FrameBytes frame_from_hex(std::string_view hex) {
    if (hex.size() != 28 && hex.size() != 30)
        throw FramingError("expected 28 or 30 hex digits, got " + std::to_string(hex.size()));
    std::vector<std::uint8_t> raw;
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        const int hi = hex_value(hex[i]);
        const int lo = hex_value(hex[i + 1]);
        if (hi < 0 || lo < 0) throw FramingError("non-hex digit in frame text");
        raw.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    std::size_t first = 0;
    if (raw.size() == 15) {
        if (raw[0] != kPreambleByte) throw FramingError("unexpected preamble byte");
        first = 1;
    }
    FrameBytes out{};
    std::copy(raw.begin() + static_cast<std::ptrdiff_t>(first), raw.end(), out.begin());
    return out;
}

// ---------------------------------------------------------------------------------------
// SBS

namespace {

// 1-based field positions.
enum Field : std::size_t {
    kMessageType = 1,
    kTransmissionType = 2,
    kSession = 3,
    kAircraft = 4,
    kHexIdent = 5,
    kFlight = 6,
    kGenDate = 7,
    kGenTime = 8,
    kLogDate = 9,
    kLogTime = 10,
    kAltitude = 12,
    kLatitude = 15,
    kLongitude = 16,
};

std::string_view trim(std::string_view s) {
    const auto blank = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && blank(s.front())) s.remove_prefix(1);
    while (!s.empty() && blank(s.back())) s.remove_suffix(1);
    return s;
}

std::int64_t parse_int(std::string_view text, std::size_t index) {
    text = trim(text);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw ParseError(index, "expected an integer, got '" + std::string(text) + "'");
    return v;
}

double parse_real(std::string_view text, std::size_t index) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
        throw ParseError(index, "expected a decimal number, got '" + std::string(text) + "'");
    return v;
}

std::string format_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

bool valid_stamp(std::string_view s) {
    return !s.empty() && s.find(',') == std::string_view::npos &&
           s.find('\n') == std::string_view::npos && s.find('\r') == std::string_view::npos &&
           trim(s).size() == s.size();
}

}  // namespace

std::string encode_sbs(const PositionReport& r) {
    if (!std::isfinite(r.latitude) || r.latitude < -90.0 || r.latitude > 90.0)
        throw EncodingError("latitude", "must lie in [-90, 90]");
    if (!std::isfinite(r.longitude) || r.longitude < -180.0 || r.longitude > 180.0)
        throw EncodingError("longitude", "must lie in [-180, 180]");
    require_width(r.hex_ident, 24, "hex_ident");
    const std::pair<const char*, const std::string*> stamps[] = {
        {"generated_date", &r.generated_date},
        {"generated_time", &r.generated_time},
        {"logged_date", &r.logged_date},
        {"logged_time", &r.logged_time}};
    for (auto [name, value] : stamps)
        if (!valid_stamp(*value)) throw EncodingError(name, "must be non-empty and delimiter-free");

    char hex[8];
    std::snprintf(hex, sizeof hex, "%06X", static_cast<unsigned>(r.hex_ident));
    std::string line = "MSG,3,";
    line += std::to_string(r.session_id) + ',' + std::to_string(r.aircraft_id) + ',' + hex + ',' +
            std::to_string(r.flight_id) + ',';
    line += r.generated_date + ',' + r.generated_time + ',' + r.logged_date + ',' + r.logged_time;
    line += ",," + std::to_string(r.altitude) + ",,,";
    line += format_real(r.latitude) + ',' + format_real(r.longitude);
    line += ",,,0,0,0,0";
    return line;
}

PositionReport decode_sbs(std::string_view line) {
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (fields.size() < kSbsFieldCount)
        throw ParseError(fields.size() + 1, "line has " + std::to_string(fields.size()) +
                                                " fields, expected " + std::to_string(kSbsFieldCount));
    if (fields.size() > kSbsFieldCount)
        throw ParseError(kSbsFieldCount + 1, "line has " + std::to_string(fields.size()) +
                                                 " fields, expected " + std::to_string(kSbsFieldCount));
    auto field = [&](std::size_t index) { return fields[index - 1]; };

    if (trim(field(kMessageType)) != "MSG") throw ParseError(kMessageType, "message type must be MSG");
    if (trim(field(kTransmissionType)) != "3")
        throw ParseError(kTransmissionType, "only transmission type 3 (airborne position) is accepted");

    PositionReport r;
    r.session_id = parse_int(field(kSession), kSession);
    r.aircraft_id = parse_int(field(kAircraft), kAircraft);
    r.flight_id = parse_int(field(kFlight), kFlight);

    const auto hex = trim(field(kHexIdent));
    std::uint32_t ident = 0;
    auto [ptr, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), ident, 16);
    if (hex.empty() || hex.size() > 6 || ec != std::errc{} || ptr != hex.data() + hex.size())
        throw ParseError(kHexIdent, "expected up to six hex digits, got '" + std::string(hex) + "'");
    r.hex_ident = ident;

    const std::pair<std::size_t, std::string*> stamps[] = {{kGenDate, &r.generated_date},
                                                           {kGenTime, &r.generated_time},
                                                           {kLogDate, &r.logged_date},
                                                           {kLogTime, &r.logged_time}};
    for (auto [index, out] : stamps) {
        const auto text = trim(field(index));
        if (text.empty()) throw ParseError(index, "date/time field is empty");
        *out = std::string(text);
    }

    r.altitude = parse_int(field(kAltitude), kAltitude);
    r.latitude = parse_real(field(kLatitude), kLatitude);
    r.longitude = parse_real(field(kLongitude), kLongitude);
    if (r.latitude < -90.0 || r.latitude > 90.0) throw ParseError(kLatitude, "latitude out of range");
    if (r.longitude < -180.0 || r.longitude > 180.0)
        throw ParseError(kLongitude, "longitude out of range");
    return r;
}

}  // namespace surveil
