#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace surveil {

// Invalid or inconsistent configuration values.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Link or point geometry that cannot be solved (beyond the horizon, coplanar points, ...).
struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown by the circumsphere solver when the four points are (numerically) coplanar.
struct DegenerateGeometry : GeometryError {
    using GeometryError::GeometryError;
};

// A numerical engine missed its tolerance. Carries the best estimate it reached.
struct NumericalError : std::runtime_error {
    NumericalError(const std::string& what, double estimate, double error_bound)
        : std::runtime_error(what), estimate(estimate), error_bound(error_bound) {}
    double estimate;
    double error_bound;
};

struct StateError : std::logic_error {
    using std::logic_error::logic_error;
};

struct EncodingError : std::runtime_error {
    EncodingError(const std::string& field, const std::string& what)
        : std::runtime_error(field + ": " + what), field(field) {}
    std::string field;
};

struct FramingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// CRC check failed; `syndrome` is the CRC-24 remainder over all 112 bits.
struct IntegrityError : std::runtime_error {
    IntegrityError(const std::string& what, std::uint32_t syndrome)
        : std::runtime_error(what), syndrome(syndrome) {}
    std::uint32_t syndrome;
};

// SBS line rejected. `field_index` is 1-based, matching the on-wire field numbering.
struct ParseError : std::runtime_error {
    ParseError(std::size_t field_index, const std::string& what)
        : std::runtime_error("field " + std::to_string(field_index) + ": " + what),
          field_index(field_index) {}
    std::size_t field_index;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace surveil
