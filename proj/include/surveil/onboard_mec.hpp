#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "surveil/vec3.hpp"

namespace surveil {

// One position packet as seen by the central UAV: raw (lon deg, lat deg, alt).
struct PositionVector {
    double lon = 0.0;
    double lat = 0.0;
    double alt = 0.0;
    std::uint32_t source_id = 0;
    std::uint64_t sequence = 0;

    Vec3 coords() const { return {lon, lat, alt}; }
};

struct MecConfig {
    std::size_t window = 5;               // N
    double order = 2.0;                   // Minkowski p
    double degeneracy_threshold = 1e-9;   // |X| <= threshold * scale^3 falls back to linear
    bool metric_normalization = false;    // degrees/feet -> local metres before processing
};

// (|dlon|^p + |dlat|^p + |dalt|^p)^(1/p); p may be +inf (max norm).
double minkowski_distance(const PositionVector& a, const PositionVector& b, double p);

struct MinkowskiWindow {
    std::vector<double> distances;
    double order = 2.0;
    std::size_t capacity = 5;
    std::deque<PositionVector> history;  // last accepted reports, at most 4
    std::uint64_t last_sequence = 0;

    bool warmed() const { return capacity >= 2 && distances.size() == capacity; }
};

// Fills the window from the first capacity + 1 reports of `reports`.
MinkowskiWindow warm_up(std::size_t capacity, double order,
                        std::span<const PositionVector> reports);

enum class Action { relay, abandon, relay_with_supplement };
enum class SupplementMethod { none, sphere, linear };

const char* to_string(Action action);
const char* to_string(SupplementMethod method);

struct ProcessDecision {
    Action action = Action::relay;
    std::optional<PositionVector> supplement;
    SupplementMethod fallback_used = SupplementMethod::none;
    double distance = 0.0;
};

ProcessDecision process_packet(MinkowskiWindow& window, const PositionVector& incoming,
                               const MecConfig& config = {});

struct Sphere {
    Vec3 center;
    double radius = 0.0;
};

// Sphere through four points by Cramer's rule. p1 is the newest report (k), p4 the
// oldest (k-3). Throws DegenerateGeometry when |X| <= threshold * scale^3.
Sphere circumsphere(Vec3 p1, Vec3 p2, Vec3 p3, Vec3 p4, double threshold = 1e-9);

// Point where the ray from the centre through the midpoint of (k, k_minus_1) meets the
// sphere, on the midpoint's side. Throws DegenerateGeometry if the midpoint is the centre.
Vec3 sphere_supplement(const Sphere& sphere, Vec3 k, Vec3 k_minus_1);

PositionVector linear_supplement(const PositionVector& k, const PositionVector& k_minus_1);

struct Supplement {
    PositionVector position;
    SupplementMethod method = SupplementMethod::linear;
};

// history = accepted reports before k, oldest first (uses the last three). Falls back to the
// midpoint when fewer than three are available or the sphere is degenerate.
Supplement supplement_point(std::span<const PositionVector> history, const PositionVector& k,
                            const PositionVector& k_minus_1, double threshold = 1e-9);

struct TrajectoryEntry {
    PositionVector position;
    bool synthetic = false;
    SupplementMethod method = SupplementMethod::none;
    // Index of the input report (for synthetic entries, the report it precedes).
    std::size_t input_index = 0;
};

struct TrajectoryStats {
    std::size_t input_count = 0;
    std::size_t warmup_count = 0;
    std::size_t abandoned_count = 0;
    std::size_t relayed_count = 0;
    std::size_t supplemented_count = 0;
    std::size_t sphere_supplements = 0;
    std::size_t linear_supplements = 0;

    double abandoned_fraction() const;
    double supplemented_fraction() const;
    std::string to_key_value() const;
};

struct TrajectoryResult {
    std::vector<TrajectoryEntry> optimized;
    TrajectoryStats stats;
};

// Warm-up on the first N+1 reports (relayed unchanged), then process_packet on the rest.
// Requires at least N+2 reports from a single source.
TrajectoryResult run_trajectory(std::span<const PositionVector> reports,
                                const MecConfig& config = {});

}  // namespace surveil
