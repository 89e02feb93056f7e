#include "surveil/onboard_mec.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "surveil/error.hpp"
#include "surveil/units.hpp"

namespace surveil {

namespace {

constexpr double kMetresPerFoot = 0.3048;

double raw_minkowski(Vec3 d, double p) {
    const double ax = std::abs(d.x), ay = std::abs(d.y), az = std::abs(d.z);
    if (std::isinf(p)) return std::max({ax, ay, az});
    if (p == 1.0) return ax + ay + az;
    if (p == 2.0) return std::sqrt(ax * ax + ay * ay + az * az);
    // Scale by the largest component so large p cannot overflow.
    const double top = std::max({ax, ay, az});
    if (top == 0.0) return 0.0;
    const double sum = std::pow(ax / top, p) + std::pow(ay / top, p) + std::pow(az / top, p);
    return top * std::pow(sum, 1.0 / p);
}

// Degrees and feet to local metres around the pair's mean latitude.
Vec3 metric_delta(const PositionVector& a, const PositionVector& b) {
    const double rad = kPi / 180.0;
    const double lat0 = 0.5 * (a.lat + b.lat) * rad;
    return {(a.lon - b.lon) * rad * kEarthRadius * std::cos(lat0), (a.lat - b.lat) * rad * kEarthRadius,
            (a.alt - b.alt) * kMetresPerFoot};
}

double window_distance(const PositionVector& a, const PositionVector& b, const MecConfig& config,
                       double order) {
    if (config.metric_normalization) return raw_minkowski(metric_delta(a, b), order);
    return minkowski_distance(a, b, order);
}

void require_finite(const PositionVector& v) {
    if (!std::isfinite(v.lon) || !std::isfinite(v.lat) || !std::isfinite(v.alt))
        throw DomainError("position components must be finite");
}

}  // namespace

const char* to_string(Action action) {
    switch (action) {
        case Action::relay: return "relay";
        case Action::abandon: return "abandon";
        case Action::relay_with_supplement: return "relay_with_supplement";
    }
    return "?";
}

const char* to_string(SupplementMethod method) {
    switch (method) {
        case SupplementMethod::none: return "none";
        case SupplementMethod::sphere: return "sphere";
        case SupplementMethod::linear: return "linear";
    }
    return "?";
}

double minkowski_distance(const PositionVector& a, const PositionVector& b, double p) {
    if (!(p >= 1.0)) throw DomainError("Minkowski order must be >= 1");
    return raw_minkowski(a.coords() - b.coords(), p);
}

MinkowskiWindow warm_up(std::size_t capacity, double order, std::span<const PositionVector> reports) {
    if (capacity < 2) throw ConfigError("mec: window size N must be >= 2");
    if (!(order >= 1.0)) throw ConfigError("mec: Minkowski order p must be >= 1");
    if (reports.size() < capacity + 1)
        throw StateError("warm-up needs N+1 = " + std::to_string(capacity + 1) + " reports, got " +
                         std::to_string(reports.size()));
    MinkowskiWindow w;
    w.capacity = capacity;
    w.order = order;
    for (std::size_t i = 0; i <= capacity; ++i) {
        require_finite(reports[i]);
        if (i > 0) {
            if (reports[i].sequence <= reports[i - 1].sequence)
                throw StateError("report sequence numbers must increase");
            w.distances.push_back(minkowski_distance(reports[i], reports[i - 1], order));
        }
        w.history.push_back(reports[i]);
        if (w.history.size() > 4) w.history.pop_front();
    }
    w.last_sequence = reports[capacity].sequence;
    return w;
}

ProcessDecision process_packet(MinkowskiWindow& window, const PositionVector& incoming,
                               const MecConfig& config) {
    if (!window.warmed() || window.history.empty()) throw StateError("window is not warmed up");
    if (incoming.sequence <= window.last_sequence)
        throw StateError("report sequence numbers must increase");
    require_finite(incoming);

    const PositionVector previous = window.history.back();
    ProcessDecision d;
    d.distance = window_distance(incoming, previous, config, window.order);
    auto& m = window.distances;
    const auto lowest = std::min_element(m.begin(), m.end());
    const auto highest = std::max_element(m.begin(), m.end());
    window.last_sequence = incoming.sequence;

    if (d.distance < *lowest) {
        *highest = d.distance;
        d.action = Action::abandon;
        return d;
    }
    if (d.distance >= *highest) {
        *lowest = d.distance;
        const std::vector<PositionVector> history(window.history.begin(), window.history.end());
        const auto s = supplement_point(history, incoming, previous, config.degeneracy_threshold);
        d.action = Action::relay_with_supplement;
        d.supplement = s.position;
        d.fallback_used = s.method;
    } else {
        d.action = Action::relay;
    }
    window.history.push_back(incoming);
    if (window.history.size() > 4) window.history.pop_front();
    return d;
}

Sphere circumsphere(Vec3 p1, Vec3 p2, Vec3 p3, Vec3 p4, double threshold) {
    using LD = long double;
    const std::array<Vec3, 4> pts{p1, p2, p3, p4};
    double scale = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) scale = std::max(scale, distance(pts[i], pts[j]));

    // Rows chi_i = p_i - p4, right-hand side beta_i = |chi_i|^2 / 2; p4 is the local origin.
    LD a[3][3], beta[3];
    for (int i = 0; i < 3; ++i) {
        const LD dx = LD(pts[i].x) - p4.x, dy = LD(pts[i].y) - p4.y, dz = LD(pts[i].z) - p4.z;
        a[i][0] = dx;
        a[i][1] = dy;
        a[i][2] = dz;
        beta[i] = (dx * dx + dy * dy + dz * dz) / 2;
    }
    auto det = [](LD c0x, LD c0y, LD c0z, LD c1x, LD c1y, LD c1z, LD c2x, LD c2y, LD c2z) {
        return c0x * (c1y * c2z - c1z * c2y) - c1x * (c0y * c2z - c0z * c2y) +
               c2x * (c0y * c1z - c0z * c1y);
    };
    // Columns of the system matrix.
    const LD x = det(a[0][0], a[1][0], a[2][0], a[0][1], a[1][1], a[2][1], a[0][2], a[1][2], a[2][2]);
    if (!(scale > 0) || std::abs(static_cast<double>(x)) <= threshold * scale * scale * scale)
        throw DegenerateGeometry("circumsphere points are coplanar");
    const LD cx = det(beta[0], beta[1], beta[2], a[0][1], a[1][1], a[2][1], a[0][2], a[1][2], a[2][2]) / x;
    const LD cy = det(a[0][0], a[1][0], a[2][0], beta[0], beta[1], beta[2], a[0][2], a[1][2], a[2][2]) / x;
    const LD cz = det(a[0][0], a[1][0], a[2][0], a[0][1], a[1][1], a[2][1], beta[0], beta[1], beta[2]) / x;
    Sphere s;
    s.center = {static_cast<double>(cx + p4.x), static_cast<double>(cy + p4.y),
                static_cast<double>(cz + p4.z)};
    s.radius = static_cast<double>(std::sqrt(cx * cx + cy * cy + cz * cz));
    return s;
}

Vec3 sphere_supplement(const Sphere& sphere, Vec3 k, Vec3 k_minus_1) {
    const Vec3 mid = 0.5 * (k + k_minus_1);
    const Vec3 v = mid - sphere.center;
    const double len = norm(v);
    if (!(len > 1e-12 * std::max(sphere.radius, norm(sphere.center))))
        throw DegenerateGeometry("segment midpoint coincides with the sphere centre");
    return sphere.center + (sphere.radius / len) * v;
}

PositionVector linear_supplement(const PositionVector& k, const PositionVector& k_minus_1) {
    PositionVector out = k_minus_1;
    out.lon = 0.5 * (k.lon + k_minus_1.lon);
    out.lat = 0.5 * (k.lat + k_minus_1.lat);
    out.alt = 0.5 * (k.alt + k_minus_1.alt);
    return out;
}

Supplement supplement_point(std::span<const PositionVector> history, const PositionVector& k,
                            const PositionVector& k_minus_1, double threshold) {
    Supplement s{linear_supplement(k, k_minus_1), SupplementMethod::linear};
    if (history.size() < 3) return s;
    const std::size_t n = history.size();
    try {
        const Sphere sphere = circumsphere(k.coords(), history[n - 1].coords(),
                                           history[n - 2].coords(), history[n - 3].coords(), threshold);
        const Vec3 p = sphere_supplement(sphere, k.coords(), k_minus_1.coords());
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) return s;
        s.position.lon = p.x;
        s.position.lat = p.y;
        s.position.alt = p.z;
        s.method = SupplementMethod::sphere;
    } catch (const DegenerateGeometry&) {
    }
    return s;
}

double TrajectoryStats::abandoned_fraction() const {
    return input_count ? static_cast<double>(abandoned_count) / static_cast<double>(input_count) : 0.0;
}

double TrajectoryStats::supplemented_fraction() const {
    return relayed_count ? static_cast<double>(supplemented_count) / static_cast<double>(relayed_count)
                         : 0.0;
}

std::string TrajectoryStats::to_key_value() const {
    std::ostringstream out;
    out << "input_count=" << input_count << '\n'
        << "warmup_count=" << warmup_count << '\n'
        << "abandoned_count=" << abandoned_count << '\n'
        << "relayed_count=" << relayed_count << '\n'
        << "supplemented_count=" << supplemented_count << '\n'
        << "sphere_supplements=" << sphere_supplements << '\n'
        << "linear_supplements=" << linear_supplements << '\n'
        << "abandoned_fraction=" << abandoned_fraction() << '\n'
        << "supplemented_fraction=" << supplemented_fraction() << '\n';
    return out.str();
}

TrajectoryResult run_trajectory(std::span<const PositionVector> reports, const MecConfig& config) {
    if (reports.size() < config.window + 2)
        throw ConfigError("trajectory needs at least N+2 = " + std::to_string(config.window + 2) +
                          " reports, got " + std::to_string(reports.size()));
    for (const auto& r : reports)
        if (r.source_id != reports.front().source_id)
            throw ConfigError("trajectory reports must come from a single source");

    TrajectoryResult result;
    auto& stats = result.stats;
    stats.input_count = reports.size();
    stats.warmup_count = config.window + 1;

    MinkowskiWindow window = warm_up(config.window, config.order, reports);
    if (config.metric_normalization) {
        for (std::size_t i = 1; i <= config.window; ++i)
            window.distances[i - 1] = window_distance(reports[i], reports[i - 1], config, config.order);
    }
    for (std::size_t i = 0; i < stats.warmup_count; ++i)
        result.optimized.push_back({reports[i], false, SupplementMethod::none, i});

    for (std::size_t i = stats.warmup_count; i < reports.size(); ++i) {
        const auto d = process_packet(window, reports[i], config);
        if (d.action == Action::abandon) {
            ++stats.abandoned_count;
            continue;
        }
        ++stats.relayed_count;
        if (d.supplement) {
            ++stats.supplemented_count;
            ++(d.fallback_used == SupplementMethod::sphere ? stats.sphere_supplements
                                                           : stats.linear_supplements);
            result.optimized.push_back({*d.supplement, true, d.fallback_used, i});
        }
        result.optimized.push_back({reports[i], false, SupplementMethod::none, i});
    }
    return result;
}

}  // namespace surveil
