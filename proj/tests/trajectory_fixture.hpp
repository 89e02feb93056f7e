#pragma once

// Synthetic single-aircraft position feed with injected near-duplicates and dropouts.

#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "surveil/onboard_mec.hpp"

namespace fixture {

enum class Kinematics {
    accelerating,    // speed and climb rate grow by a constant factor per report
    varying_speed,   // speed and climb rate oscillate +-30 % around their mean
};

struct SyntheticTrack {
    std::vector<surveil::PositionVector> reports;
    std::set<std::size_t> after_gap;  // input indices of the first genuine report after a dropout run
    std::size_t duplicates = 0;
    std::size_t dropped = 0;
    std::size_t base = 0;
};

// Every surviving genuine report is followed by a near-duplicate (jitter `jitter` times the
// mean step per component), so duplicates make up half of the feed. Each genuine report after
// the first four is dropped with probability `dropout`.
inline SyntheticTrack make_track(std::uint64_t seed, std::size_t base_count, Kinematics kind,
                                 double dropout = 0.2, double jitter = 1e-3) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SyntheticTrack t;
    t.base = base_count;
    double lon = 116.3, lat = 39.9, alt = 9000.0, heading = 0.3;
    std::uint64_t sequence = 0;
    bool in_gap = false;
    const double step_deg = 125.0 / 111320.0;  // ~125 m per report
    const double climb_ft = 12.0;
    for (std::size_t i = 0; i < base_count; ++i) {
        const double k = static_cast<double>(i);
        const double scale = kind == Kinematics::accelerating ? std::pow(1.004, k)
                                                              : 1.0 + 0.3 * std::sin(0.37 * k);
        heading += 0.015;
        lon += scale * step_deg * std::cos(heading) / std::cos(lat * M_PI / 180.0);
        lat += scale * step_deg * std::sin(heading);
        alt += scale * climb_ft;
        const surveil::PositionVector genuine{lon, lat, alt, 0xABC123, sequence++};
        if (i >= 4 && unit(rng) < dropout) {
            ++t.dropped;
            in_gap = true;
            continue;
        }
        if (in_gap) t.after_gap.insert(t.reports.size());
        in_gap = false;
        t.reports.push_back(genuine);
        surveil::PositionVector echo = genuine;
        echo.sequence = sequence++;
        echo.lon += jitter * step_deg * (unit(rng) - 0.5);
        echo.lat += jitter * step_deg * (unit(rng) - 0.5);
        echo.alt += jitter * climb_ft * (unit(rng) - 0.5);
        t.reports.push_back(echo);
        ++t.duplicates;
    }
    return t;
}

struct GapReport {
    std::size_t gaps = 0;
    std::size_t filled = 0;
    double fraction() const { return gaps ? static_cast<double>(filled) / static_cast<double>(gaps) : 1.0; }
};

// A gap counts as filled when a supplement was emitted in front of the first genuine report
// after it. Gaps inside the warm-up prefix are not scored.
inline GapReport score_gaps(const SyntheticTrack& track, const surveil::TrajectoryResult& result,
                            std::size_t warmup) {
    std::set<std::size_t> supplemented;
    for (const auto& e : result.optimized)
        if (e.synthetic) supplemented.insert(e.input_index);
    GapReport g;
    for (auto idx : track.after_gap) {
        if (idx < warmup) continue;
        ++g.gaps;
        g.filled += supplemented.count(idx);
    }
    return g;
}

}  // namespace fixture
