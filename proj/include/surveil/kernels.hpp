#pragma once

// Data-parallel inner loops. Each kernel has a plain serial reference version and an
// OpenMP version; both consume identical per-trial substreams (or identical cubature
// nodes), so they agree exactly for integer counts and to rounding for sums. The
// OpenMP versions combine fixed-size blocks in index order, which keeps their output
// independent of the thread count.

#include <cstddef>
#include <cstdint>

#include "surveil/a2a_channel.hpp"

namespace surveil::kernels {

// Interference integral over the box split into octants around `central`, each octant
// into three pyramids with apex at `central`; `nodes` Gauss-Legendre points per angular
// coordinate of each pyramid base.
double theta_serial(const Box& box, Vec3 central, const RadialProfile& profile, double c,
                    std::size_t nodes);
double theta_parallel(const Box& box, Vec3 central, const RadialProfile& profile, double c,
                      std::size_t nodes);

bool coverage_trial(const A2AScenario& s, Vec3 central, std::uint64_t seed, std::uint64_t trial,
                    GeometryMode mode);

std::size_t coverage_hits_serial(const A2AScenario& s, Vec3 central, std::size_t trials,
                                 std::uint64_t seed, GeometryMode mode);
std::size_t coverage_hits_parallel(const A2AScenario& s, Vec3 central, std::size_t trials,
                                   std::uint64_t seed, GeometryMode mode);

struct SinrAccumulator {
    double sum_db = 0.0;
    std::size_t links = 0;
};

SinrAccumulator sinr_db_serial(const A2AScenario& s, Vec3 central, std::size_t trials,
                               std::uint64_t seed);
SinrAccumulator sinr_db_parallel(const A2AScenario& s, Vec3 central, std::size_t trials,
                                 std::uint64_t seed);

}  // namespace surveil::kernels
