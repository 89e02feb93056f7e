#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "surveil/rng.hpp"
#include "surveil/vec3.hpp"

namespace surveil {

enum class Layer { low, high };

const char* to_string(Layer layer);

// Axis-aligned box [lo, hi].
struct Box {
    Vec3 lo;
    Vec3 hi;

    double volume() const { return (hi.x - lo.x) * (hi.y - lo.y) * (hi.z - lo.z); }
    double diagonal() const { return distance(lo, hi); }
    bool contains(Vec3 p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z &&
               p.z <= hi.z;
    }
};

/// Two stacked airspace slabs separated by an isolation layer.
///
/// The low layer spans z in [0, layer_thickness], the high layer spans
/// [layer_thickness + isolation_thickness, total_height()]. Horizontally both
/// cover [-half_extent_x, half_extent_x] x [-half_extent_y, half_extent_y].
/// Densities are volumetric intensities (UAVs per cubic meter); use
/// intensity_from_count() to convert an expected per-layer count.
struct AirspaceConfig {
    double half_extent_x = 5000.0;
    double half_extent_y = 5000.0;
    double layer_thickness = 4500.0;
    double isolation_thickness = 1000.0;
    double density_low = 0.0;
    double density_high = 0.0;
    Vec3 gs_position{0.0, 0.0, 50.0};
    double central_low_height = 2250.0;
    double central_high_height = 7750.0;
    // Horizontal offset of both central UAVs from the point above the ground station.
    double central_offset_x = 0.0;
    double central_offset_y = 0.0;
    double max_service_range = 15000.0;

    double total_height() const { return 2.0 * layer_thickness + isolation_thickness; }
    Box layer_box(Layer layer) const;
    double density(Layer layer) const { return layer == Layer::low ? density_low : density_high; }
    Vec3 central_position(Layer layer) const;

    // Throws ConfigError on any violated invariant.
    void validate() const;
};

// Converts an expected number of UAVs in `box` into a volumetric intensity.
double intensity_from_count(double expected_count, const Box& box);

struct Deployment {
    std::vector<Vec3> low_uavs;
    std::vector<Vec3> high_uavs;
    Vec3 central_low;
    Vec3 central_high;
    std::uint64_t seed = 0;
};

// Homogeneous PPP in a box: Poisson(intensity * volume) points, i.i.d. uniform.
std::vector<Vec3> sample_ppp_box(const Box& box, double intensity, Engine& rng);

// PPP draw for one layer of the configuration. Each layer uses its own substream of `seed`.
std::vector<Vec3> sample_ppp(const AirspaceConfig& config, Layer layer, std::uint64_t seed);

Deployment deploy(const AirspaceConfig& config, std::uint64_t seed);

// Nearest-neighbour distance law of a 3-D PPP seen from a fixed point (spherical neighbourhood).
double nn_distance_cdf(double d, double density);
double nn_distance_pdf(double d, double density);

// Inverse-CDF draw of the nearest-neighbour distance from a uniform variate u in [0, 1).
double nn_distance_quantile(double u, double density);

// CSV with header "layer,x_m,y_m,z_m"; central UAVs are tagged central_low / central_high.
void write_deployment_csv(std::ostream& out, const Deployment& deployment);

}  // namespace surveil
