#include "surveil/airspace.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <string>

#include "surveil/error.hpp"
#include "surveil/units.hpp"

namespace surveil {

const char* to_string(Layer layer) { return layer == Layer::low ? "low" : "high"; }

Box AirspaceConfig::layer_box(Layer layer) const {
    const double z0 = layer == Layer::low ? 0.0 : layer_thickness + isolation_thickness;
    return Box{{-half_extent_x, -half_extent_y, z0},
               {half_extent_x, half_extent_y, z0 + layer_thickness}};
}

Vec3 AirspaceConfig::central_position(Layer layer) const {
    const double h = layer == Layer::low ? central_low_height : central_high_height;
    return {gs_position.x + central_offset_x, gs_position.y + central_offset_y, h};
}

void AirspaceConfig::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError("airspace: " + what);
    };
    const double values[] = {half_extent_x, half_extent_y, layer_thickness, isolation_thickness,
                             density_low,   density_high,  gs_position.x,   gs_position.y,
                             gs_position.z, central_low_height, central_high_height,
                             central_offset_x, central_offset_y, max_service_range};
    for (double v : values) require(std::isfinite(v), "non-finite value");
    require(half_extent_x > 0 && half_extent_y > 0, "horizontal extents must be > 0");
    require(layer_thickness > 0 && isolation_thickness > 0, "layer thicknesses must be > 0");
    require(gs_position.z > 0, "ground station height must be > 0");
    require(max_service_range > 0, "max service range must be > 0");
    require(density_low >= 0 && density_high >= 0, "densities must be >= 0");
    require(central_low_height >= 0 && central_low_height <= layer_thickness,
            "central low height outside the low layer");
    require(central_high_height >= layer_thickness + isolation_thickness &&
                central_high_height <= total_height(),
            "central high height outside the high layer");
}

double intensity_from_count(double expected_count, const Box& box) {
    if (!(expected_count >= 0) || !std::isfinite(expected_count))
        throw ConfigError("expected UAV count must be a finite value >= 0");
    return expected_count / box.volume();
}

std::vector<Vec3> sample_ppp_box(const Box& box, double intensity, Engine& rng) {
    std::vector<Vec3> points;
    const double mean = intensity * box.volume();
    if (!(mean > 0)) return points;
    std::poisson_distribution<long long> count(mean);
    const auto n = count(rng);
    points.reserve(static_cast<std::size_t>(n));
    std::uniform_real_distribution<double> ux(box.lo.x, box.hi.x);
    std::uniform_real_distribution<double> uy(box.lo.y, box.hi.y);
    std::uniform_real_distribution<double> uz(box.lo.z, box.hi.z);
    for (long long i = 0; i < n; ++i) {
        const double x = ux(rng);
        const double y = uy(rng);
        const double z = uz(rng);
        points.push_back({x, y, z});
    }
    return points;
}

std::vector<Vec3> sample_ppp(const AirspaceConfig& config, Layer layer, std::uint64_t seed) {
    config.validate();
    auto rng = make_stream(seed, stream_tag(layer == Layer::low ? "ppp/low" : "ppp/high"));
    return sample_ppp_box(config.layer_box(layer), config.density(layer), rng);
}

Deployment deploy(const AirspaceConfig& config, std::uint64_t seed) {
    Deployment d;
    d.low_uavs = sample_ppp(config, Layer::low, seed);
    d.high_uavs = sample_ppp(config, Layer::high, seed);
    d.central_low = config.central_position(Layer::low);
    d.central_high = config.central_position(Layer::high);
    d.seed = seed;
    return d;
}

namespace {

void check_args(double d, double density) {
    if (!(d >= 0)) throw DomainError("distance must be >= 0");
    if (!(density >= 0)) throw DomainError("density must be >= 0");
}

}  // namespace

double nn_distance_cdf(double d, double density) {
    check_args(d, density);
    return -std::expm1(-4.0 / 3.0 * kPi * density * d * d * d);
}

double nn_distance_pdf(double d, double density) {
    check_args(d, density);
    return 4.0 * kPi * density * d * d * std::exp(-4.0 / 3.0 * kPi * density * d * d * d);
}

double nn_distance_quantile(double u, double density) {
    if (!(u >= 0 && u < 1)) throw DomainError("quantile level must lie in [0, 1)");
    if (!(density > 0)) return std::numeric_limits<double>::infinity();
    return std::cbrt(-std::log1p(-u) * 3.0 / (4.0 * kPi * density));
}

void write_deployment_csv(std::ostream& out, const Deployment& deployment) {
    out << "layer,x_m,y_m,z_m\n" << std::setprecision(10);
    auto row = [&out](const char* layer, Vec3 p) {
        out << layer << ',' << p.x << ',' << p.y << ',' << p.z << '\n';
    };
    row("central_low", deployment.central_low);
    row("central_high", deployment.central_high);
    for (const auto& p : deployment.low_uavs) row("low", p);
    for (const auto& p : deployment.high_uavs) row("high", p);
}

}  // namespace surveil
