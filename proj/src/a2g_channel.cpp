#include "surveil/a2g_channel.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include "surveil/error.hpp"
#include "surveil/rng.hpp"

namespace surveil {

int A2GParams::max_rays() const {
    return static_cast<int>(std::floor(kPi / (2.0 * beamwidth)));
}

void A2GParams::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError("a2g: " + what);
    };
    const double values[] = {earth_radius,     frequency,    bandwidth,    tx_power,
                             total_gain,       rel_permittivity, conductivity,
                             vacuum_permittivity, noise_density, beamwidth, uav_height,
                             gs_height};
    for (double v : values) require(std::isfinite(v), "non-finite value");
    require(earth_radius > 0, "earth radius must be > 0");
    require(frequency > 0 && bandwidth > 0, "frequency and bandwidth must be > 0");
    require(tx_power > 0 && total_gain > 0, "power and gain must be > 0");
    require(rel_permittivity > 0 && conductivity >= 0 && vacuum_permittivity > 0,
            "invalid ground constants");
    require(noise_density > 0, "noise density must be > 0");
    require(beamwidth > 0 && beamwidth < kPi / 2, "beamwidth must lie in (0, pi/2)");
    require(!(rice_factor < 0), "rice factor must be >= 0");
    require(gs_height > 0 && gs_height < uav_height, "need 0 < gs height < uav height");
}

A2GParams A2GParams::five_g() { return A2GParams{}; }

A2GParams A2GParams::adsb() {
    A2GParams p;
    p.frequency = 1090e6;
    p.bandwidth = 1e6;
    p.uav_height = 7750.0;
    return p;
}

namespace {

// r^2 = h^2 + 4 a (a + h) sin^2(angle / 2): law of cosines without the cancellation
// of (a + h)^2 + a^2 - 2 a (a + h) cos(angle) at large a.
double slant(double a, double h, double angle) {
    const double s = std::sin(0.5 * angle);
    return std::sqrt(h * h + 4.0 * a * (a + h) * s * s);
}

A2GLinkGeometry build_geometry(const A2GParams& params, double s, double s1) {
    const double a = params.earth_radius;
    const double h = params.uav_height;
    const double hg = params.gs_height;

    A2GLinkGeometry g;
    g.arc_total = s;
    g.arc_tx = s1;
    g.arc_rx = s - s1;
    g.central_angle = s / a;
    g.central_angle_tx = s1 / a;
    g.central_angle_rx = g.arc_rx / a;

    const double half = std::sin(0.5 * g.central_angle);
    g.los_distance = std::sqrt((h - hg) * (h - hg) + 4.0 * (a + h) * (a + hg) * half * half);
    g.slant_tx = slant(a, h, g.central_angle_tx);
    g.slant_rx = slant(a, hg, g.central_angle_rx);

    const double w1 = s * s / (4.0 * a * (h + hg));
    const double w2 = (h - hg) / (h + hg);
    g.grazing_angle = (h + hg) * (1.0 - w1 * (1.0 + w2 * w2)) / s;
    if (!(g.grazing_angle > 0.0))
        throw GeometryError("grazing angle <= 0: ground station beyond the radio horizon");
    if (!(g.grazing_angle < kPi / 2))
        throw GeometryError("grazing angle >= pi/2: ground arc too short for the heights");

    g.path_difference = 2.0 * g.arc_tx * g.arc_rx * g.grazing_angle * g.grazing_angle / s;
    g.phase_difference = 2.0 * kPi * g.path_difference / params.wavelength();
    return g;
}

}  // namespace

A2GLinkGeometry solve_geometry(const A2GParams& params, double ground_arc) {
    if (!(ground_arc > 0) || !std::isfinite(ground_arc))
        throw DomainError("ground arc must be a finite value > 0");
    params.validate();
    const double a = params.earth_radius;
    const double h = params.uav_height;
    const double hg = params.gs_height;
    const double s = ground_arc;

    const double w1 = s * s / (4.0 * a * (h + hg));
    const double w2 = (h - hg) / (h + hg);
    const double arg = 1.5 * w2 * std::sqrt(3.0 * w1 / std::pow(w1 + 1.0, 3));
    if (!(arg >= -1.0 && arg <= 1.0))
        throw GeometryError("arccos argument outside [-1, 1]: no specular reflection point");
    // 2 sqrt((w1+1)/(3 w1)) cos(pi/3 + acos(arg)/3), rewritten as sin(asin(arg)/3) so that
    // the product stays accurate when w1 -> 0.
    const double w3 = 2.0 * std::sqrt((w1 + 1.0) / (3.0 * w1)) * std::sin(std::asin(arg) / 3.0);
    const double s1 = 0.5 * s * (1.0 + w3);
    if (!(s1 > 0.0 && s1 < s)) throw GeometryError("reflection point outside the ground arc");
    return build_geometry(params, s, s1);
}

A2GLinkGeometry solve_ray_geometry(const A2GParams& params, double ground_arc, double arc_tx) {
    if (!(ground_arc > 0) || !std::isfinite(ground_arc))
        throw DomainError("ground arc must be a finite value > 0");
    if (!(arc_tx > 0 && arc_tx < ground_arc))
        throw DomainError("reflection arc must lie strictly inside the ground arc");
    params.validate();
    return build_geometry(params, ground_arc, arc_tx);
}

std::complex<double> reflection_coefficient(const A2GParams& params, double grazing_angle) {
    if (!(grazing_angle > 0 && grazing_angle <= kPi / 2))
        throw DomainError("grazing angle must lie in (0, pi/2]");
    const double b =
        params.conductivity / (2.0 * kPi * params.frequency * params.vacuum_permittivity);
    const std::complex<double> eps(params.rel_permittivity, -b);
    const std::complex<double> root = std::sqrt(eps - std::cos(grazing_angle));
    const std::complex<double> lead = eps * std::sin(grazing_angle);
    return (lead - root) / (lead + root);
}

double divergence_factor(const A2GLinkGeometry& geom, double earth_radius) {
    const double r1 = geom.slant_tx;
    const double r2 = geom.slant_rx;
    const double q = 2.0 * r1 * r2 / (earth_radius * (r1 + r2) * std::sin(geom.grazing_angle));
    return 1.0 / std::sqrt(1.0 + q);
}

RayContribution make_ray(const A2GParams& params, const A2GLinkGeometry& geom) {
    const auto gamma = reflection_coefficient(params, geom.grazing_angle);
    RayContribution ray;
    ray.divergence = divergence_factor(geom, params.earth_radius);
    ray.magnitude = ray.divergence * std::abs(gamma);
    ray.phase = std::arg(gamma);
    ray.phase_difference = geom.phase_difference;
    return ray;
}

double friis_power(const A2GParams& params, double distance) {
    const double lambda = params.wavelength();
    const double spread = 4.0 * kPi * distance;
    return params.tx_power * params.total_gain * lambda * lambda / (spread * spread);
}

double received_power(const A2GParams& params, const A2GLinkGeometry& geom,
                      std::span<const RayContribution> rays) {
    if (rays.empty()) throw ConfigError("a2g: at least one reflected ray is required");
    if (static_cast<int>(rays.size()) > params.max_rays())
        throw ConfigError("a2g: " + std::to_string(rays.size()) +
                          " rays exceed floor(pi / (2 beamwidth)) = " +
                          std::to_string(params.max_rays()));
    std::complex<double> field(1.0, 0.0);
    for (const auto& r : rays)
        field += std::polar(r.magnitude, -(r.phase_difference - r.phase));
    return friis_power(params, geom.los_distance) * std::norm(field);
}

PowerDb path_loss(const A2GParams& params, double received_w) {
    if (!(received_w > 0)) return {std::numeric_limits<double>::infinity(), true};
    return {-10.0 * std::log10(received_w / params.tx_power), false};
}

PowerDb snr(const A2GParams& params, double received_w) {
    if (!(received_w > 0)) return {-std::numeric_limits<double>::infinity(), true};
    return {10.0 * std::log10(received_w) - 10.0 * std::log10(params.noise_density * params.bandwidth),
            false};
}

namespace {

double mean_rician_gain(double rice_factor, Engine& rng, std::size_t trials) {
    double sum = 0.0;
    for (std::size_t i = 0; i < trials; ++i) sum += rician_power_gain(rice_factor, rng);
    return sum / static_cast<double>(trials);
}

void check_fading_args(double rice_factor, std::size_t trials) {
    if (!(rice_factor >= 0)) throw DomainError("rice factor must be >= 0");
    if (trials < 1) throw DomainError("fading trials must be >= 1");
}

}  // namespace

double apply_rician_fading(double received_w, double rice_factor, std::uint64_t seed,
                           std::size_t trials) {
    check_fading_args(rice_factor, trials);
    if (std::isinf(rice_factor)) return received_w;
    auto rng = make_stream(seed, stream_tag("a2g/rician"));
    return received_w * mean_rician_gain(rice_factor, rng, trials);
}

std::vector<A2GSweepRow> a2g_height_sweep(const A2GParams& params, double ground_arc,
                                          std::span<const double> heights,
                                          std::size_t fade_trials, std::uint64_t seed,
                                          bool parallel) {
    check_fading_args(params.rice_factor, fade_trials);
    std::vector<A2GSweepRow> rows(heights.size());
    std::exception_ptr failure;
    const auto n = static_cast<long>(heights.size());

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long i = 0; i < n; ++i) {
        try {
            A2GParams p = params;
            p.uav_height = heights[i];
            const auto geom = solve_geometry(p, ground_arc);
            const RayContribution ray = make_ray(p, geom);
            const double pg = received_power(p, geom, std::span(&ray, 1));
            double faded = pg;
            if (!std::isinf(p.rice_factor)) {
                auto rng = make_stream(seed, stream_tag("a2g/sweep"), static_cast<std::uint64_t>(i));
                faded = pg * mean_rician_gain(p.rice_factor, rng, fade_trials);
            }
            rows[i] = {heights[i], path_loss(p, pg), path_loss(p, faded), snr(p, faded)};
        } catch (...) {
#pragma omp critical(a2g_sweep_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return rows;
}

}  // namespace surveil
