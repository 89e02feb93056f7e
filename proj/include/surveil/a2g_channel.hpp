#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "surveil/units.hpp"

namespace surveil {

/// Radio and geometry parameters for the central-UAV to ground-station link.
///
/// Heights are measured from the earth surface; the heights above the tangent
/// plane at the reflection point are taken to be the same values. Gains and
/// powers are linear (W, ratio). `noise_density` is in W/Hz.
struct A2GParams {
    double earth_radius = kEarthRadius;
    double frequency = 3.5e9;
    double bandwidth = 100e6;
    double tx_power = 20.0;
    double total_gain = 100.0;  // 20 dBi
    double rel_permittivity = 15.0;
    double conductivity = 5e3;
    double vacuum_permittivity = kVacuumPermittivity;
    double noise_density = dbm_to_watts(-174.0);
    double beamwidth = kPi / 3.0;
    double rice_factor = 3.0;
    double uav_height = 2250.0;
    double gs_height = 50.0;

    double wavelength() const { return wavelength_for(frequency); }
    // Upper bound on the number of reflected rays, floor(pi / (2 * beamwidth)).
    int max_rays() const;
    void validate() const;

    static A2GParams five_g();  // 3.5 GHz, 100 MHz
    static A2GParams adsb();    // 1090 MHz, 1 MHz
};

/// Solved curved-earth geometry of the direct ray and one ground-reflected ray.
struct A2GLinkGeometry {
    double los_distance = 0.0;        // R1
    double arc_total = 0.0;           // s
    double arc_tx = 0.0;              // s1, UAV foot to reflection point
    double arc_rx = 0.0;              // s2, reflection point to GS foot
    double slant_tx = 0.0;            // r1
    double slant_rx = 0.0;            // r2
    double grazing_angle = 0.0;       // psi
    double central_angle = 0.0;       // phi
    double central_angle_tx = 0.0;    // phi1
    double central_angle_rx = 0.0;    // phi2
    double path_difference = 0.0;     // small-angle form 2 s1 s2 psi^2 / s
    double phase_difference = 0.0;    // 2 pi delta_s / lambda

    double reflected_length() const { return slant_tx + slant_rx; }
    // Exact r1 + r2 - R1, kept as a diagnostic next to the small-angle form.
    double exact_path_difference() const { return reflected_length() - los_distance; }
};

struct RayContribution {
    double magnitude = 0.0;         // |Gamma_t| = D * |Gamma_perp|
    double phase = 0.0;             // arg Gamma_t
    double divergence = 1.0;        // D
    double phase_difference = 0.0;  // delta phi_t
};

struct PowerDb {
    double db = 0.0;
    bool deep_fade = false;  // received power was zero; db is +inf (loss) or -inf (snr)
};

// Specular reflection point for a great-circle arc `ground_arc` between the UAV and GS feet.
A2GLinkGeometry solve_geometry(const A2GParams& params, double ground_arc);

// Geometry of a ray reflected at a caller-chosen arc position `arc_tx` (multiray mode).
A2GLinkGeometry solve_ray_geometry(const A2GParams& params, double ground_arc, double arc_tx);

std::complex<double> reflection_coefficient(const A2GParams& params, double grazing_angle);

double divergence_factor(const A2GLinkGeometry& geom, double earth_radius);

RayContribution make_ray(const A2GParams& params, const A2GLinkGeometry& geom);

// Received power at the GS: direct ray plus the listed reflected rays.
double received_power(const A2GParams& params, const A2GLinkGeometry& geom,
                      std::span<const RayContribution> rays);

// Free-space received power, P_c G_g lambda^2 / (4 pi R)^2.
double friis_power(const A2GParams& params, double distance);

PowerDb path_loss(const A2GParams& params, double received_w);
PowerDb snr(const A2GParams& params, double received_w);

// Rician power gain with unit mean; returns +1 exactly for an infinite K.
template <class Rng>
double rician_power_gain(double rice_factor, Rng& rng);

// Mean of `received_w` times `trials` i.i.d. unit-mean Rician gains.
double apply_rician_fading(double received_w, double rice_factor, std::uint64_t seed,
                           std::size_t trials);

struct A2GSweepRow {
    double height = 0.0;
    PowerDb loss_nofade;
    PowerDb loss_fade;
    PowerDb snr_fade;
};

// Path loss / SNR over a grid of UAV heights at fixed ground arc. Each height point is
// independent and draws its fading from substream `index` of `seed`.
std::vector<A2GSweepRow> a2g_height_sweep(const A2GParams& params, double ground_arc,
                                          std::span<const double> heights,
                                          std::size_t fade_trials, std::uint64_t seed,
                                          bool parallel = true);

}  // namespace surveil

#include "surveil/detail/rician.hpp"
