#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "surveil/a2a_channel.hpp"
#include "surveil/a2g_channel.hpp"
#include "surveil/airspace.hpp"
#include "surveil/onboard_mec.hpp"
#include "surveil/units.hpp"

namespace surveil {

enum class Scenario { a2g_sweep, a2a_density, a2a_power, a2a_pathloss, trajectory };

const char* to_string(Scenario scenario);

struct A2GSettings {
    Layer layer = Layer::low;
    A2GParams five_g = A2GParams::five_g();
    A2GParams adsb = A2GParams::adsb();
    double ground_arc = 10000.0;
    double height_min = 500.0;
    double height_max = 4500.0;
    double height_step = 1.0;  // must resolve the ~lambda*s/(2 h_g) interference period
    std::size_t fade_trials = 10000;

    // Parameters for the selected layer (5G low, ADS-B high) with the given GS height.
    A2GParams params(double gs_height) const;
    std::vector<double> heights() const;
};

struct A2ASettings {
    Layer layer = Layer::low;
    A2AScenario base;  // density, box and noise power derived from the other keys
    double noise_density = dbm_to_watts(-174.0);  // W/Hz
    double bandwidth = 100e6;                      // Hz; N_0 = noise_density * bandwidth
    std::vector<double> density_grid{1, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60};
    std::vector<double> power_grid_w{1, 5.75, 10.5, 15.25, 20};
    std::vector<double> threshold_grid_db{-14, -12.25, -10.5, -8.75, -7};
    std::vector<double> delta_grid{2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 4.9};
    std::size_t trials = 20000;
    std::size_t sinr_trials = 2000;
    GeometryMode mc_mode = GeometryMode::sphere_law;
};

/// Parsed experiment description. `entries` keeps every key (defaults included) in
/// canonical "section.key" form; it is what the manifest and the config hash see.
struct ExperimentConfig {
    Scenario scenario = Scenario::a2g_sweep;
    std::uint64_t seed = 0;
    std::string input_file;
    std::string output_dir = "out";
    AirspaceConfig airspace;
    double density_low_count = 20.0;
    double density_high_count = 20.0;
    A2GSettings a2g;
    A2ASettings a2a;
    MecConfig mec;
    std::map<std::string, std::string> entries;

    // Scenario for the selected A2A layer, with the given expected UAV count.
    A2AScenario a2a_scenario(double expected_count) const;
    // Applies command-line overrides and re-derives dependent fields.
    void set_seed(std::uint64_t seed);
    void set_trials(std::size_t trials);
};

// Plain-text "key = value" file with [sections]. '#' starts a comment.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

// Every accepted key, as "section.key", for diagnostics and docs.
std::vector<std::string> known_keys();

}  // namespace surveil
