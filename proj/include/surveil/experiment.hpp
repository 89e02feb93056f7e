#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "surveil/adsb_codec.hpp"
#include "surveil/config.hpp"
#include "surveil/onboard_mec.hpp"

namespace surveil {

struct RunSummary {
    std::vector<std::filesystem::path> artifacts;
    std::string config_hash;
};

// Runs the configured scenario and writes its CSVs plus manifest.txt into `out_dir`.
RunSummary run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir);

// FNV-1a over the canonical entries, hex encoded.
std::string config_hash(const ExperimentConfig& config);

struct FleetResult {
    std::vector<PositionReport> optimized;
    std::vector<bool> synthetic;
    TrajectoryStats stats;  // summed over aircraft
};

// Groups SBS reports by hex ident, runs the on-board processor per aircraft and merges the
// outputs back into input order. Supplements carry the midpoint of the bracketing times.
FleetResult process_sbs_reports(const std::vector<PositionReport>& reports,
                                const MecConfig& config);

std::vector<PositionReport> read_sbs_file(const std::filesystem::path& path);

// Midpoint of two "HH:MM:SS[.fff]" strings, or `later` if either does not parse.
std::string midpoint_time(const std::string& earlier, const std::string& later);

}  // namespace surveil
