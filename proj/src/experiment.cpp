#include "surveil/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "surveil/a2a_channel.hpp"
#include "surveil/a2g_channel.hpp"
#include "surveil/airspace.hpp"
#include "surveil/error.hpp"
#include "surveil/units.hpp"

#ifndef SURVEIL_VERSION
#define SURVEIL_VERSION "unknown"
#endif

namespace surveil {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// Collects artifacts and writes each file in one go.
class ArtifactWriter {
public:
    explicit ArtifactWriter(fs::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec || !fs::is_directory(dir_))
            throw IoError("cannot create output directory '" + dir_.string() + "'");
    }

    void write(const std::string& name, const std::string& content) {
        const fs::path path = dir_ / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << content;
        out.close();
        if (!out) throw IoError("cannot write '" + path.string() + "'");
        written_.push_back(path);
    }

    const std::vector<fs::path>& written() const { return written_; }

private:
    fs::path dir_;
    std::vector<fs::path> written_;
};

std::string a2g_sweep_csv(const ExperimentConfig& c) {
    const A2GParams params = c.a2g.params(c.airspace.gs_position.z);
    const auto heights = c.a2g.heights();
    const auto rows = a2g_height_sweep(params, c.a2g.ground_arc, heights, c.a2g.fade_trials, c.seed);
    std::ostringstream out;
    out << "height_m,pl_db_nofade,pl_db_fade,snr_db\n";
    for (const auto& r : rows)
        out << num(r.height) << ',' << num(r.loss_nofade.db) << ',' << num(r.loss_fade.db) << ','
            << num(r.snr_fade.db) << '\n';
    return out.str();
}

std::string a2a_density_csv(const ExperimentConfig& c) {
    const A2AScenario s = c.a2a_scenario(1.0);
    const Vec3 central = c.airspace.central_position(c.a2a.layer);
    const auto rows = mean_sinr_vs_density(s, central, c.a2a.density_grid, c.a2a.sinr_trials, c.seed);
    std::ostringstream out;
    out << "density_count,mean_sinr_db,links_count\n";
    for (const auto& r : rows)
        out << num(r.expected_count) << ',' << num(r.mean_sinr_db) << ',' << r.links << '\n';
    return out.str();
}

struct CoveragePoint {
    double analytic;
    CoverageResult mc;
    CoverageResult box;
};

CoveragePoint coverage_point(const ExperimentConfig& c, const A2AScenario& s, Vec3 central,
                             const InterferenceTable* table) {
    CoveragePoint p{};
    const double reach = s.box.diagonal();
    p.analytic = s.fading_shape == 1.0 && table
                     ? coverage_analytic(s, central, reach, *table).probability
                     : std::numeric_limits<double>::quiet_NaN();
    p.mc = coverage_monte_carlo(s, central, c.a2a.trials, c.seed, c.a2a.mc_mode);
    const GeometryMode other =
        c.a2a.mc_mode == GeometryMode::box ? GeometryMode::sphere_law : GeometryMode::box;
    p.box = coverage_monte_carlo(s, central, c.a2a.trials, c.seed, other);
    return p;
}

std::pair<double, double> threshold_range(const std::vector<double>& grid_db) {
    const auto [lo, hi] = std::minmax_element(grid_db.begin(), grid_db.end());
    return {db_to_linear(*lo), db_to_linear(*hi)};
}

std::string coverage_header(const char* first, GeometryMode mode) {
    const char* other = mode == GeometryMode::box ? "sphere_law" : "box";
    return std::string(first) + ",theta_db,coverage_analytic,coverage_mc_" + to_string(mode) +
           ",coverage_mc_std_error,coverage_mc_" + other + '\n';
}

void coverage_row(std::ostringstream& out, double first, double theta_db, const CoveragePoint& p) {
    out << num(first) << ',' << num(theta_db) << ',' << num(p.analytic) << ',' << num(p.mc.probability)
        << ',' << num(p.mc.std_error) << ',' << num(p.box.probability) << '\n';
}

const double& layer_count(const ExperimentConfig& c) {
    return c.a2a.layer == Layer::low ? c.density_low_count : c.density_high_count;
}

std::string a2a_power_csv(const ExperimentConfig& c) {
    const A2AScenario base = c.a2a_scenario(layer_count(c));
    const Vec3 central = c.airspace.central_position(c.a2a.layer);
    const auto [tmin, tmax] = threshold_range(c.a2a.threshold_grid_db);
    std::optional<InterferenceTable> table;
    if (base.fading_shape == 1.0 && base.density > 0)
        table.emplace(make_interference_table(base, central, base.box.diagonal(), tmin, tmax));
    std::ostringstream out;
    out << coverage_header("p_s_watts", c.a2a.mc_mode);
    for (double power : c.a2a.power_grid_w) {
        for (double theta_db : c.a2a.threshold_grid_db) {
            A2AScenario s = base;
            s.sub_tx_power = power;
            s.threshold = db_to_linear(theta_db);
            coverage_row(out, power, theta_db, coverage_point(c, s, central, table ? &*table : nullptr));
        }
    }
    return out.str();
}

std::string a2a_pathloss_csv(const ExperimentConfig& c) {
    const A2AScenario base = c.a2a_scenario(layer_count(c));
    const Vec3 central = c.airspace.central_position(c.a2a.layer);
    const auto [tmin, tmax] = threshold_range(c.a2a.threshold_grid_db);
    std::ostringstream out;
    out << coverage_header("delta", c.a2a.mc_mode);
    for (double delta : c.a2a.delta_grid) {
        A2AScenario at = base;
        at.path_loss_exponent = delta;
        std::optional<InterferenceTable> table;
        if (at.fading_shape == 1.0 && at.density > 0)
            table.emplace(make_interference_table(at, central, at.box.diagonal(), tmin, tmax));
        for (double theta_db : c.a2a.threshold_grid_db) {
            A2AScenario s = at;
            s.threshold = db_to_linear(theta_db);
            coverage_row(out, delta, theta_db, coverage_point(c, s, central, table ? &*table : nullptr));
        }
    }
    return out.str();
}

std::string deployment_csv(const ExperimentConfig& c) {
    std::ostringstream out;
    write_deployment_csv(out, deploy(c.airspace, c.seed));
    return out.str();
}

bool is_decibel_key(const std::string& key) {
    const auto ends = [&](const std::string& suffix) {
        return key.size() >= suffix.size() && key.compare(key.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    return ends("_db") || ends("_dbi") || ends("_dbm_per_hz");
}

std::string linear_form(const std::string& key, const std::string& value) {
    const bool dbm = key.size() >= 11 && key.compare(key.size() - 11, 11, "_dbm_per_hz") == 0;
    std::string out;
    std::size_t start = 0;
    while (start <= value.size()) {
        const auto comma = value.find(',', start);
        const double db = std::stod(value.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        out += (out.empty() ? "" : ",") + num(dbm ? dbm_to_watts(db) : db_to_linear(db));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string manifest(const ExperimentConfig& c, const std::vector<fs::path>& artifacts) {
    std::ostringstream out;
    out << "config_hash=" << config_hash(c) << '\n'
        << "scenario=" << to_string(c.scenario) << '\n'
        << "seed=" << c.seed << '\n'
        << "surveil_version=" << SURVEIL_VERSION << '\n'
#ifdef __VERSION__
        << "compiler=" << __VERSION__ << '\n'
#endif
        << "cplusplus=" << __cplusplus << '\n';
    out << "[config]\n";
    for (const auto& [key, value] : c.entries) {
        out << key << '=' << value << '\n';
        if (is_decibel_key(key)) out << key << ".linear=" << linear_form(key, value) << '\n';
    }
    out << "[artifacts]\n";
    for (const auto& a : artifacts) out << a.filename().string() << '\n';
    return out.str();
}

std::string trajectory_csv(const FleetResult& fleet) {
    std::ostringstream out;
    out << "row,hex_ident,longitude_deg,latitude_deg,altitude_ft,generated_time,synthetic\n";
    for (std::size_t i = 0; i < fleet.optimized.size(); ++i) {
        const auto& r = fleet.optimized[i];
        char hex[8];
        std::snprintf(hex, sizeof hex, "%06X", static_cast<unsigned>(r.hex_ident));
        out << i << ',' << hex << ',' << num(r.longitude) << ',' << num(r.latitude) << ','
            << r.altitude << ',' << r.generated_time << ',' << (fleet.synthetic[i] ? 1 : 0) << '\n';
    }
    return out.str();
}

double parse_clock(const std::string& text, bool& ok) {
    int h = 0, m = 0;
    double s = 0.0;
    char tail = 0;
    ok = std::sscanf(text.c_str(), "%d:%d:%lf%c", &h, &m, &s, &tail) == 3 && h >= 0 && h < 24 &&
         m >= 0 && m < 60 && s >= 0 && s < 61;
    return h * 3600.0 + m * 60.0 + s;
}

}  // namespace

std::string config_hash(const ExperimentConfig& config) {
    std::uint64_t h = 14695981039346656037ull;
    auto feed = [&h](const std::string& s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 1099511628211ull;
        }
        h ^= 0xFF;
        h *= 1099511628211ull;
    };
    for (const auto& [key, value] : config.entries) {
        feed(key);
        feed(value);
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string midpoint_time(const std::string& earlier, const std::string& later) {
    bool ok_a = false, ok_b = false;
    const double a = parse_clock(earlier, ok_a);
    double b = parse_clock(later, ok_b);
    if (!ok_a || !ok_b) return later;
    if (b < a) b += 86400.0;
    double mid = std::fmod(0.5 * (a + b), 86400.0);
    const auto millis = static_cast<long long>(std::llround(mid * 1000.0));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld.%03lld", millis / 3600000 % 24,
                  millis / 60000 % 60, millis / 1000 % 60, millis % 1000);
    return buf;
}

std::vector<PositionReport> read_sbs_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read SBS file '" + path.string() + "'");
    std::vector<PositionReport> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        // Other SBS message types (identification, velocity, ...) are not position reports.
        if (line.rfind("MSG,", 0) == 0 && line.rfind("MSG,3,", 0) != 0) continue;
        try {
            out.push_back(decode_sbs(line));
        } catch (const ParseError& e) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
    return out;
}

FleetResult process_sbs_reports(const std::vector<PositionReport>& reports, const MecConfig& config) {
    // Per-aircraft index lists, in first-seen order.
    std::map<std::uint32_t, std::vector<std::size_t>> tracks;
    for (std::size_t i = 0; i < reports.size(); ++i) tracks[reports[i].hex_ident].push_back(i);

    struct Row {
        std::size_t order;
        int synthetic_first;  // 0 for supplements, which precede the report they bracket
        PositionReport report;
    };
    std::vector<Row> rows;
    FleetResult fleet;
    bool processed_any = false;

    for (const auto& [ident, indices] : tracks) {
        if (indices.size() < config.window + 2) {
            // Too short to warm up: relayed untouched.
            fleet.stats.input_count += indices.size();
            fleet.stats.warmup_count += indices.size();
            for (auto i : indices) rows.push_back({i, 1, reports[i]});
            continue;
        }
        processed_any = true;
        std::vector<PositionVector> track;
        for (std::size_t k = 0; k < indices.size(); ++k) {
            const auto& r = reports[indices[k]];
            track.push_back({r.longitude, r.latitude, static_cast<double>(r.altitude), ident, k});
        }
        const auto result = run_trajectory(track, config);
        const auto& s = result.stats;
        fleet.stats.input_count += s.input_count;
        fleet.stats.warmup_count += s.warmup_count;
        fleet.stats.abandoned_count += s.abandoned_count;
        fleet.stats.relayed_count += s.relayed_count;
        fleet.stats.supplemented_count += s.supplemented_count;
        fleet.stats.sphere_supplements += s.sphere_supplements;
        fleet.stats.linear_supplements += s.linear_supplements;

        std::size_t last_relayed = 0;  // index into `track` of the latest genuine report emitted
        for (const auto& e : result.optimized) {
            const std::size_t global = indices[e.input_index];
            if (!e.synthetic) {
                rows.push_back({global, 1, reports[global]});
                last_relayed = e.input_index;
                continue;
            }
            const auto& before = reports[indices[last_relayed]];
            const auto& after = reports[global];
            PositionReport r = before;
            r.longitude = e.position.lon;
            r.latitude = std::clamp(e.position.lat, -90.0, 90.0);
            r.altitude = std::llround(e.position.alt);
            r.generated_time = midpoint_time(before.generated_time, after.generated_time);
            r.logged_time = midpoint_time(before.logged_time, after.logged_time);
            rows.push_back({global, 0, r});
        }
    }
    if (!reports.empty() && !processed_any)
        throw ConfigError("no aircraft has the N+2 = " + std::to_string(config.window + 2) +
                          " reports needed for on-board processing");

    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return a.order != b.order ? a.order < b.order : a.synthetic_first < b.synthetic_first;
    });
    for (auto& r : rows) {
        fleet.synthetic.push_back(r.synthetic_first == 0);
        fleet.optimized.push_back(std::move(r.report));
    }
    return fleet;
}

RunSummary run_experiment(const ExperimentConfig& config, const fs::path& out_dir) {
    ArtifactWriter out(out_dir);
    switch (config.scenario) {
        case Scenario::a2g_sweep:
            out.write("a2g_sweep.csv", a2g_sweep_csv(config));
            break;
        case Scenario::a2a_density:
            out.write("a2a_density.csv", a2a_density_csv(config));
            out.write("deployment.csv", deployment_csv(config));
            break;
        case Scenario::a2a_power:
            out.write("a2a_power.csv", a2a_power_csv(config));
            out.write("deployment.csv", deployment_csv(config));
            break;
        case Scenario::a2a_pathloss:
            out.write("a2a_pathloss.csv", a2a_pathloss_csv(config));
            out.write("deployment.csv", deployment_csv(config));
            break;
        case Scenario::trajectory: {
            const auto reports = read_sbs_file(config.input_file);
            const auto fleet = process_sbs_reports(reports, config.mec);
            std::string sbs;
            for (const auto& r : fleet.optimized) sbs += encode_sbs(r) + '\n';
            out.write("optimized.sbs", sbs);
            out.write("trajectory.csv", trajectory_csv(fleet));
            out.write("trajectory_stats.txt", fleet.stats.to_key_value());
            break;
        }
    }
    RunSummary summary;
    summary.config_hash = config_hash(config);
    auto artifacts = out.written();
    out.write("manifest.txt", manifest(config, artifacts));
    summary.artifacts = out.written();
    return summary;
}

}  // namespace surveil
