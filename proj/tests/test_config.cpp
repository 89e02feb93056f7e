#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "surveil/config.hpp"
#include "surveil/error.hpp"
#include "surveil/experiment.hpp"
#include "trajectory_fixture.hpp"

using namespace surveil;
namespace fs = std::filesystem;

namespace {

const std::string kConfigs = SURVEIL_CONFIGS_DIR;

std::string error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("surveil_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

const std::string kMinimal = "[experiment]\nscenario = a2g_sweep\nseed = 1\n";

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + SURVEIL_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("parse_config: required keys and location diagnostics") {
    const auto empty = error_of("");
    CHECK(empty.find("experiment.scenario") != std::string::npos);
    CHECK(empty.find("experiment.seed") != std::string::npos);

    CHECK(error_of(kMinimal + "[a2a]\np_s_w = -1\n").find("line 5") != std::string::npos);
    CHECK(error_of(kMinimal + "[a2a]\np_s_w = -1\n").find("a2a.p_s_w") != std::string::npos);
    CHECK(error_of(kMinimal + "seed = 2\n").find("line 4: duplicate key 'experiment.seed'") != std::string::npos);
    CHECK(error_of(kMinimal + "[a2a]\nbogus_w = 1\n").find("line 5: unknown key") != std::string::npos);
    CHECK(error_of(kMinimal + "[a2a]\np_s_w = 12x\n").find("line 5") != std::string::npos);
    CHECK(error_of(kMinimal + "[radio]\n").find("line 4: unknown section") != std::string::npos);
    CHECK(error_of("seed = 1\n").find("line 1: key outside") != std::string::npos);
    CHECK(error_of(kMinimal + "[a2a]\njust words\n").find("line 5") != std::string::npos);
    CHECK(error_of(kMinimal + "[a2a]\ntrials_count = 10\n").find("line 5") != std::string::npos);
    CHECK(error_of(kMinimal + "[a2a]\npath_loss_exponent = 5.5\n").find("line 5") != std::string::npos);
    CHECK(error_of(kMinimal + "[mec]\norder_p = 0.5\n").find("line 5") != std::string::npos);
    CHECK(error_of("[experiment]\nscenario = trajectory\nseed = 1\n").find("input_file") != std::string::npos);
    CHECK(error_of("[experiment]\nscenario = fig99\nseed = 1\n").find("line 2") != std::string::npos);
}

TEST_CASE("parse_config: reference transcription equals the defaults") {
    const auto fixture = load_config(kConfigs + "/reference.ini");
    auto defaults = parse_config("[experiment]\nscenario = a2g_sweep\nseed = 2024\noutput_dir = out/a2g_sweep\n");
    CHECK(fixture.entries == defaults.entries);
    CHECK(config_hash(fixture) == config_hash(defaults));

    // Unit conversions happen once, at parse time.
    CHECK(fixture.a2a.noise_density == doctest::Approx(std::pow(10.0, -17.4) * 1e-3));
    CHECK(fixture.a2a.base.noise_power == doctest::Approx(fixture.a2a.noise_density * 100e6));
    CHECK(fixture.a2a.base.total_gain == doctest::Approx(std::pow(10.0, 2.3)));
    CHECK(fixture.a2g.five_g.total_gain == doctest::Approx(100.0));
    CHECK(fixture.a2a.base.threshold == doctest::Approx(std::pow(10.0, -1.4)));
    CHECK(fixture.a2g.five_g.frequency == 3.5e9);
    CHECK(fixture.a2g.adsb.frequency == 1090e6);
    CHECK(fixture.airspace.gs_position.z == 50.0);
    const double layer_volume = 1e4 * 1e4 * 4500.0;
    CHECK(fixture.airspace.density_low == doctest::Approx(20.0 / layer_volume));
}

TEST_CASE("parse_config: comments, whitespace, overrides") {
    const auto c = parse_config("# header\n[experiment]   \n  scenario=a2a_power # trailing\nseed = 9\n\n[mec]\norder_p = inf\n");
    CHECK(c.scenario == Scenario::a2a_power);
    CHECK(c.seed == 9);
    CHECK(std::isinf(c.mec.order));
    auto d = c;
    d.set_seed(10);
    CHECK(config_hash(d) != config_hash(c));
    CHECK_THROWS_AS(d.set_trials(999), ConfigError);
    d.set_trials(5000);
    CHECK(d.a2a.trials == 5000);
    CHECK(d.entries.at("a2a.trials_count") == "5000");
    CHECK(!known_keys().empty());
}

TEST_CASE("load_config: file errors") {
    CHECK_THROWS_AS(load_config("/nonexistent/surveil.ini"), IoError);
    const auto dir = scratch("load");
    std::ofstream(dir / "t.ini") << "[experiment]\nscenario = trajectory\nseed = 1\ninput_file = missing.sbs\n";
    CHECK_THROWS_AS(load_config((dir / "t.ini").string()), ConfigError);
}

TEST_CASE("midpoint_time") {
    CHECK(midpoint_time("12:00:00.500", "12:00:01.000") == "12:00:00.750");
    CHECK(midpoint_time("10:59:59", "11:00:01") == "11:00:00.000");
    CHECK(midpoint_time("23:59:59.000", "00:00:01.000") == "00:00:00.000");
    CHECK(midpoint_time("garbage", "12:00:00.000") == "12:00:00.000");
}

TEST_CASE("process_sbs_reports") {
    auto to_report = [](const PositionVector& v, std::uint32_t hex, int i) {
        PositionReport r;
        r.hex_ident = hex;
        r.longitude = v.lon;
        r.latitude = v.lat;
        r.altitude = static_cast<std::int64_t>(std::llround(v.alt));
        char t[32];
        std::snprintf(t, sizeof t, "12:%02d:%02d.000", i / 60, i % 60);
        r.generated_time = r.logged_time = t;
        r.generated_date = r.logged_date = "2026/10/15";
        return r;
    };
    const auto a = fixture::make_track(1, 60, fixture::Kinematics::accelerating, 0.2, 1e-3);
    const auto b = fixture::make_track(2, 40, fixture::Kinematics::varying_speed, 0.2, 1e-3);
    // Interleave the two aircraft.
    std::vector<PositionReport> feed;
    for (std::size_t i = 0; i < std::max(a.reports.size(), b.reports.size()); ++i) {
        if (i < a.reports.size()) feed.push_back(to_report(a.reports[i], 0xAAAAAA, static_cast<int>(i)));
        if (i < b.reports.size()) feed.push_back(to_report(b.reports[i], 0xBBBBBB, static_cast<int>(i)));
    }
    feed.push_back(to_report(a.reports[0], 0xCCCCCC, 0));  // too short: passes through

    const auto fleet = process_sbs_reports(feed, {});
    REQUIRE(fleet.optimized.size() == fleet.synthetic.size());
    CHECK(fleet.stats.input_count == feed.size());
    CHECK(fleet.optimized.size() == feed.size() - fleet.stats.abandoned_count + fleet.stats.supplemented_count);
    CHECK(fleet.optimized.back().hex_ident == 0xCCCCCC);
    // Supplements are tagged with their aircraft and precede a genuine report of the same aircraft.
    for (std::size_t i = 0; i < fleet.optimized.size(); ++i) {
        if (!fleet.synthetic[i]) continue;
        bool found = false;
        for (std::size_t j = i + 1; j < fleet.optimized.size() && !found; ++j)
            found = !fleet.synthetic[j] && fleet.optimized[j].hex_ident == fleet.optimized[i].hex_ident;
        CHECK(found);
    }
    const std::vector<PositionReport> tiny(feed.begin(), feed.begin() + 3);
    CHECK_THROWS_AS(process_sbs_reports(tiny, {}), ConfigError);
}

TEST_CASE("run_experiment: artifacts and determinism") {
    SUBCASE("a2g sweep grid and header") {
        auto c = parse_config(kMinimal + "[a2g]\nheight_step_m = 100\nfade_trials_count = 50\n");
        const auto dir = scratch("a2g");
        const auto summary = run_experiment(c, dir);
        const auto csv = slurp(dir / "a2g_sweep.csv");
        CHECK(csv.rfind("height_m,pl_db_nofade,pl_db_fade,snr_db\n", 0) == 0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 41);  // 0.5 to 4.5 km
        CHECK(csv.find("\n500,") != std::string::npos);
        CHECK(csv.find("\n4500,") != std::string::npos);
        const auto manifest = slurp(dir / "manifest.txt");
        CHECK(manifest.find("config_hash=" + summary.config_hash) != std::string::npos);
        CHECK(manifest.find("seed=1\n") != std::string::npos);
        CHECK(manifest.find("a2a.noise_density_dbm_per_hz=-174\n") != std::string::npos);
        CHECK(manifest.find("a2a.noise_density_dbm_per_hz.linear=") != std::string::npos);
    }
    SUBCASE("identical config twice gives identical bytes") {
        const auto c = parse_config(
            "[experiment]\nscenario = a2a_power\nseed = 5\n[a2a]\ntrials_count = 1000\n"
            "power_grid_w = 1, 20\nthreshold_grid_db = -14, -7\n");
        const auto d1 = scratch("det1"), d2 = scratch("det2");
        run_experiment(c, d1);
        run_experiment(c, d2);
        for (const char* f : {"a2a_power.csv", "deployment.csv", "manifest.txt"})
            CHECK(slurp(d1 / f) == slurp(d2 / f));
        CHECK(slurp(d1 / "a2a_power.csv").rfind("p_s_watts,theta_db,coverage_analytic,coverage_mc_sphere_law", 0) == 0);
    }
    SUBCASE("density scenario") {
        const auto c = parse_config(
            "[experiment]\nscenario = a2a_density\nseed = 5\n[a2a]\nsinr_trials_count = 20\ndensity_grid_count = 1, 30\n");
        const auto dir = scratch("density");
        run_experiment(c, dir);
        const auto csv = slurp(dir / "a2a_density.csv");
        CHECK(csv.rfind("density_count,mean_sinr_db,links_count\n", 0) == 0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    }
    SUBCASE("trajectory below the N+2 minimum") {
        const auto dir = scratch("short");
        std::ofstream(dir / "three.sbs")
            << "MSG,3,1,1,4840D6,1,2026/10/15,12:00:00.000,2026/10/15,12:00:00.000,,9000,,,39.9,116.3,,,0,0,0,0\n"
               "MSG,3,1,1,4840D6,1,2026/10/15,12:00:01.000,2026/10/15,12:00:01.000,,9010,,,39.901,116.301,,,0,0,0,0\n"
               "MSG,3,1,1,4840D6,1,2026/10/15,12:00:02.000,2026/10/15,12:00:02.000,,9020,,,39.902,116.302,,,0,0,0,0\n";
        std::ofstream(dir / "t.ini") << "[experiment]\nscenario = trajectory\nseed = 1\ninput_file = three.sbs\n";
        const auto c = load_config((dir / "t.ini").string());
        CHECK_THROWS_AS(run_experiment(c, dir / "out"), ConfigError);
    }
    SUBCASE("trajectory outputs") {
        const auto c = load_config(kConfigs + "/trajectory.ini");
        const auto dir = scratch("traj");
        run_experiment(c, dir);
        const auto stats = slurp(dir / "trajectory_stats.txt");
        CHECK(stats.find("abandoned_fraction=") != std::string::npos);
        const auto sbs = slurp(dir / "optimized.sbs");
        std::istringstream lines(sbs);
        std::string line;
        std::size_t n = 0;
        while (std::getline(lines, line)) {
            CHECK_NOTHROW(decode_sbs(line));
            ++n;
        }
        const auto csv = slurp(dir / "trajectory.csv");
        CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == n + 1);
    }
}

TEST_CASE("command-line exit codes") {
    const auto dir = scratch("cli");
    CHECK(run_cli("validate \"" + kConfigs + "/reference.ini\"") == 0);
    std::ofstream(dir / "bad.ini") << kMinimal << "[a2a]\np_s_w = -1\n";
    CHECK(run_cli("validate \"" + (dir / "bad.ini").string() + "\"") == 1);
    CHECK(run_cli("run \"" + (dir / "missing.ini").string() + "\"") == 3);
    CHECK(run_cli("frobnicate") == 1);
    CHECK(run_cli("run \"" + kConfigs + "/trajectory.ini\" --out \"" + (dir / "t").string() + "\"") == 0);
    CHECK(fs::exists(dir / "t" / "manifest.txt"));
    CHECK(run_cli("traj \"" + kConfigs + "/sample_track.sbs\" --n 5 --p 2 --out \"" + (dir / "u").string() + "\"") == 0);
    CHECK(slurp(dir / "t" / "optimized.sbs") == slurp(dir / "u" / "optimized.sbs"));
    CHECK(run_cli("traj \"" + (dir / "none.sbs").string() + "\" --out \"" + (dir / "v").string() + "\"") == 3);
    // Output path blocked by a regular file.
    std::ofstream(dir / "blocker") << "x";
    CHECK(run_cli("run \"" + kConfigs + "/trajectory.ini\" --out \"" + (dir / "blocker" / "sub").string() + "\"") == 3);
    std::ofstream(dir / "inverted.ini") << kMinimal << "[airspace]\ngs_height_m = 4000\n";
    CHECK(run_cli("validate \"" + (dir / "inverted.ini").string() + "\"") == 1);
    // Ground station beyond the radio horizon: the geometry solver fails mid-run.
    std::ofstream(dir / "horizon.ini") << kMinimal << "[a2g]\nground_arc_m = 1e6\nheight_step_m = 500\n";
    CHECK(run_cli("run \"" + (dir / "horizon.ini").string() + "\" --out \"" + (dir / "n").string() + "\"") == 2);
}
