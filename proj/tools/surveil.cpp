// surveil: command-line front end for the sweep runner and the trajectory processor.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "surveil/config.hpp"
#include "surveil/error.hpp"
#include "surveil/experiment.hpp"

namespace {

enum Exit { kOk = 0, kConfig = 1, kNumerical = 2, kIo = 3 };

template <class Body>
int guarded(Body&& body) {
    try {
        body();
        return kOk;
    } catch (const surveil::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const surveil::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kConfig;
    } catch (const surveil::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << " (estimate " << e.estimate
                  << ", error bound " << e.error_bound << ")\n";
        return kNumerical;
    } catch (const surveil::GeometryError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const surveil::DomainError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const surveil::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIo;
    }
}

std::string order_text(double p) {
    if (std::isinf(p)) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", p);
    return buf;
}

void report(const surveil::RunSummary& summary) {
    std::cout << "config_hash " << summary.config_hash << '\n';
    for (const auto& a : summary.artifacts) std::cout << "wrote " << a.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"UAV surveillance network toolkit"};
    app.set_version_flag("--version", SURVEIL_VERSION_STRING);
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    auto* run = app.add_subcommand("run", "Run the scenario described by a config file");
    run->add_option("config", config_path, "Config file")->required();
    run->add_option("--out", out_dir, "Output directory (overrides experiment.output_dir)");
    run->add_option("--seed", seed, "RNG seed (overrides experiment.seed)");
    run->add_option("--trials", trials, "Monte Carlo trial count for every stochastic stage");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Parse and check a config file");
    validate->add_option("config", validate_path, "Config file")->required();

    std::string sbs_path;
    std::size_t window = 5;
    double order = 2.0;
    std::string traj_out = "out";
    auto* traj = app.add_subcommand("traj", "On-board processing of an SBS position feed");
    traj->add_option("sbs-file", sbs_path, "SBS (MSG,3) input")->required();
    traj->add_option("--n", window, "Minkowski window size N")->capture_default_str();
    traj->add_option("--p", order, "Minkowski order p")->capture_default_str();
    traj->add_option("--out", traj_out, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    if (*run) {
        return guarded([&] {
            auto config = surveil::load_config(config_path);
            if (seed) config.set_seed(*seed);
            if (trials) config.set_trials(*trials);
            report(surveil::run_experiment(config, out_dir ? *out_dir : config.output_dir));
        });
    }
    if (*validate) {
        return guarded([&] {
            const auto config = surveil::load_config(validate_path);
            std::cout << "ok: scenario " << surveil::to_string(config.scenario) << ", hash "
                      << surveil::config_hash(config) << '\n';
        });
    }
    return guarded([&] {
        if (!std::filesystem::exists(sbs_path)) throw surveil::IoError("no such file '" + sbs_path + "'");
        std::string text = "[experiment]\nscenario = trajectory\nseed = 0\ninput_file = " + sbs_path +
                           "\n[mec]\nwindow_n = " + std::to_string(window) + "\norder_p = " +
                           order_text(order) + "\n";
        auto config = surveil::parse_config(text);
        report(surveil::run_experiment(config, traj_out));
    });
}
