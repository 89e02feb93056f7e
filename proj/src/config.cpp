#include "surveil/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "surveil/error.hpp"
#include "surveil/units.hpp"

namespace surveil {

const char* to_string(Scenario scenario) {
    switch (scenario) {
        case Scenario::a2g_sweep: return "a2g_sweep";
        case Scenario::a2a_density: return "a2a_density";
        case Scenario::a2a_power: return "a2a_power";
        case Scenario::a2a_pathloss: return "a2a_pathloss";
        case Scenario::trajectory: return "trajectory";
    }
    return "?";
}

A2GParams A2GSettings::params(double gs_height) const {
    A2GParams p = layer == Layer::low ? five_g : adsb;
    p.gs_height = gs_height;
    return p;
}

std::vector<double> A2GSettings::heights() const {
    std::vector<double> out;
    const auto steps = static_cast<long>(std::floor((height_max - height_min) / height_step + 1e-9));
    for (long i = 0; i <= steps; ++i) out.push_back(height_min + static_cast<double>(i) * height_step);
    return out;
}

A2AScenario ExperimentConfig::a2a_scenario(double expected_count) const {
    A2AScenario s = a2a.base;
    s.box = airspace.layer_box(a2a.layer);
    s.density = intensity_from_count(expected_count, s.box);
    return s;
}

namespace {

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;
using Getter = std::function<std::string(const ExperimentConfig&)>;

struct Key {
    std::string name;  // section.key
    Setter set;
    Getter get;
};

// Values are reported through this so that every failure names the offending key.
struct ValueError {
    std::string what;
};

std::string_view trim(std::string_view s) {
    const auto blank = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && blank(s.front())) s.remove_prefix(1);
    while (!s.empty() && blank(s.back())) s.remove_suffix(1);
    return s;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double to_number(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw ValueError{"malformed number '" + std::string(text) + "'"};
    if (!std::isfinite(v)) throw ValueError{"value must be finite"};
    return v;
}

std::uint64_t to_unsigned(std::string_view text) {
    text = trim(text);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw ValueError{"expected a non-negative integer, got '" + std::string(text) + "'"};
    return v;
}

std::vector<double> to_list(std::string_view text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        out.push_back(to_number(text.substr(start, comma == text.npos ? text.npos : comma - start)));
        if (comma == text.npos) break;
        start = comma + 1;
    }
    return out;
}

std::string from_list(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + fmt(values[i]);
    return out;
}

double positive(double v) {
    if (!(v > 0)) throw ValueError{"must be > 0"};
    return v;
}

double non_negative(double v) {
    if (!(v >= 0)) throw ValueError{"must be >= 0"};
    return v;
}

Layer to_layer(std::string_view text) {
    text = trim(text);
    if (text == "low") return Layer::low;
    if (text == "high") return Layer::high;
    throw ValueError{"layer must be 'low' or 'high'"};
}

bool to_bool(std::string_view text) {
    text = trim(text);
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw ValueError{"expected true or false"};
}

// Descriptor helpers. `member` projects the config onto the stored double.
template <class Project>
Key real(std::string name, Project member, double (*check)(double) = nullptr) {
    return {std::move(name),
            [member, check](ExperimentConfig& c, std::string_view v) {
                double x = to_number(v);
                if (check) x = check(x);
                member(c) = x;
            },
            [member](const ExperimentConfig& c) { return fmt(member(const_cast<ExperimentConfig&>(c))); }};
}

// dB-valued key stored linearly.
template <class Project>
Key decibel(std::string name, Project member, double (*to_linear)(double), double (*to_db)(double)) {
    return {std::move(name),
            [member, to_linear](ExperimentConfig& c, std::string_view v) { member(c) = to_linear(to_number(v)); },
            [member, to_db](const ExperimentConfig& c) { return fmt(to_db(member(const_cast<ExperimentConfig&>(c)))); }};
}

template <class Project>
Key count(std::string name, Project member, std::uint64_t minimum) {
    return {std::move(name),
            [member, minimum](ExperimentConfig& c, std::string_view v) {
                const auto n = to_unsigned(v);
                if (n < minimum) throw ValueError{"must be >= " + std::to_string(minimum)};
                member(c) = static_cast<std::size_t>(n);
            },
            [member](const ExperimentConfig& c) {
                return std::to_string(member(const_cast<ExperimentConfig&>(c)));
            }};
}

template <class Project>
Key list(std::string name, Project member, double (*check)(double) = nullptr) {
    return {std::move(name),
            [member, check](ExperimentConfig& c, std::string_view v) {
                auto values = to_list(v);
                if (check)
                    for (auto& x : values) x = check(x);
                member(c) = std::move(values);
            },
            [member](const ExperimentConfig& c) { return from_list(member(const_cast<ExperimentConfig&>(c))); }};
}

double watts_per_hz_to_dbm(double w) { return watts_to_dbm(w); }

double path_loss_exponent(double v) {
    if (!(v >= 2.0 && v <= 4.9)) throw ValueError{"must lie in [2, 4.9]"};
    return v;
}

const std::vector<Key>& keys() {
    static const std::vector<Key> table = [] {
        std::vector<Key> k;
        // [experiment]
        k.push_back({"experiment.scenario",
                     [](ExperimentConfig& c, std::string_view v) {
                         v = trim(v);
                         for (auto s : {Scenario::a2g_sweep, Scenario::a2a_density, Scenario::a2a_power,
                                        Scenario::a2a_pathloss, Scenario::trajectory})
                             if (v == to_string(s)) {
                                 c.scenario = s;
                                 return;
                             }
                         throw ValueError{"unknown scenario '" + std::string(v) +
                                          "' (a2g_sweep, a2a_density, a2a_power, a2a_pathloss, trajectory)"};
                     },
                     [](const ExperimentConfig& c) { return std::string(to_string(c.scenario)); }});
        k.push_back({"experiment.seed",
                     [](ExperimentConfig& c, std::string_view v) { c.seed = to_unsigned(v); },
                     [](const ExperimentConfig& c) { return std::to_string(c.seed); }});
        k.push_back({"experiment.input_file",
                     [](ExperimentConfig& c, std::string_view v) { c.input_file = std::string(trim(v)); },
                     [](const ExperimentConfig& c) { return c.input_file; }});
        k.push_back({"experiment.output_dir",
                     [](ExperimentConfig& c, std::string_view v) { c.output_dir = std::string(trim(v)); },
                     [](const ExperimentConfig& c) { return c.output_dir; }});

        // [airspace]
        k.push_back(real("airspace.half_extent_x_m", [](auto& c) -> double& { return c.airspace.half_extent_x; }, positive));
        k.push_back(real("airspace.half_extent_y_m", [](auto& c) -> double& { return c.airspace.half_extent_y; }, positive));
        k.push_back(real("airspace.layer_thickness_m", [](auto& c) -> double& { return c.airspace.layer_thickness; }, positive));
        k.push_back(real("airspace.isolation_thickness_m", [](auto& c) -> double& { return c.airspace.isolation_thickness; }, positive));
        k.push_back(real("airspace.density_low_count", [](auto& c) -> double& { return c.density_low_count; }, non_negative));
        k.push_back(real("airspace.density_high_count", [](auto& c) -> double& { return c.density_high_count; }, non_negative));
        k.push_back(real("airspace.gs_x_m", [](auto& c) -> double& { return c.airspace.gs_position.x; }));
        k.push_back(real("airspace.gs_y_m", [](auto& c) -> double& { return c.airspace.gs_position.y; }));
        k.push_back(real("airspace.gs_height_m", [](auto& c) -> double& { return c.airspace.gs_position.z; }, positive));
        k.push_back(real("airspace.central_low_height_m", [](auto& c) -> double& { return c.airspace.central_low_height; }));
        k.push_back(real("airspace.central_high_height_m", [](auto& c) -> double& { return c.airspace.central_high_height; }));
        k.push_back(real("airspace.central_offset_x_m", [](auto& c) -> double& { return c.airspace.central_offset_x; }));
        k.push_back(real("airspace.central_offset_y_m", [](auto& c) -> double& { return c.airspace.central_offset_y; }));
        k.push_back(real("airspace.max_service_range_m", [](auto& c) -> double& { return c.airspace.max_service_range; }, positive));

        // [a2g]; values shared by both radios are written to both parameter sets.
        k.push_back({"a2g.layer",
                     [](ExperimentConfig& c, std::string_view v) { c.a2g.layer = to_layer(v); },
                     [](const ExperimentConfig& c) { return std::string(to_string(c.a2g.layer)); }});
        auto both = [&k](std::string name, double A2GParams::*field, double (*check)(double)) {
            k.push_back({name,
                         [field, check](ExperimentConfig& c, std::string_view v) {
                             double x = to_number(v);
                             if (check) x = check(x);
                             c.a2g.five_g.*field = x;
                             c.a2g.adsb.*field = x;
                         },
                         [field](const ExperimentConfig& c) { return fmt(c.a2g.five_g.*field); }});
        };
        both("a2g.earth_radius_m", &A2GParams::earth_radius, positive);
        both("a2g.rel_permittivity", &A2GParams::rel_permittivity, positive);
        both("a2g.conductivity_s_per_m", &A2GParams::conductivity, non_negative);
        both("a2g.beamwidth_rad", &A2GParams::beamwidth, positive);
        both("a2g.rice_factor", &A2GParams::rice_factor, non_negative);
        k.push_back({"a2g.gain_dbi",
                     [](ExperimentConfig& c, std::string_view v) {
                         c.a2g.five_g.total_gain = c.a2g.adsb.total_gain = db_to_linear(to_number(v));
                     },
                     [](const ExperimentConfig& c) { return fmt(linear_to_db(c.a2g.five_g.total_gain)); }});
        k.push_back({"a2g.noise_density_dbm_per_hz",
                     [](ExperimentConfig& c, std::string_view v) {
                         c.a2g.five_g.noise_density = c.a2g.adsb.noise_density = dbm_to_watts(to_number(v));
                     },
                     [](const ExperimentConfig& c) { return fmt(watts_per_hz_to_dbm(c.a2g.five_g.noise_density)); }});
        k.push_back(real("a2g.frequency_5g_hz", [](auto& c) -> double& { return c.a2g.five_g.frequency; }, positive));
        k.push_back(real("a2g.bandwidth_5g_hz", [](auto& c) -> double& { return c.a2g.five_g.bandwidth; }, positive));
        k.push_back(real("a2g.tx_power_low_w", [](auto& c) -> double& { return c.a2g.five_g.tx_power; }, positive));
        k.push_back(real("a2g.frequency_adsb_hz", [](auto& c) -> double& { return c.a2g.adsb.frequency; }, positive));
        k.push_back(real("a2g.bandwidth_adsb_hz", [](auto& c) -> double& { return c.a2g.adsb.bandwidth; }, positive));
        k.push_back(real("a2g.tx_power_high_w", [](auto& c) -> double& { return c.a2g.adsb.tx_power; }, positive));
        k.push_back(real("a2g.ground_arc_m", [](auto& c) -> double& { return c.a2g.ground_arc; }, positive));
        k.push_back(real("a2g.height_min_m", [](auto& c) -> double& { return c.a2g.height_min; }, positive));
        k.push_back(real("a2g.height_max_m", [](auto& c) -> double& { return c.a2g.height_max; }, positive));
        k.push_back(real("a2g.height_step_m", [](auto& c) -> double& { return c.a2g.height_step; }, positive));
        k.push_back(count("a2g.fade_trials_count", [](auto& c) -> std::size_t& { return c.a2g.fade_trials; }, 1));

        // [a2a]
        k.push_back({"a2a.layer",
                     [](ExperimentConfig& c, std::string_view v) { c.a2a.layer = to_layer(v); },
                     [](const ExperimentConfig& c) { return std::string(to_string(c.a2a.layer)); }});
        k.push_back(real("a2a.p_s_w", [](auto& c) -> double& { return c.a2a.base.sub_tx_power; }, positive));
        k.push_back(decibel("a2a.gain_dbi", [](auto& c) -> double& { return c.a2a.base.total_gain; }, db_to_linear, linear_to_db));
        k.push_back(decibel("a2a.noise_density_dbm_per_hz", [](auto& c) -> double& { return c.a2a.noise_density; }, dbm_to_watts, watts_per_hz_to_dbm));
        k.push_back(real("a2a.bandwidth_hz", [](auto& c) -> double& { return c.a2a.bandwidth; }, positive));
        k.push_back(real("a2a.path_loss_exponent", [](auto& c) -> double& { return c.a2a.base.path_loss_exponent; }, path_loss_exponent));
        k.push_back(decibel("a2a.threshold_db", [](auto& c) -> double& { return c.a2a.base.threshold; }, db_to_linear, linear_to_db));
        k.push_back(real("a2a.fading_shape", [](auto& c) -> double& { return c.a2a.base.fading_shape; }, positive));
        k.push_back(list("a2a.density_grid_count", [](auto& c) -> std::vector<double>& { return c.a2a.density_grid; }, non_negative));
        k.push_back(list("a2a.power_grid_w", [](auto& c) -> std::vector<double>& { return c.a2a.power_grid_w; }, positive));
        k.push_back(list("a2a.threshold_grid_db", [](auto& c) -> std::vector<double>& { return c.a2a.threshold_grid_db; }));
        k.push_back(list("a2a.delta_grid", [](auto& c) -> std::vector<double>& { return c.a2a.delta_grid; }, path_loss_exponent));
        k.push_back(count("a2a.trials_count", [](auto& c) -> std::size_t& { return c.a2a.trials; }, 1000));
        k.push_back(count("a2a.sinr_trials_count", [](auto& c) -> std::size_t& { return c.a2a.sinr_trials; }, 1));
        k.push_back({"a2a.mc_mode",
                     [](ExperimentConfig& c, std::string_view v) {
                         v = trim(v);
                         if (v == "sphere_law") c.a2a.mc_mode = GeometryMode::sphere_law;
                         else if (v == "box") c.a2a.mc_mode = GeometryMode::box;
                         else throw ValueError{"mc_mode must be 'sphere_law' or 'box'"};
                     },
                     [](const ExperimentConfig& c) { return std::string(to_string(c.a2a.mc_mode)); }});

        // [mec]
        k.push_back(count("mec.window_n", [](auto& c) -> std::size_t& { return c.mec.window; }, 2));
        k.push_back({"mec.order_p",
                     [](ExperimentConfig& c, std::string_view v) {
                         v = trim(v);
                         if (v == "inf") {
                             c.mec.order = std::numeric_limits<double>::infinity();
                             return;
                         }
                         const double p = to_number(v);
                         if (!(p >= 1.0)) throw ValueError{"must be >= 1"};
                         c.mec.order = p;
                     },
                     [](const ExperimentConfig& c) { return std::isinf(c.mec.order) ? std::string("inf") : fmt(c.mec.order); }});
        k.push_back(real("mec.degeneracy_threshold", [](auto& c) -> double& { return c.mec.degeneracy_threshold; }, positive));
        k.push_back({"mec.metric_normalization",
                     [](ExperimentConfig& c, std::string_view v) { c.mec.metric_normalization = to_bool(v); },
                     [](const ExperimentConfig& c) { return std::string(c.mec.metric_normalization ? "true" : "false"); }});
        return k;
    }();
    return table;
}

const Key* find_key(std::string_view name) {
    for (const auto& k : keys())
        if (k.name == name) return &k;
    return nullptr;
}

void refresh_entries(ExperimentConfig& c) {
    c.entries.clear();
    for (const auto& k : keys()) c.entries[k.name] = k.get(c);
}

// Cross-field checks once every key is known.
void finish(ExperimentConfig& c) {
    c.airspace.density_low = intensity_from_count(c.density_low_count, c.airspace.layer_box(Layer::low));
    c.airspace.density_high =
        intensity_from_count(c.density_high_count, c.airspace.layer_box(Layer::high));
    c.airspace.validate();
    c.a2g.five_g.gs_height = c.a2g.adsb.gs_height = c.airspace.gs_position.z;
    c.a2g.five_g.uav_height = c.airspace.central_low_height;
    c.a2g.adsb.uav_height = c.airspace.central_high_height;
    c.a2g.five_g.validate();
    c.a2g.adsb.validate();
    if (c.a2g.height_max < c.a2g.height_min) throw ConfigError("a2g: height_max_m must be >= height_min_m");
    if (!(c.a2g.height_min > c.airspace.gs_position.z))
        throw ConfigError("a2g: height_min_m must exceed the ground-station height");
    c.a2a.base.noise_power = c.a2a.noise_density * c.a2a.bandwidth;
    c.a2a_scenario(1.0).validate();
    for (auto* grid : {&c.a2a.density_grid, &c.a2a.power_grid_w, &c.a2a.threshold_grid_db, &c.a2a.delta_grid})
        if (grid->empty()) throw ConfigError("a2a: sweep grids must not be empty");
    if (c.scenario == Scenario::trajectory && c.input_file.empty())
        throw ConfigError("experiment.input_file is required for the trajectory scenario");
    refresh_entries(c);
}

}  // namespace

void ExperimentConfig::set_seed(std::uint64_t value) {
    seed = value;
    refresh_entries(*this);
}

void ExperimentConfig::set_trials(std::size_t trials) {
    if (trials < 1000) throw ConfigError("--trials must be >= 1000");
    a2a.trials = trials;
    a2a.sinr_trials = trials;
    a2g.fade_trials = trials;
    refresh_entries(*this);
}

std::vector<std::string> known_keys() {
    std::vector<std::string> out;
    for (const auto& k : keys()) out.push_back(k.name);
    return out;
}

ExperimentConfig parse_config(std::string_view text) {
    static const std::set<std::string> sections{"experiment", "airspace", "a2g", "a2a", "mec"};
    static const std::vector<std::string> required{"experiment.scenario", "experiment.seed"};

    ExperimentConfig c;
    std::set<std::string> seen;
    std::string section;
    std::size_t line_no = 0;
    std::size_t start = 0;
    auto fail = [&](const std::string& what) {
        throw ConfigError("line " + std::to_string(line_no) + ": " + what);
    };
    while (start < text.size()) {
        const auto end = text.find('\n', start);
        std::string_view line = text.substr(start, end == text.npos ? text.npos : end - start);
        start = end == text.npos ? text.size() : end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != line.npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail("unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!sections.count(section)) fail("unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == line.npos) fail("expected 'key = value'");
        if (section.empty()) fail("key outside of any [section]");
        const std::string name = section + "." + std::string(trim(line.substr(0, eq)));
        const auto value = trim(line.substr(eq + 1));
        const Key* key = find_key(name);
        if (!key) fail("unknown key '" + name + "'");
        if (!seen.insert(name).second) fail("duplicate key '" + name + "'");
        try {
            key->set(c, value);
        } catch (const ValueError& e) {
            fail(name + ": " + e.what);
        }
    }
    std::string missing;
    for (const auto& r : required)
        if (!seen.count(r)) missing += (missing.empty() ? "" : ", ") + r;
    if (!missing.empty()) throw ConfigError("missing required keys: " + missing);
    finish(c);
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    ExperimentConfig c = parse_config(text.str());
    if (!c.input_file.empty()) {
        std::filesystem::path input(c.input_file);
        if (input.is_relative()) input = std::filesystem::path(path).parent_path() / input;
        if (!std::filesystem::exists(input))
            throw ConfigError("experiment.input_file: '" + input.string() + "' does not exist");
        c.input_file = input.lexically_normal().string();
    }
    return c;
}

}  // namespace surveil
