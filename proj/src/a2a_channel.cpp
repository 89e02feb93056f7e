#include "surveil/a2a_channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "surveil/error.hpp"
#include "surveil/kernels.hpp"
#include "surveil/units.hpp"

namespace surveil {

using boost::math::interpolators::cardinal_cubic_b_spline;

const char* to_string(GeometryMode mode) {
    return mode == GeometryMode::sphere_law ? "sphere_law" : "box";
}

void A2AScenario::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError("a2a: " + what);
    };
    const double values[] = {sub_tx_power, total_gain, noise_power, path_loss_exponent,
                             threshold,    density,    fading_shape};
    for (double v : values) require(std::isfinite(v), "non-finite value");
    require(sub_tx_power > 0, "sub-UAV power must be > 0");
    require(total_gain > 0, "gain must be > 0");
    require(noise_power >= 0, "noise power must be >= 0");
    require(path_loss_exponent >= 2.0 && path_loss_exponent <= 4.9,
            "path-loss exponent must lie in [2, 4.9]");
    require(threshold > 0, "threshold must be > 0 (linear)");
    require(density >= 0, "density must be >= 0");
    require(fading_shape > 0, "fading shape must be > 0");
    require(box.volume() > 0, "layer box must have positive volume");
}

double sample_fading(double shape, Engine& rng) {
    std::gamma_distribution<double> gamma(shape, 1.0 / shape);
    double g = 0.0;
    while (!(g > 0.0)) g = gamma(rng);
    return g;
}

double sinr_from_gains(const A2AScenario& s, double desired_distance, double desired_gain,
                       std::span<const double> interferer_distances,
                       std::span<const double> interferer_gains) {
    if (!(desired_distance > 0)) throw DomainError("desired distance must be > 0");
    if (interferer_distances.size() != interferer_gains.size())
        throw DomainError("one fading gain per interferer is required");
    const double delta = s.path_loss_exponent;
    double interference = 0.0;
    for (std::size_t i = 0; i < interferer_distances.size(); ++i) {
        const double d = interferer_distances[i];
        if (!(d > 0)) throw DomainError("interferer co-located with the central UAV");
        interference += s.total_gain * interferer_gains[i] * std::pow(d, -delta);
    }
    const double signal = s.sub_tx_power * s.total_gain * desired_gain * std::pow(desired_distance, -delta);
    return signal / (s.noise_power + s.sub_tx_power * interference);
}

double sinr_realization(const A2AScenario& s, double desired_distance,
                        std::span<const double> interferer_distances, Engine& rng) {
    const double desired_gain = sample_fading(s.fading_shape, rng);
    std::vector<double> gains(interferer_distances.size());
    for (auto& g : gains) g = sample_fading(s.fading_shape, rng);
    return sinr_from_gains(s, desired_distance, desired_gain, interferer_distances, gains);
}

double sinr_realization(const A2AScenario& s, double desired_distance,
                        std::span<const double> interferer_distances, std::uint64_t seed) {
    auto rng = make_stream(seed, stream_tag("a2a/sinr_realization"));
    return sinr_realization(s, desired_distance, interferer_distances, rng);
}

CoverageResult coverage_monte_carlo(const A2AScenario& s, Vec3 central, std::size_t trials,
                                    std::uint64_t seed, GeometryMode mode, Execution exec) {
    s.validate();
    if (trials < 1000) throw DomainError("coverage Monte Carlo needs at least 1000 trials");
    const std::size_t hits = exec == Execution::parallel
                                 ? kernels::coverage_hits_parallel(s, central, trials, seed, mode)
                                 : kernels::coverage_hits_serial(s, central, trials, seed, mode);
    CoverageResult r;
    r.method = CoverageMethod::monte_carlo;
    r.trials = trials;
    r.probability = static_cast<double>(hits) / static_cast<double>(trials);
    r.std_error = std::sqrt(r.probability * (1.0 - r.probability) / static_cast<double>(trials));
    return r;
}

// ---------------------------------------------------------------------------------------
// Radial profile

namespace {

constexpr double kProfileLogStep = 0.02;
constexpr double kProfileTMin = 1e-4;
constexpr double kProfileTMax = 1e9;

}  // namespace

struct RadialProfile::Spline {
    cardinal_cubic_b_spline<double> log_j;
};

RadialProfile::RadialProfile(double delta)
    : delta_(delta), log_t_min_(std::log(kProfileTMin)), log_t_max_(std::log(kProfileTMax)) {
    if (!(delta >= 2.0 && delta <= 4.9))
        throw DomainError("path-loss exponent must lie in [2, 4.9]");
    const auto n = static_cast<std::size_t>(std::ceil((log_t_max_ - log_t_min_) / kProfileLogStep)) + 1;
    const double step = (log_t_max_ - log_t_min_) / static_cast<double>(n - 1);
    auto integrand = [delta](double t) { return t * t / (1.0 + std::pow(t, delta)); };

    std::vector<double> log_j(n);
    double t_prev = kProfileTMin;
    double j = std::pow(t_prev, 3) / 3.0 - std::pow(t_prev, 3.0 + delta) / (3.0 + delta);
    log_j[0] = std::log(j);
    for (std::size_t k = 1; k < n; ++k) {
        const double t = std::exp(log_t_min_ + step * static_cast<double>(k));
        j += boost::math::quadrature::gauss<double, 20>::integrate(integrand, t_prev, t);
        log_j[k] = std::log(j);
        t_prev = t;
    }
    j_max_ = j;
    log_t_max_ = log_t_min_ + step * static_cast<double>(n - 1);
    spline_ = std::make_shared<const Spline>(
        Spline{cardinal_cubic_b_spline<double>(log_j.begin(), log_j.end(), log_t_min_, step)});
}

double RadialProfile::unit(double t) const {
    if (!(t > 0)) return 0.0;
    if (t < kProfileTMin)
        return std::pow(t, 3) / 3.0 - std::pow(t, 3.0 + delta_) / (3.0 + delta_);
    const double lt = std::log(t);
    if (lt <= log_t_max_) return std::exp(spline_->log_j(lt));
    // Far tail: t^2 / (1 + t^delta) ~ t^(2 - delta).
    const double t_max = std::exp(log_t_max_);
    if (delta_ == 3.0) return j_max_ + std::log(t / t_max);
    return j_max_ + (std::pow(t, 3.0 - delta_) - std::pow(t_max, 3.0 - delta_)) / (3.0 - delta_);
}

double RadialProfile::operator()(double c, double radius) const {
    if (!(c > 0) || !(radius > 0)) return 0.0;
    const double k = std::pow(c, 1.0 / delta_);
    return k * k * k * unit(radius / k);
}

// ---------------------------------------------------------------------------------------
// Interference integral

double interference_integral(const Box& box, Vec3 central, const RadialProfile& profile,
                             double c, const CubatureOptions& options, Execution exec) {
    if (!box.contains(central)) throw DomainError("central UAV must lie inside the layer box");
    if (!(c >= 0)) throw DomainError("Laplace argument must be >= 0");
    if (c == 0.0) return 0.0;
    const std::size_t half_nodes = options.nodes / 2;
    auto theta = [&](std::size_t nodes) {
        return exec == Execution::parallel
                   ? kernels::theta_parallel(box, central, profile, c, nodes)
                   : kernels::theta_serial(box, central, profile, c, nodes);
    };
    const double full = theta(options.nodes);
    const double coarse = theta(half_nodes);
    const double gap = std::abs(full - coarse);
    if (gap > options.rel_tolerance * std::abs(full))
        throw NumericalError("interference integral did not converge", full, gap);
    return full;
}

double interference_integral(const Box& box, Vec3 central, double delta, double c,
                             const CubatureOptions& options, Execution exec) {
    return interference_integral(box, central, RadialProfile(delta), c, options, exec);
}

double laplace_interference(const A2AScenario& s, double lambda_arg, Vec3 central,
                            const CubatureOptions& options) {
    s.validate();
    if (!(lambda_arg >= 0)) throw DomainError("Laplace argument must be >= 0");
    if (s.density == 0.0 || lambda_arg == 0.0) return 1.0;
    const double theta = interference_integral(s.box, central, s.path_loss_exponent,
                                               lambda_arg * s.total_gain, options);
    return std::exp(-s.density * theta);
}

// ---------------------------------------------------------------------------------------
// Interference table

struct InterferenceTable::Spline {
    cardinal_cubic_b_spline<double> log_theta;
};

namespace {

double grid_step(double lo, double hi, std::size_t nodes) {
    return (hi - lo) / static_cast<double>(nodes - 1);
}

}  // namespace

InterferenceTable::InterferenceTable(const Box& box, Vec3 central, double delta, double c_min,
                                     double c_max, std::size_t nodes,
                                     const CubatureOptions& options)
    : box_(box), central_(central), profile_(delta), options_(options) {
    if (!(c_min > 0 && c_max > c_min)) throw DomainError("need 0 < c_min < c_max");
    if (nodes < 5) throw DomainError("interference table needs at least 5 nodes");
    log_c_min_ = std::log(c_min);
    log_c_max_ = std::log(c_max);
    const double step = grid_step(log_c_min_, log_c_max_, nodes);
    log_theta_.resize(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
        const double c = std::exp(log_c_min_ + step * static_cast<double>(k));
        log_theta_[k] = std::log(interference_integral(box_, central_, profile_, c, options_));
    }
    build_spline();
}

InterferenceTable::InterferenceTable(const Box& box, Vec3 central, const RadialProfile& profile,
                                     double log_c_min, double log_c_max,
                                     std::vector<double> log_theta, CubatureOptions options)
    : box_(box),
      central_(central),
      profile_(profile),
      log_c_min_(log_c_min),
      log_c_max_(log_c_max),
      log_theta_(std::move(log_theta)),
      options_(options) {
    build_spline();
}

void InterferenceTable::build_spline() {
    const double step = grid_step(log_c_min_, log_c_max_, log_theta_.size());
    spline_ = std::make_shared<const Spline>(Spline{cardinal_cubic_b_spline<double>(
        log_theta_.begin(), log_theta_.end(), log_c_min_, step)});
}

double InterferenceTable::operator()(double c) const {
    if (!(c > 0)) return 0.0;
    const double lc = std::log(c);
    const double step = grid_step(log_c_min_, log_c_max_, log_theta_.size());
    const std::size_t n = log_theta_.size();
    if (lc < log_c_min_) {
        const double slope = (log_theta_[1] - log_theta_[0]) / step;
        return std::exp(log_theta_[0] + slope * (lc - log_c_min_));
    }
    if (lc > log_c_max_) {
        const double slope = (log_theta_[n - 1] - log_theta_[n - 2]) / step;
        return std::min(box_.volume(), std::exp(log_theta_[n - 1] + slope * (lc - log_c_max_)));
    }
    return std::exp(spline_->log_theta(lc));
}

InterferenceTable InterferenceTable::refined() const {
    const std::size_t n = log_theta_.size();
    const double fine = 0.5 * grid_step(log_c_min_, log_c_max_, n);
    std::vector<double> out(2 * n - 1);
    for (std::size_t k = 0; k < n; ++k) out[2 * k] = log_theta_[k];
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double c = std::exp(log_c_min_ + fine * static_cast<double>(2 * k + 1));
        out[2 * k + 1] = std::log(interference_integral(box_, central_, profile_, c, options_));
    }
    return InterferenceTable(box_, central_, profile_, log_c_min_, log_c_max_, std::move(out),
                             options_);
}

// ---------------------------------------------------------------------------------------
// Analytic coverage

namespace {

void require_rayleigh(const A2AScenario& s) {
    if (s.fading_shape != 1.0)
        throw ConfigError("a2a: analytic coverage supports Rayleigh fading (shape 1) only");
}

}  // namespace

CoverageResult coverage_analytic(const A2AScenario& s, Vec3 /*central*/, double max_distance,
                                 const InterferenceTable& table, const AnalyticOptions& options) {
    s.validate();
    require_rayleigh(s);
    if (!(max_distance > 0)) throw DomainError("max distance must be > 0");
    if (table.delta() != s.path_loss_exponent)
        throw DomainError("interference table built for a different path-loss exponent");

    CoverageResult r;
    r.method = CoverageMethod::analytic;
    const double lambda = s.density;
    if (lambda == 0.0) return r;

    const double delta = s.path_loss_exponent;
    const double noise_coeff = s.threshold * s.noise_power / (s.sub_tx_power * s.total_gain);
    const double ball = 4.0 / 3.0 * kPi * lambda;
    // u = (4/3) pi lambda d^3 turns the nearest-neighbour density into e^-u du.
    const double upper = std::min(ball * std::pow(max_distance, 3), 745.0);
    auto integrand = [&](double u) {
        if (u <= 0.0) return 1.0;
        const double d = std::cbrt(u / ball);
        const double dd = std::pow(d, delta);
        return std::exp(-u - noise_coeff * dd - lambda * table(s.threshold * dd));
    };
    double error = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, 0.0, upper, 15, options.quadrature_tolerance, &error);
    if (error > options.max_quadrature_error)
        throw NumericalError("coverage quadrature missed its tolerance", value, error);
    r.probability = std::clamp(value, 0.0, 1.0);
    r.std_error = error;
    return r;
}

InterferenceTable make_interference_table(const A2AScenario& s, Vec3 central,
                                          double max_distance, double theta_min,
                                          double theta_max, const AnalyticOptions& options) {
    s.validate();
    require_rayleigh(s);
    if (!(theta_min > 0 && theta_max >= theta_min)) throw DomainError("need 0 < theta_min <= theta_max");
    const double delta = s.path_loss_exponent;
    const double nn_scale =
        s.density > 0 ? std::cbrt(3.0 / (4.0 * kPi * s.density)) : max_distance;
    const double d_lo = 1e-3 * std::min(max_distance, nn_scale);
    const double c_min = theta_min * std::pow(d_lo, delta);
    const double c_max = theta_max * std::pow(max_distance, delta);

    InterferenceTable table(s.box, central, delta, c_min, c_max, options.initial_nodes,
                            options.cubature);
    auto coverage_at = [&](const InterferenceTable& t, double theta) {
        A2AScenario probe = s;
        probe.threshold = theta;
        return coverage_analytic(probe, central, max_distance, t, options).probability;
    };
    if (s.density == 0.0) return table;
    double change = std::numeric_limits<double>::infinity();
    while (table.nodes() < options.max_nodes) {
        InterferenceTable finer = table.refined();
        change = std::max(std::abs(coverage_at(finer, theta_min) - coverage_at(table, theta_min)),
                          std::abs(coverage_at(finer, theta_max) - coverage_at(table, theta_max)));
        table = std::move(finer);
        if (change < options.refine_tolerance) return table;
    }
    throw NumericalError("interference table refinement did not settle",
                         coverage_at(table, theta_min), change);
}

CoverageResult coverage_analytic(const A2AScenario& s, Vec3 central, double max_distance,
                                 const AnalyticOptions& options) {
    s.validate();
    require_rayleigh(s);
    if (!(max_distance > 0)) throw DomainError("max distance must be > 0");
    if (s.density == 0.0) return CoverageResult{};
    const auto table =
        make_interference_table(s, central, max_distance, s.threshold, s.threshold, options);
    return coverage_analytic(s, central, max_distance, table, options);
}

// ---------------------------------------------------------------------------------------
// Mean SINR

std::vector<double> link_sinrs(const A2AScenario& s, Vec3 central, std::span<const Vec3> points,
                               Engine& rng) {
    const double delta = s.path_loss_exponent;
    std::vector<double> received(points.size());
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double rho = sample_fading(s.fading_shape, rng);
        const double d = distance(points[i], central);
        if (!(d > 0)) throw DomainError("sub-UAV co-located with the central UAV");
        received[i] = s.total_gain * rho * std::pow(d, -delta);
        total += received[i];
    }
    std::vector<double> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double others = std::max(0.0, total - received[i]);
        out[i] = s.sub_tx_power * received[i] / (s.noise_power + s.sub_tx_power * others);
    }
    return out;
}

MeanSinr mean_sinr_db(const A2AScenario& s, Vec3 central, std::size_t trials, std::uint64_t seed,
                      Execution exec) {
    s.validate();
    if (trials < 1) throw DomainError("need at least one trial");
    const auto acc = exec == Execution::parallel
                         ? kernels::sinr_db_parallel(s, central, trials, seed)
                         : kernels::sinr_db_serial(s, central, trials, seed);
    MeanSinr m;
    m.expected_count = s.density * s.box.volume();
    m.links = acc.links;
    m.mean_sinr_db = acc.links > 0 ? acc.sum_db / static_cast<double>(acc.links)
                                   : std::numeric_limits<double>::quiet_NaN();
    return m;
}

std::vector<MeanSinr> mean_sinr_vs_density(const A2AScenario& s, Vec3 central,
                                           std::span<const double> counts, std::size_t trials,
                                           std::uint64_t seed, Execution exec) {
    std::vector<MeanSinr> out;
    out.reserve(counts.size());
    for (double count : counts) {
        A2AScenario at = s;
        at.density = intensity_from_count(count, s.box);
        auto m = mean_sinr_db(at, central, trials, seed, exec);
        m.expected_count = count;
        out.push_back(m);
    }
    return out;
}

}  // namespace surveil
