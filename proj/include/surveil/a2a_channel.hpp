#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "surveil/airspace.hpp"
#include "surveil/rng.hpp"
#include "surveil/units.hpp"
#include "surveil/vec3.hpp"

namespace surveil {

enum class Execution { serial, parallel };

/// Radio parameters of one airspace layer. All values linear (W, ratio, 1/m^3).
struct A2AScenario {
    double sub_tx_power = 20.0;                         // P_s
    double total_gain = db_to_linear(23.0);             // G_a
    double noise_power = dbm_to_watts(-174.0) * 100e6;  // N_0 = n_0 B
    double path_loss_exponent = 2.0;                    // delta
    double threshold = db_to_linear(-14.0);             // theta
    double density = 0.0;                               // lambda
    double fading_shape = 1.0;                          // Gamma shape; 1 = Rayleigh
    Box box{{-5000.0, -5000.0, 0.0}, {5000.0, 5000.0, 4500.0}};

    void validate() const;
};

enum class CoverageMethod { analytic, monte_carlo };
enum class GeometryMode { sphere_law, box };

const char* to_string(GeometryMode mode);

struct CoverageResult {
    double probability = 0.0;
    CoverageMethod method = CoverageMethod::analytic;
    std::size_t trials = 0;    // Monte Carlo only
    double std_error = 0.0;    // binomial standard error (Monte Carlo) or quadrature bound
};

// Unit-mean Gamma(shape, 1/shape) small-scale power gain.
double sample_fading(double shape, Engine& rng);

// SINR with explicit fading gains (gains[i] pairs with interferer_distances[i]).
double sinr_from_gains(const A2AScenario& s, double desired_distance, double desired_gain,
                       std::span<const double> interferer_distances,
                       std::span<const double> interferer_gains);

// One SINR realization with fresh fading drawn from `rng`.
double sinr_realization(const A2AScenario& s, double desired_distance,
                        std::span<const double> interferer_distances, Engine& rng);
double sinr_realization(const A2AScenario& s, double desired_distance,
                        std::span<const double> interferer_distances, std::uint64_t seed);

/// Monte Carlo coverage estimate around the central UAV at `central`.
///
/// sphere_law: the desired distance follows the spherical nearest-neighbour law
/// and interferers are an independent PPP in the layer box. box: desired link is
/// the nearest point of a PPP in the box, the remaining points interfere.
/// Trial t always uses substream t of `seed`.
CoverageResult coverage_monte_carlo(const A2AScenario& s, Vec3 central, std::size_t trials,
                                    std::uint64_t seed, GeometryMode mode,
                                    Execution exec = Execution::parallel);

struct CubatureOptions {
    std::size_t nodes = 24;      // Gauss-Legendre nodes per angular coordinate
    double rel_tolerance = 5e-3; // allowed gap between the n and n/2 node estimates
};

/// Radial part of the interference integral for one path-loss exponent:
/// F(c, R) = integral_0^R c r^2 / (c + r^delta) dr, evaluated as
/// c^(3/delta) J(R c^(-1/delta)) with J tabulated once on a log grid.
class RadialProfile {
public:
    explicit RadialProfile(double delta);
    double delta() const { return delta_; }
    double operator()(double c, double radius) const;
    // J(T) = integral_0^T t^2 / (1 + t^delta) dt.
    double unit(double t) const;

private:
    double delta_;
    double log_t_min_;
    double log_t_max_;
    double j_max_;
    struct Spline;
    std::shared_ptr<const Spline> spline_;
};

// Theta: integral over the box of 1 - 1/(1 + c r^-delta), r measured from `central`
// (which must lie in the box). c is Lambda * G_a. Throws NumericalError when the n and
// n/2 node estimates differ by more than the tolerance.
double interference_integral(const Box& box, Vec3 central, double delta, double c,
                             const CubatureOptions& options = {},
                             Execution exec = Execution::parallel);
double interference_integral(const Box& box, Vec3 central, const RadialProfile& profile,
                             double c, const CubatureOptions& options = {},
                             Execution exec = Execution::parallel);

// Laplace transform of the aggregate interference, exp(-lambda * Theta).
double laplace_interference(const A2AScenario& s, double lambda_arg, Vec3 central,
                            const CubatureOptions& options = {});

/// Theta(c) tabulated on a uniform grid in log c and interpolated with a cubic
/// B-spline in (log c, log Theta). Built once per (box, central, delta).
class InterferenceTable {
public:
    InterferenceTable(const Box& box, Vec3 central, double delta, double c_min, double c_max,
                      std::size_t nodes, const CubatureOptions& options = {});

    double operator()(double c) const;

    // Same range, 2 * nodes - 1 nodes; existing nodes are reused.
    InterferenceTable refined() const;

    std::size_t nodes() const { return log_theta_.size(); }
    double delta() const { return profile_.delta(); }
    double c_min() const { return std::exp(log_c_min_); }
    double c_max() const { return std::exp(log_c_max_); }

private:
    InterferenceTable(const Box& box, Vec3 central, const RadialProfile& profile,
                      double log_c_min, double log_c_max, std::vector<double> log_theta,
                      CubatureOptions options);
    void build_spline();

    Box box_;
    Vec3 central_;
    RadialProfile profile_;
    double log_c_min_;
    double log_c_max_;
    std::vector<double> log_theta_;
    CubatureOptions options_;
    struct Spline;
    std::shared_ptr<const Spline> spline_;
};

struct AnalyticOptions {
    CubatureOptions cubature;
    std::size_t initial_nodes = 33;
    std::size_t max_nodes = 257;
    double refine_tolerance = 1e-4;
    double quadrature_tolerance = 1e-10;  // requested relative tolerance
    double max_quadrature_error = 1e-5;   // absolute; larger estimates raise NumericalError
};

// Analytic coverage for Rayleigh fading (fading_shape == 1), outer integral truncated at
// `max_distance`. Builds and refines its own interference table.
CoverageResult coverage_analytic(const A2AScenario& s, Vec3 central, double max_distance,
                                 const AnalyticOptions& options = {});

// Same, against a prebuilt table that must cover [theta * d_lo^delta, theta * max_distance^delta].
CoverageResult coverage_analytic(const A2AScenario& s, Vec3 central, double max_distance,
                                 const InterferenceTable& table,
                                 const AnalyticOptions& options = {});

// Table suitable for every threshold in [theta_min, theta_max] at the scenario's delta.
InterferenceTable make_interference_table(const A2AScenario& s, Vec3 central,
                                          double max_distance, double theta_min,
                                          double theta_max, const AnalyticOptions& options = {});

// SINR of every sub-UAV at `points` towards `central`, each link interfered by all others.
std::vector<double> link_sinrs(const A2AScenario& s, Vec3 central, std::span<const Vec3> points,
                               Engine& rng);

struct MeanSinr {
    double expected_count = 0.0;
    double mean_sinr_db = 0.0;  // average of per-link SINR in dB
    std::size_t links = 0;
};

// Averaged per-link SINR (dB) over `trials` PPP deployments with the scenario's density.
MeanSinr mean_sinr_db(const A2AScenario& s, Vec3 central, std::size_t trials, std::uint64_t seed,
                      Execution exec = Execution::parallel);

// One mean_sinr_db per expected per-layer count in `counts`.
std::vector<MeanSinr> mean_sinr_vs_density(const A2AScenario& s, Vec3 central,
                                           std::span<const double> counts, std::size_t trials,
                                           std::uint64_t seed,
                                           Execution exec = Execution::parallel);

}  // namespace surveil
