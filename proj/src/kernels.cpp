#include "surveil/kernels.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "surveil/units.hpp"

namespace surveil::kernels {

namespace {

// Gauss-Legendre rule on [-1, 1] expanded from Boost's half-rules.
struct Rule {
    std::vector<double> x;
    std::vector<double> w;
};

template <unsigned N>
Rule expand_rule() {
    using G = boost::math::quadrature::gauss<double, N>;
    const auto& a = G::abscissa();
    const auto& wt = G::weights();
    Rule r;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) {
            r.x.push_back(0.0);
            r.w.push_back(wt[i]);
        } else {
            r.x.push_back(a[i]);
            r.w.push_back(wt[i]);
            r.x.push_back(-a[i]);
            r.w.push_back(wt[i]);
        }
    }
    return r;
}

const Rule& gauss_legendre(std::size_t n) {
    static const Rule r6 = expand_rule<6>();
    static const Rule r8 = expand_rule<8>();
    static const Rule r10 = expand_rule<10>();
    static const Rule r12 = expand_rule<12>();
    static const Rule r16 = expand_rule<16>();
    static const Rule r20 = expand_rule<20>();
    static const Rule r24 = expand_rule<24>();
    static const Rule r30 = expand_rule<30>();
    static const Rule r40 = expand_rule<40>();
    switch (n) {
        case 6: return r6;
        case 8: return r8;
        case 10: return r10;
        case 12: return r12;
        case 16: return r16;
        case 20: return r20;
        case 24: return r24;
        case 30: return r30;
        case 40: return r40;
        default:
            throw std::invalid_argument("unsupported Gauss-Legendre order " + std::to_string(n));
    }
}

// One pyramid: apex at the central UAV, base on the face at distance `depth`, base
// rectangle [0, depth * span_b] x [0, depth * span_c].
struct Pyramid {
    double depth;
    double span_b;
    double span_c;
};

std::vector<Pyramid> pyramids(const Box& box, Vec3 central) {
    const std::array<double, 2> wx{central.x - box.lo.x, box.hi.x - central.x};
    const std::array<double, 2> wy{central.y - box.lo.y, box.hi.y - central.y};
    const std::array<double, 2> wz{central.z - box.lo.z, box.hi.z - central.z};
    std::vector<Pyramid> out;
    for (double x : wx)
        for (double y : wy)
            for (double z : wz) {
                if (!(x > 0 && y > 0 && z > 0)) continue;
                out.push_back({x, y / x, z / x});
                out.push_back({y, x / y, z / y});
                out.push_back({z, x / z, y / z});
            }
    return out;
}

// Sum over the i-th row of the tensor rule for one pyramid.
double pyramid_row(const Pyramid& p, const Rule& rule, std::size_t i,
                   const RadialProfile& profile, double c) {
    const double hb = 0.5 * p.span_b;
    const double hc = 0.5 * p.span_c;
    const double eta = hb * (rule.x[i] + 1.0);
    double row = 0.0;
    for (std::size_t j = 0; j < rule.x.size(); ++j) {
        const double zeta = hc * (rule.x[j] + 1.0);
        const double q = std::sqrt(1.0 + eta * eta + zeta * zeta);
        row += rule.w[j] * profile(c, p.depth * q) / (q * q * q);
    }
    return rule.w[i] * hb * hc * row;
}

double path_gain(double d2, double delta) {
    return delta == 2.0 ? 1.0 / d2 : std::pow(d2, -0.5 * delta);
}

double d2_between(Vec3 a, Vec3 b) {
    const Vec3 v = a - b;
    return dot(v, v);
}

constexpr std::uint64_t kCoverageTag = stream_tag("a2a/coverage");
constexpr std::uint64_t kSinrTag = stream_tag("a2a/sinr");

SinrAccumulator sinr_trial(const A2AScenario& s, Vec3 central, std::uint64_t seed,
                           std::uint64_t trial) {
    auto rng = make_stream(seed, kSinrTag, trial);
    const auto points = sample_ppp_box(s.box, s.density, rng);
    SinrAccumulator acc;
    for (double g : link_sinrs(s, central, points, rng)) {
        acc.sum_db += 10.0 * std::log10(g);
        ++acc.links;
    }
    return acc;
}

}  // namespace

double theta_serial(const Box& box, Vec3 central, const RadialProfile& profile, double c,
                    std::size_t nodes) {
    const Rule& rule = gauss_legendre(nodes);
    double theta = 0.0;
    for (const auto& p : pyramids(box, central))
        for (std::size_t i = 0; i < rule.x.size(); ++i)
            theta += pyramid_row(p, rule, i, profile, c);
    return theta;
}

double theta_parallel(const Box& box, Vec3 central, const RadialProfile& profile, double c,
                      std::size_t nodes) {
    const Rule& rule = gauss_legendre(nodes);
    const auto parts = pyramids(box, central);
    const std::size_t n = rule.x.size();
    std::vector<double> rows(parts.size() * n);
    const auto total = static_cast<long>(rows.size());

#pragma omp parallel for schedule(static)
    for (long k = 0; k < total; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        rows[idx] = pyramid_row(parts[idx / n], rule, idx % n, profile, c);
    }
    double theta = 0.0;
    for (double r : rows) theta += r;
    return theta;
}

bool coverage_trial(const A2AScenario& s, Vec3 central, std::uint64_t seed, std::uint64_t trial,
                    GeometryMode mode) {
    auto rng = make_stream(seed, kCoverageTag, trial);
    const double delta = s.path_loss_exponent;

    double desired_d2 = std::numeric_limits<double>::infinity();
    if (mode == GeometryMode::sphere_law) {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double d = nn_distance_quantile(unit(rng), s.density);
        desired_d2 = d * d;
    }
    const auto points = sample_ppp_box(s.box, s.density, rng);

    std::size_t desired_index = points.size();
    if (mode == GeometryMode::box) {
        for (std::size_t i = 0; i < points.size(); ++i) {
            const double d2 = d2_between(points[i], central);
            if (d2 < desired_d2) {
                desired_d2 = d2;
                desired_index = i;
            }
        }
    }
    if (!std::isfinite(desired_d2)) return false;

    const double desired_gain = sample_fading(s.fading_shape, rng);
    double interference = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i == desired_index) continue;
        const double rho = sample_fading(s.fading_shape, rng);
        const double d2 = d2_between(points[i], central);
        if (d2 == 0.0) return false;
        interference += s.total_gain * rho * path_gain(d2, delta);
    }
    if (desired_d2 == 0.0) return true;
    const double signal = s.sub_tx_power * s.total_gain * desired_gain * path_gain(desired_d2, delta);
    return signal >= s.threshold * (s.noise_power + s.sub_tx_power * interference);
}

std::size_t coverage_hits_serial(const A2AScenario& s, Vec3 central, std::size_t trials,
                                 std::uint64_t seed, GeometryMode mode) {
    std::size_t hits = 0;
    for (std::size_t t = 0; t < trials; ++t)
        if (coverage_trial(s, central, seed, t, mode)) ++hits;
    return hits;
}

std::size_t coverage_hits_parallel(const A2AScenario& s, Vec3 central, std::size_t trials,
                                   std::uint64_t seed, GeometryMode mode) {
    long long hits = 0;
    const auto n = static_cast<long long>(trials);
#pragma omp parallel for schedule(static) reduction(+ : hits)
    for (long long t = 0; t < n; ++t)
        if (coverage_trial(s, central, seed, static_cast<std::uint64_t>(t), mode)) ++hits;
    return static_cast<std::size_t>(hits);
}

SinrAccumulator sinr_db_serial(const A2AScenario& s, Vec3 central, std::size_t trials,
                               std::uint64_t seed) {
    SinrAccumulator total;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto acc = sinr_trial(s, central, seed, t);
        total.sum_db += acc.sum_db;
        total.links += acc.links;
    }
    return total;
}

SinrAccumulator sinr_db_parallel(const A2AScenario& s, Vec3 central, std::size_t trials,
                                 std::uint64_t seed) {
    std::vector<SinrAccumulator> per_trial(trials);
    const auto n = static_cast<long long>(trials);
#pragma omp parallel for schedule(dynamic, 64)
    for (long long t = 0; t < n; ++t)
        per_trial[static_cast<std::size_t>(t)] =
            sinr_trial(s, central, seed, static_cast<std::uint64_t>(t));
    SinrAccumulator total;
    for (const auto& acc : per_trial) {
        total.sum_db += acc.sum_db;
        total.links += acc.links;
    }
    return total;
}

}  // namespace surveil::kernels
