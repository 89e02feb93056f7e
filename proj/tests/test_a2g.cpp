#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "stats_oracles.hpp"
#include "two_ray_oracle.hpp"
#include "surveil/a2g_channel.hpp"
#include "surveil/error.hpp"

using namespace surveil;

using namespace two_ray;

TEST_CASE("reference wavelengths") {
    CHECK(std::round(A2GParams::five_g().wavelength() * 1e4) / 1e4 == doctest::Approx(0.0857));
    CHECK(std::round(A2GParams::adsb().wavelength() * 1e4) / 1e4 == doctest::Approx(0.2752));
    const auto p = A2GParams::five_g();
    CHECK(p.wavelength() * p.frequency == doctest::Approx(kSpeedOfLight).epsilon(1e-12));
}

TEST_CASE("solve_geometry invariants") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> uh(300, 10000), ug(5, 200), us(2000, 60000);
    int checked = 0;
    for (int i = 0; i < 2000; ++i) {
        A2GParams p;
        p.uav_height = uh(rng);
        p.gs_height = ug(rng);
        try {
            const auto g = solve_geometry(p, us(rng));
            CHECK(g.arc_tx + g.arc_rx == doctest::Approx(g.arc_total).epsilon(1e-12));
            CHECK(g.central_angle_tx + g.central_angle_rx == doctest::Approx(g.central_angle).epsilon(1e-12));
            CHECK(g.reflected_length() >= g.los_distance);
            CHECK(g.grazing_angle > 0);
            CHECK(g.grazing_angle < M_PI / 2);
            CHECK(g.phase_difference >= 0);
            CHECK(g.phase_difference == doctest::Approx(2 * M_PI * g.path_difference / p.wavelength()));
            ++checked;
        } catch (const GeometryError&) {
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("solve_geometry: equal heights are symmetric") {
    A2GParams p;
    p.uav_height = 500.0;
    p.gs_height = 500.0 - 1e-9;  // the validity check wants H > H_G
    const auto g = solve_geometry(p, 20000.0);
    CHECK(g.arc_tx == doctest::Approx(g.arc_rx).epsilon(1e-9));
    p.gs_height = 500.0;
    p.uav_height = 500.0;
    CHECK_THROWS_AS(solve_geometry(p, 20000.0), ConfigError);
}

TEST_CASE("solve_geometry: flat-earth grazing angle") {
    A2GParams p = low_flat();
    p.uav_height = 2000.0;
    const double s = 20000.0;  // (H + H_G) / s ~ 0.1
    const auto g = solve_geometry(p, s);
    CHECK(std::abs(g.grazing_angle / std::atan((p.uav_height + p.gs_height) / s) - 1.0) < 0.01);
}

TEST_CASE("solve_geometry: infeasible inputs") {
    A2GParams p;
    CHECK_THROWS_AS(solve_geometry(p, 0.0), DomainError);
    CHECK_THROWS_AS(solve_geometry(p, 500e3), GeometryError);  // well beyond the radio horizon
}

TEST_CASE("reflection coefficient") {
    A2GParams p = A2GParams::adsb();
    SUBCASE("independent re-evaluation at the default ground constants") {
        const double psi = 0.1;
        const double b = 5e3 / (2 * M_PI * 1090e6 * 8.8541878128e-12);
        const std::complex<double> eps(15.0, -b);
        const auto root = std::sqrt(eps - std::cos(psi));
        const auto expected = (eps * std::sin(psi) - root) / (eps * std::sin(psi) + root);
        const auto got = reflection_coefficient(p, psi);
        CHECK(std::abs(got - expected) < 1e-12);
    }
    SUBCASE("perfect-conductor limit") {
        p.conductivity = 0.0;
        p.rel_permittivity = 1e12;
        const auto g = reflection_coefficient(p, 0.3);
        CHECK(std::abs(g - std::complex<double>(1.0, 0.0)) < 1e-5);
    }
    SUBCASE("magnitude never exceeds one") {
        std::mt19937_64 rng(8);
        std::uniform_real_distribution<double> upsi(1e-4, M_PI / 2), ueps(1, 80), usig(0, 1e4);
        for (int i = 0; i < 1000; ++i) {
            p.rel_permittivity = ueps(rng);
            p.conductivity = usig(rng);
            CHECK(std::abs(reflection_coefficient(p, upsi(rng))) <= 1.0 + 1e-12);
        }
    }
    CHECK_THROWS_AS(reflection_coefficient(p, 0.0), DomainError);
    CHECK_THROWS_AS(reflection_coefficient(p, 2.0), DomainError);
}

TEST_CASE("divergence factor") {
    A2GLinkGeometry g;
    g.slant_tx = 1e-9;
    g.slant_rx = 5000;
    g.grazing_angle = 0.2;
    CHECK(divergence_factor(g, kEarthRadius) == doctest::Approx(1.0).epsilon(1e-12));
    g.slant_tx = 3000;
    CHECK(divergence_factor(g, kEarthRadius * 1e9) == doctest::Approx(1.0).epsilon(1e-9));

    A2GParams p;
    double prev = 1.0;
    for (double s = 5000; s <= 60000; s += 5000) {
        const double d = divergence_factor(solve_geometry(p, s), p.earth_radius);
        CHECK(d > 0.0);
        CHECK(d < prev);
        prev = d;
    }
}

TEST_CASE("received power against hand cases") {
    A2GParams p;
    const auto g = solve_geometry(p, 10000.0);
    const double friis = friis_power(p, g.los_distance);
    RayContribution ray;
    ray.magnitude = 0.0;
    CHECK(received_power(p, g, std::span(&ray, 1)) == doctest::Approx(friis));
    ray.magnitude = 1.0;
    ray.phase_difference = M_PI;
    CHECK(received_power(p, g, std::span(&ray, 1)) < 1e-30 * friis + 1e-300);
    ray.phase_difference = 0.0;
    CHECK(received_power(p, g, std::span(&ray, 1)) == doctest::Approx(4.0 * friis));
    CHECK_THROWS_AS(received_power(p, g, {}), ConfigError);
    const std::vector<RayContribution> many(2, ray);
    CHECK_THROWS_AS(received_power(p, g, many), ConfigError);  // beamwidth pi/3 allows one ray
    p.beamwidth = M_PI / 8;  // four rays
    CHECK_NOTHROW(received_power(p, g, many));
}

TEST_CASE("energy bound and multiray mode") {
    A2GParams p;
    p.beamwidth = M_PI / 6;
    const double s = 12000.0;
    std::vector<RayContribution> rays;
    double los = 0.0;
    for (double arc : {3000.0, 6000.0, 9000.0}) {
        const auto g = solve_ray_geometry(p, s, arc);
        rays.push_back(make_ray(p, g));
        los = g.los_distance;
        CHECK(rays.back().magnitude <= 1.0);
        CHECK(rays.back().divergence <= 1.0);
    }
    const auto g = solve_geometry(p, s);
    CHECK(g.los_distance == doctest::Approx(los));
    const double pg = received_power(p, g, rays);
    CHECK(pg <= std::pow(4.0, 3) * friis_power(p, g.los_distance));
    CHECK_THROWS_AS(solve_ray_geometry(p, s, s), DomainError);
}

TEST_CASE("path loss and SNR") {
    A2GParams p;
    CHECK(path_loss(p, p.tx_power).db == doctest::Approx(0.0));
    CHECK(path_loss(p, p.tx_power / 100).db == doctest::Approx(20.0));
    CHECK(snr(p, p.noise_density * p.bandwidth).db == doctest::Approx(0.0).epsilon(1e-9));
    A2GParams wide = p;
    wide.bandwidth *= 2;
    CHECK(snr(p, 1e-9).db - snr(wide, 1e-9).db == doctest::Approx(10 * std::log10(2.0)));
    const auto dead = path_loss(p, 0.0);
    CHECK(dead.deep_fade);
    CHECK(std::isinf(dead.db));
    CHECK(dead.db > 0);
    CHECK(snr(p, 0.0).deep_fade);
    CHECK(snr(p, 0.0).db < 0);
}

TEST_CASE("flat-earth limit matches the textbook two-ray model") {
    const A2GParams p = low_flat();
    for (double s : {15000.0, 20000.0, 30000.0}) {
        const auto g = solve_geometry(p, s);
        const auto ray = make_ray(p, g);
        const double pg = received_power(p, g, std::span(&ray, 1));
        CHECK(std::abs(pg / flat_two_ray(p, s) - 1.0) < 0.01);
    }
}

TEST_CASE("Rician fading") {
    std::mt19937_64 rng(21);
    double sum = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) sum += rician_power_gain(3.0, rng);
    CHECK(std::abs(sum / n - 1.0) < 0.005);
    CHECK(rician_power_gain(std::numeric_limits<double>::infinity(), rng) == 1.0);
    CHECK(apply_rician_fading(2.5, std::numeric_limits<double>::infinity(), 1, 10) == 2.5);
    CHECK(apply_rician_fading(2.5, 3.0, 9, 1000) == apply_rician_fading(2.5, 3.0, 9, 1000));
    CHECK(apply_rician_fading(2.5, 3.0, 9, 200000) == doctest::Approx(2.5).epsilon(0.01));
    CHECK_THROWS_AS(apply_rician_fading(1.0, -1.0, 1, 10), DomainError);
}

TEST_CASE("height sweep") {
    const A2GParams p = A2GParams::five_g();
    std::vector<double> heights;
    // 1 m grid: coarser steps alias the ~8.6 m two-ray interference period.
    for (double h = 1000; h <= 4500; h += 1) heights.push_back(h);
    const auto par = a2g_height_sweep(p, 10000.0, heights, 2000, 3, true);
    const auto ser = a2g_height_sweep(p, 10000.0, heights, 2000, 3, false);
    REQUIRE(par.size() == heights.size());
    std::vector<double> pl, sn;
    for (std::size_t i = 0; i < par.size(); ++i) {
        CHECK(par[i].loss_fade.db == ser[i].loss_fade.db);
        CHECK(par[i].snr_fade.db == ser[i].snr_fade.db);
        pl.push_back(par[i].loss_nofade.db);
        sn.push_back(par[i].snr_fade.db);
    }
    CHECK(oracle::slope(heights, pl) > 0.0);
    CHECK(oracle::slope(heights, sn) < 0.0);
}
