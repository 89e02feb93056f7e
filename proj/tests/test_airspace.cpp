#include <cmath>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "stats_oracles.hpp"
#include "surveil/airspace.hpp"
#include "surveil/error.hpp"
#include "surveil/units.hpp"

using namespace surveil;

TEST_CASE("airspace config layout") {
    AirspaceConfig c;
    CHECK(c.total_height() == doctest::Approx(10000.0));
    const Box low = c.layer_box(Layer::low);
    const Box high = c.layer_box(Layer::high);
    CHECK(low.lo.z == 0.0);
    CHECK(low.hi.z == 4500.0);
    CHECK(high.lo.z == 5500.0);
    CHECK(high.hi.z == 10000.0);
    CHECK(low.volume() == doctest::Approx(10000.0 * 10000.0 * 4500.0));
    CHECK(c.central_position(Layer::low) == Vec3{0, 0, 2250});
    CHECK(c.central_position(Layer::high) == Vec3{0, 0, 7750});
    CHECK_NOTHROW(c.validate());

    c.central_low_height = 5000.0;  // inside the isolation layer
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = AirspaceConfig{};
    c.density_high = -1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = AirspaceConfig{};
    c.half_extent_x = std::nan("");
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("sample_ppp: zero density gives no points") {
    AirspaceConfig c;
    CHECK(sample_ppp(c, Layer::low, 7).empty());
    CHECK(sample_ppp(c, Layer::high, 7).empty());
}

TEST_CASE("sample_ppp: deterministic and inside the layer") {
    AirspaceConfig c;
    c.density_low = intensity_from_count(30, c.layer_box(Layer::low));
    c.density_high = intensity_from_count(30, c.layer_box(Layer::high));
    const auto a = sample_ppp(c, Layer::low, 99);
    const auto b = sample_ppp(c, Layer::low, 99);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    for (auto layer : {Layer::low, Layer::high}) {
        const Box box = c.layer_box(layer);
        for (std::uint64_t seed = 0; seed < 50; ++seed)
            for (const auto& p : sample_ppp(c, layer, seed)) CHECK(box.contains(p));
    }
    // Layers use separate substreams.
    const auto high = sample_ppp(c, Layer::high, 99);
    CHECK((high.empty() || a.empty() || !(high[0].x == a[0].x)));
}

TEST_CASE("sample_ppp: Poisson count mean and variance") {
    AirspaceConfig c;
    const Box box = c.layer_box(Layer::low);
    const double expected = 25.0;
    c.density_low = intensity_from_count(expected, box);
    const int draws = 10000;
    std::vector<double> counts;
    for (int i = 0; i < draws; ++i) counts.push_back(static_cast<double>(sample_ppp(c, Layer::low, i).size()));
    // Poisson: mean = var = lambda V; sigma of the sample mean is sqrt(lambda V / n).
    CHECK(std::abs(oracle::mean(counts) - expected) < 3.0 * std::sqrt(expected / draws));
    // Var of the sample variance for Poisson ~ (mu + 2 mu^2) / n.
    CHECK(std::abs(oracle::variance(counts) - expected) <
          3.0 * std::sqrt((expected + 2 * expected * expected) / draws));
}

TEST_CASE("sub-UAV distance matches the Euclidean formula") {
    AirspaceConfig c;
    c.density_low = intensity_from_count(40, c.layer_box(Layer::low));
    const auto d = deploy(c, 3);
    for (const auto& p : d.low_uavs) {
        const double naive = std::sqrt((p.x - d.central_low.x) * (p.x - d.central_low.x) +
                                       (p.y - d.central_low.y) * (p.y - d.central_low.y) +
                                       (p.z - d.central_low.z) * (p.z - d.central_low.z));
        CHECK(distance(p, d.central_low) == doctest::Approx(naive).epsilon(1e-15));
    }
}

TEST_CASE("nearest-neighbour CDF and PDF") {
    const double lambda = 1e-9;
    CHECK(nn_distance_cdf(0.0, lambda) == 0.0);
    CHECK(nn_distance_pdf(0.0, lambda) == 0.0);
    for (double d : {1.0, 100.0, 1e4}) CHECK(nn_distance_cdf(d, 0.0) == 0.0);
    CHECK_THROWS_AS(nn_distance_cdf(-1.0, lambda), DomainError);
    CHECK_THROWS_AS(nn_distance_pdf(-1.0, lambda), DomainError);
    CHECK(nn_distance_cdf(1e6, lambda) == doctest::Approx(1.0));

    double prev = 0.0;
    for (double d = 0; d < 2e3; d += 17) {
        const double f = nn_distance_cdf(d, lambda);
        CHECK(f >= prev);
        prev = f;
    }

    SUBCASE("finite-difference derivative of the CDF") {
        // Five-point stencil; points kept where the CDF is not yet saturated at 1.
        auto F = [&](double x) { return nn_distance_cdf(x, lambda); };
        for (double d : {50.0, 300.0, 620.0, 900.0, 1100.0}) {
            const double h = 1e-3 * d;
            const double fd = (F(d - 2 * h) - 8 * F(d - h) + 8 * F(d + h) - F(d + 2 * h)) / (12 * h);
            CHECK(std::abs(fd - nn_distance_pdf(d, lambda)) <= 1e-6 * nn_distance_pdf(d, lambda));
        }
    }
    SUBCASE("PDF integrates to one") {
        auto f = [&](double d) { return nn_distance_pdf(d, lambda); };
        const double total = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            f, 0.0, std::numeric_limits<double>::infinity(), 20, 1e-12);
        CHECK(std::abs(total - 1.0) < 1e-8);
    }
    SUBCASE("quantile inverts the CDF") {
        for (double u : {0.01, 0.3, 0.5, 0.9, 0.999})
            CHECK(nn_distance_cdf(nn_distance_quantile(u, lambda), lambda) == doctest::Approx(u).epsilon(1e-12));
        CHECK(std::isinf(nn_distance_quantile(0.5, 0.0)));
    }
}

TEST_CASE("empirical nearest-neighbour law from PPP draws in a large ball") {
    // Points of a PPP in the cube around the origin; the cube is wide enough that the
    // nearest neighbour essentially never lies beyond the inscribed ball.
    const double lambda = 1e-6;
    const double half = 250.0;  // P(nn > 250) = exp(-(4/3) pi 1e-6 250^3) ~ 4e-29
    const Box box{{-half, -half, -half}, {half, half, half}};
    std::vector<double> nn;
    for (int t = 0; t < 100000; ++t) {
        auto rng = make_stream(11, stream_tag("test/nn"), t);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : sample_ppp_box(box, lambda, rng)) best = std::min(best, norm(p));
        nn.push_back(best);
    }
    const double ks = oracle::ks_distance(nn, [&](double d) { return nn_distance_cdf(d, lambda); });
    CHECK(ks < 0.01);
}

TEST_CASE("deployment CSV") {
    AirspaceConfig c;
    c.density_low = intensity_from_count(3, c.layer_box(Layer::low));
    c.density_high = intensity_from_count(3, c.layer_box(Layer::high));
    const auto d = deploy(c, 5);
    std::ostringstream out;
    write_deployment_csv(out, d);
    const std::string text = out.str();
    CHECK(text.rfind("layer,x_m,y_m,z_m\n", 0) == 0);
    CHECK(text.find("central_low,0,0,2250") != std::string::npos);
    CHECK(text.find("central_high,0,0,7750") != std::string::npos);
    std::size_t lines = 0;
    for (char ch : text) lines += ch == '\n';
    CHECK(lines == 1 + 2 + d.low_uavs.size() + d.high_uavs.size());
}
