#pragma once

#include <cmath>
#include <limits>
#include <random>

namespace surveil {

template <class Rng>
double rician_power_gain(double rice_factor, Rng& rng) {
    if (std::isinf(rice_factor)) return 1.0;
    const double los = std::sqrt(rice_factor / (rice_factor + 1.0));
    const double sigma = std::sqrt(0.5 / (rice_factor + 1.0));
    std::normal_distribution<double> n(0.0, sigma);
    const double re = los + n(rng);
    const double im = n(rng);
    return re * re + im * im;
}

}  // namespace surveil
