#include "majda/initial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace majda {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr double pi = std::numbers::pi;

}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t counter) const
{
    return splitmix64(splitmix64(seed_) ^ counter);
}

double CounterRng::uniform(std::uint64_t counter) const
{
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

std::string to_string(InitialPreset preset)
{
    switch (preset) {
    case InitialPreset::taylor_green:
        return "taylor-green";
    case InitialPreset::random_bandlimited:
        return "random-bandlimited";
    case InitialPreset::shear_layer:
        return "shear-layer";
    }
    return "unknown";
}

InitialPreset parse_initial_preset(const std::string& name)
{
    for (auto p : {InitialPreset::taylor_green, InitialPreset::random_bandlimited, InitialPreset::shear_layer}) {
        if (name == to_string(p)) {
            return p;
        }
    }
    throw std::invalid_argument("unknown initial condition '" + name +
                                "' (expected taylor-green, random-bandlimited or shear-layer)");
}

LayeredState taylor_green(const LayeredGrid& grid, double amplitude)
{
    auto s = LayeredState::zeros(grid);
    for (int k = 1; k < grid.n3; ++k) {
        const double z = std::sin(pi * grid.x3(k));
        for (int i2 = 0; i2 < grid.n2; ++i2) {
            const double y = std::sin(pi * grid.x2(i2));
            for (int i1 = 0; i1 < grid.n1; ++i1) {
                s.omega[grid.index(i1, i2, k)] = amplitude * std::sin(pi * grid.x1(i1)) * y * z;
            }
        }
    }
    return s;
}

LayeredState random_bandlimited(const LayeredGrid& grid, std::uint64_t seed, int kmax, double amplitude)
{
    if (kmax < 1 || 2 * kmax >= std::min(grid.n1, grid.n2)) {
        throw std::invalid_argument("random-bandlimited: kmax must satisfy 1 <= kmax < min(n1, n2) / 2");
    }
    if (!(amplitude >= 0.0)) {
        throw std::invalid_argument("random-bandlimited: amplitude must be non-negative");
    }
    const CounterRng rng(seed);
    auto s = LayeredState::zeros(grid);
    std::uint64_t counter = 0;
    const std::size_t layer = grid.layer_size();
    std::vector<double> cos_h(layer);
    std::vector<double> sin_h(layer);
    std::vector<double> col_c(grid.n_layers());
    std::vector<double> col_s(grid.n_layers());
    for (int m2 = -kmax; m2 <= kmax; ++m2) {
        for (int m1 = 0; m1 <= kmax; ++m1) {
            if (m1 == 0 && m2 <= 0) {
                continue;  // conjugate half and the mean
            }
            // cos(theta + phase) = cos(theta) cos(phase) - sin(theta) sin(phase),
            // so the vertical sums over l are formed before touching the layer.
            std::fill(col_c.begin(), col_c.end(), 0.0);
            std::fill(col_s.begin(), col_s.end(), 0.0);
            for (int l = 1; l <= kmax; ++l) {
                const double a = rng.uniform(counter++, -1.0, 1.0);
                const double phase = rng.uniform(counter++, 0.0, 2.0 * pi);
                for (int k = 1; k < grid.n3; ++k) {
                    const double z = a * std::sin(l * pi * grid.x3(k));
                    col_c[static_cast<std::size_t>(k)] += z * std::cos(phase);
                    col_s[static_cast<std::size_t>(k)] += z * std::sin(phase);
                }
            }
            for (int i2 = 0; i2 < grid.n2; ++i2) {
                for (int i1 = 0; i1 < grid.n1; ++i1) {
                    const double theta = pi * (m1 * grid.x1(i1) + m2 * grid.x2(i2));
                    cos_h[grid.index(i1, i2, 0)] = std::cos(theta);
                    sin_h[grid.index(i1, i2, 0)] = std::sin(theta);
                }
            }
            for (int k = 1; k < grid.n3; ++k) {
                const double c = col_c[static_cast<std::size_t>(k)];
                const double sn = col_s[static_cast<std::size_t>(k)];
                double* w = s.omega.data() + static_cast<std::size_t>(k) * layer;
                for (std::size_t i = 0; i < layer; ++i) {
                    w[i] += c * cos_h[i] - sn * sin_h[i];
                }
            }
        }
    }
    double peak = 0.0;
    for (double v : s.omega) {
        peak = std::max(peak, std::abs(v));
    }
    if (peak > 0.0) {
        for (double& v : s.omega) {
            v *= amplitude / peak;
        }
    }
    return s;
}

LayeredState shear_layer(const LayeredGrid& grid, double amplitude)
{
    auto s = LayeredState::zeros(grid);
    for (int k = 1; k < grid.n3; ++k) {
        s.u_mean[static_cast<std::size_t>(k)] = {amplitude * std::sin(pi * grid.x3(k)), 0.0};
    }
    return s;
}

LayeredState build_initial(const LayeredGrid& grid, const InitialParams& params)
{
    grid.validate();
    switch (params.preset) {
    case InitialPreset::taylor_green:
        return taylor_green(grid, params.amplitude);
    case InitialPreset::random_bandlimited:
        return random_bandlimited(grid, params.seed, params.kmax, params.amplitude);
    case InitialPreset::shear_layer:
        return shear_layer(grid, params.amplitude);
    }
    throw std::invalid_argument("unknown initial condition");
}

}  // namespace majda
