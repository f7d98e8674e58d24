/// @file initial.hpp
/// @brief Initial-condition presets and the counter-based random source.
#pragma once

#include "majda/grid.hpp"

#include <cstdint>
#include <string>

namespace majda {

/// Stateless generator: the value for (seed, counter) is splitmix64 applied
/// to the pair, so any draw can be reproduced without replaying a stream.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}
    std::uint64_t bits(std::uint64_t counter) const;
    /// Uniform on [0, 1) with 53 random bits.
    double uniform(std::uint64_t counter) const;
    /// Uniform on [lo, hi).
    double uniform(std::uint64_t counter, double lo, double hi) const { return lo + (hi - lo) * uniform(counter); }
    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
};

enum class InitialPreset { taylor_green, random_bandlimited, shear_layer };

std::string to_string(InitialPreset preset);
InitialPreset parse_initial_preset(const std::string& name);

struct InitialParams {
    InitialPreset preset = InitialPreset::taylor_green;
    std::uint64_t seed = 0;
    int kmax = 4;
    double amplitude = 1.0;
};

/// omega = A sin(pi x1) sin(pi x2) sin(pi x3), no mean flow.
LayeredState taylor_green(const LayeredGrid& grid, double amplitude);

/// Sum of modes a cos(pi (m1 x1 + m2 x2) + phase) sin(l pi x3) with
/// 0 < max(|m1|, |m2|) <= kmax and 1 <= l <= kmax, scaled so that
/// max|omega| on the grid equals the amplitude.  Zero horizontal mean in
/// every layer and zero at the walls.
LayeredState random_bandlimited(const LayeredGrid& grid, std::uint64_t seed, int kmax, double amplitude);

/// omega = 0, Ubar = A sin(pi x3) (1, 0).
LayeredState shear_layer(const LayeredGrid& grid, double amplitude);

LayeredState build_initial(const LayeredGrid& grid, const InitialParams& params);

}  // namespace majda
