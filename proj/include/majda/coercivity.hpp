/// @file coercivity.hpp
/// @brief Empirical coercivity constants of the relative energy.
#pragma once

#include "majda/relative_energy.hpp"

#include <iosfwd>
#include <string>

namespace majda {

struct CoercivitySample {
    std::size_t id = 0;
    PointState state;
    bool essential = false;
    /// Relative energy over the class-specific norm; NaN when the norm is zero.
    double ratio = 0.0;
};

struct CoercivityClass {
    /// Infimum of the ratio over the non-degenerate samples; NaN if none.
    double constant = 0.0;
    std::size_t used = 0;
    std::size_t degenerate = 0;
};

struct CoercivityReport {
    std::uint64_t seed = 0;
    double epsilon = 1.0;
    EssentialSet K;
    PointState reference;
    CoercivityClass essential;
    CoercivityClass residual;
    std::vector<CoercivitySample> samples;

    /// Both constants measured and strictly positive (a class without samples
    /// is not held against the report).
    bool passed() const;
    std::string summary() const;
};

/// Ratios for given states against (rho~, theta~, u~ = 0).  Inside K the
/// norm is eps^{-2}(|rho - rho~|^2 + |theta - theta~|^2) + |u|^2, outside it
/// is eps^{-2}(1 + rho e + rho |s|) + rho |u|^2.
CoercivityReport coercivity_from_samples(const thermo::EquationOfState& eos, const EssentialSet& K,
                                         thermo::ThermoState ref, const std::vector<PointState>& states,
                                         double epsilon);

/// Draws n_samples states log-uniformly in K and n_samples in the shell
/// between K and the box ten times larger, velocities uniformly in the ball of
/// radius u_radius, all from the counter-based generator seeded with seed.
CoercivityReport coercivity_check(const thermo::EquationOfState& eos, const EssentialSet& K, thermo::ThermoState ref,
                                  std::size_t n_samples, std::uint64_t seed, double epsilon = 1.0,
                                  double u_radius = 1.0);

/// `sample_id,rho,theta,ratio` with one row per sample.
void write_coercivity_csv(std::ostream& out, const CoercivityReport& report);

}  // namespace majda
