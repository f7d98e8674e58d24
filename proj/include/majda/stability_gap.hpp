/// @file stability_gap.hpp
/// @brief Continuous dependence of the layered flow on its initial data.
///
/// Two trajectories U1 and U2 are advanced in lockstep with the same step
/// sizes.  Their weighted distance
///
///   D(t) = sum (r/2) |U1 - U2|^2 dV
///
/// satisfies dD/dt <= 2 |grad_h U1|_F D for the continuous problem, hence
///
///   D(t) <= D(0) exp(2 int_0^t |grad_h U1|_F ds) <= D(0) exp(C t),
///   C = 2 sup_s |grad_h U1(s)|_F.
#pragma once

#include "majda/solver.hpp"

#include <iosfwd>
#include <vector>

namespace majda {

struct GapPoint {
    double t = 0.0;
    double D = 0.0;
    double bound = 0.0;     ///< D(0) exp(C t)
    double gronwall = 0.0;  ///< D(0) exp(2 int |grad_h U1|_F), trapezoid in time
};

struct StabilityGapReport {
    std::vector<GapPoint> series;
    double C = 0.0;             ///< 2 max over the run of |grad_h U1|_F
    double observed_rate = 0.0; ///< max over t > 0 of log(D / D(0)) / t, for comparison with C
    bool within_bound = true;   ///< D <= bound and D <= gronwall at every step
    bool monotone = true;       ///< D never increased from one step to the next

    bool ok() const { return within_bound; }
};

/// sum (r/2)|U_a - U_b|^2 dV for the total velocities of two states.
double gap_distance(const Spectral& sp, const LayeredState& a, const LayeredState& b, const std::vector<double>& r);

/// Runs both states to t_final with the same configuration.  Both must start
/// at the same time on the configuration's grid.
StabilityGapReport stability_gap(const LayeredGrid& grid, const SolverConfig& config, LayeredState u1,
                                 LayeredState u2, double t_final);

/// `t,D,bound`.
void write_gap_csv(std::ostream& out, const StabilityGapReport& report);

}  // namespace majda
