/// @file solver.hpp
/// @brief Layered vorticity equation with Biot-Savart velocity and a
/// horizontally averaged mean flow.
///
///   d_t omega + U_h . grad_h omega = nu(x3) Laplace omega,   omega = 0 at x3 = 0, 1
///   U_h = grad_h^perp Laplace_h^{-1} omega + Ubar(x3)
///   r d_t Ubar = mu d_x3x3 Ubar,                            Ubar = 0 at x3 = 0, 1
///
/// Horizontal directions are pseudo-spectral, the vertical direction uses
/// centred second differences.  Advection is Adams-Bashforth 2 (Euler on
/// the first step), diffusion Crank-Nicolson, solved per horizontal
/// wavenumber as a tridiagonal system.
#pragma once

#include "majda/diagnostics.hpp"
#include "majda/spectral.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace majda {

enum class SolverMode { imex, picard };

std::string to_string(SolverMode mode);
SolverMode parse_solver_mode(const std::string& name);

struct SolverConfig {
    SolverMode mode = SolverMode::imex;
    double cfl = 0.5;
    double dt_max = 1e-3;
    bool dealias = true;
    /// Cut-off level L applied to the advecting velocity; empty disables it.
    std::optional<double> cutoff;
    double picard_tol = 1e-10;
    int picard_max_iter = 30;
    std::vector<double> nu;  ///< kinematic viscosity per vertical node
    std::vector<double> r;   ///< background density per vertical node
    double mu = 1.0;         ///< dynamic viscosity mu(Theta) of the mean flow

    /// Throws std::invalid_argument naming every problem found.
    void validate(const LayeredGrid& grid) const;
};

/// Raised when the requested step exceeds the advective limit.
class CflViolation : public std::runtime_error {
public:
    CflViolation(double requested, double admissible);
    double requested() const noexcept { return requested_; }
    double admissible() const noexcept { return admissible_; }

private:
    double requested_;
    double admissible_;
};

class PicardNonConvergence : public std::runtime_error {
public:
    explicit PicardNonConvergence(std::vector<double> residuals);
    const std::vector<double>& residuals() const noexcept { return residuals_; }

private:
    std::vector<double> residuals_;
};

/// Raised by run() when a structural invariant (walls, finiteness,
/// incompressibility) fails.
class InvariantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One Crank-Nicolson step of r d_t u = mu u'' for both components, with
/// u = 0 at the walls.  The mass matrix is the compact fourth-order one,
/// symmetrised as R^{1/2} M R^{1/2} so that the scheme dissipates a
/// weighted discrete energy.
void mean_flow_step(std::vector<std::array<double, 2>>& u_mean, const std::vector<double>& r, double mu, double dt);

struct PicardReport {
    int iterations = 0;
    std::vector<double> residuals;
};

/// State of the Adams-Bashforth history; needed for bit-exact restarts.
struct AdvectionHistory {
    bool valid = false;
    double dt_prev = 0.0;
    SpectralField n_prev;
};

class Solver {
public:
    Solver(const LayeredGrid& grid, SolverConfig config);

    const LayeredGrid& grid() const noexcept { return spectral_.grid(); }
    const Spectral& spectral() const noexcept { return spectral_; }
    const SolverConfig& config() const noexcept { return config_; }

    /// Advecting velocity: Biot-Savart plus mean flow, then b_L if a cut-off
    /// is configured.
    VectorField advecting_velocity(const LayeredState& state) const;

    /// cfl min(h1, h2) / max|u|, infinite for u = 0.
    double admissible_dt(const VectorField& u) const;

    /// Advances omega by dt with the given advecting velocity.  Does not
    /// touch the mean flow or the time.  Throws CflViolation when dt is
    /// above the admissible step for u.
    void advect_diffuse_step(LayeredState& state, const VectorField& u, double dt);

    /// Full step: velocity, vorticity update, mean-flow update, t += dt.
    /// dt = min(dt_max, admissible, dt_cap); returns the step taken.
    /// dt_cap = 0 leaves the state untouched.
    double step(LayeredState& state, double dt_cap = std::numeric_limits<double>::infinity());

    /// Fixed-point construction over one window of length dt:
    /// omega^{k+1} solves the Crank-Nicolson problem with the advection term
    /// averaged between the window start and the frozen velocity
    /// b_L(U[omega^k]).  Throws PicardNonConvergence after picard_max_iter.
    PicardReport picard_solve(LayeredState& state, double dt);

    const AdvectionHistory& history() const noexcept { return history_; }
    void set_history(AdvectionHistory h);
    void reset_history() { history_ = {}; }

    /// Report of the most recent Picard window taken through step().
    const PicardReport& last_picard() const noexcept { return last_picard_; }

    /// Number of velocity entries changed by b_L so far.
    std::size_t cutoff_activations() const noexcept { return cutoff_activations_; }

private:
    SpectralField nonlinear(const SpectralField& omega_hat, const VectorField& u) const;
    SpectralField crank_nicolson(const SpectralField& omega_hat, const SpectralField& forcing, double dt) const;
    Field to_physical(const SpectralField& omega_hat) const;
    VectorField velocity_from(const Field& omega, const std::vector<std::array<double, 2>>& u_mean) const;

    Spectral spectral_;
    SolverConfig config_;
    AdvectionHistory history_;
    PicardReport last_picard_;
    mutable std::size_t cutoff_activations_ = 0;
};

/// L = 2 (max|BS(omega)| + max|Ubar|), i.e. twice the measured Biot-Savart
/// constant times max|omega| plus the mean-flow size.
double default_cutoff_level(const Spectral& sp, const LayeredState& state);

struct RunOptions {
    double t_final = 0.0;
    int snapshot_every = 0;     ///< steps between snapshots, 0 = first and last only
    int diagnostics_every = 1;  ///< steps between diagnostics rows
};

struct RunObserver {
    std::function<void(const DiagnosticsRecord&)> on_diagnostics;
    std::function<void(const LayeredState&, const Solver&, long step)> on_snapshot;
};

struct RunSummary {
    long steps = 0;
    double t = 0.0;
    double omega0_max = 0.0;
    double omega_max = 0.0;     ///< max over the run of max|omega|
    double worst_energy_increase = 0.0;
    int max_picard_iterations = 0;
    std::size_t cutoff_activations = 0;
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

/// Relative tolerance of the discrete maximum principle check.
inline constexpr double kMaxPrincipleTol = 1e-12;
/// Allowed per-step energy increase, relative to the initial energy.
inline constexpr double kEnergyStepTol = 1e-8;
/// Allowed max|div_h U| relative to max|grad_h U|.
inline constexpr double kDivergenceTol = 1e-10;

/// Advances `state` to t_final, checking invariants after every step.
/// Maximum-principle and energy breaches are collected in the summary;
/// structural breaches throw InvariantViolation after the observer has
/// seen the offending state.
RunSummary run(Solver& solver, LayeredState& state, const RunOptions& options, const RunObserver& observer = {});

}  // namespace majda
