/// @file relative_energy.hpp
/// @brief Scaled relative energy between a compressible state and a reference
/// triple, in thermodynamic and in conservative variables.
///
/// With the Gibbs function g = e - theta s + p / rho the pointwise density is
///
///   E = 1/2 rho |u - u~|^2
///     + eps^{-2} [ rho e - th~ (rho s - r~ s~) - g~ (rho - r~) - r~ e~ ]
///
/// where quantities with a tilde are evaluated at (r~, th~).  The bracket is
/// the Bregman divergence of the total energy rho e(rho, S) in the
/// conservative pair (rho, S = rho s) and is nonnegative whenever the
/// equation of state is thermodynamically stable.
#pragma once

#include "majda/grid.hpp"
#include "majda/static_profile.hpp"
#include "majda/thermo.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace majda {

using Vec3 = std::array<double, 3>;
using Field3 = std::array<Field, 3>;

/// Thermodynamic state and velocity at one point.
struct PointState {
    double rho = 1.0;
    double theta = 1.0;
    Vec3 u{};
};

/// Raised when quantities bound to one equation of state are evaluated with
/// another.  Entropy constants differ between instances, so the thermal
/// bracket would no longer vanish at the reference.
class MixedEosError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Density, temperature and velocity on the nodes of a layered grid, with the
/// Mach/Froude scaling parameter.
struct CompressibleState {
    LayeredGrid grid;
    Field rho;
    Field theta;
    Field3 u;
    double epsilon = 1.0;

    static CompressibleState uniform(const LayeredGrid& grid, double rho, double theta, double epsilon);
    PointState at(std::size_t i) const { return {rho[i], theta[i], {u[0][i], u[1][i], u[2][i]}}; }
    /// Sizes, rho > 0, theta > 0, epsilon > 0.
    void validate() const;
};

/// Reference density, temperature and velocity.  The velocity vanishes on the
/// walls; the wall values of theta_tilde are the boundary temperature.
struct ReferenceTriple {
    LayeredGrid grid;
    Field r_tilde;
    Field theta_tilde;
    Field3 u_tilde;
    /// Set by bind(); evaluation with a different instance throws.
    std::optional<std::uint64_t> eos_id;

    static ReferenceTriple uniform(const LayeredGrid& grid, double r, double theta);
    /// r~ and th~ from the profile (one node per layer), u~ = (u, 0) or zero.
    static ReferenceTriple from_profile(const LayeredGrid& grid, const StaticProfile& profile,
                                        const VectorField* u = nullptr);

    ReferenceTriple& bind(const thermo::EquationOfState& eos)
    {
        eos_id = eos.id();
        return *this;
    }
    PointState at(std::size_t i) const
    {
        return {r_tilde[i], theta_tilde[i], {u_tilde[0][i], u_tilde[1][i], u_tilde[2][i]}};
    }
    /// Sizes, positivity, u~ = 0 on both walls.
    void validate() const;
};

/// Compact box K of essential states.
struct EssentialSet {
    double rho_min = 0.5;
    double rho_max = 2.0;
    double theta_min = 0.5;
    double theta_max = 2.0;

    /// [rho / factor, rho factor] x [theta / factor, theta factor].
    static EssentialSet around(double rho, double theta, double factor = 2.0);
    bool contains(double rho, double theta) const noexcept
    {
        return rho >= rho_min && rho <= rho_max && theta >= theta_min && theta <= theta_max;
    }
    /// Smallest logarithmic distance from (rho, theta) to the boundary of K;
    /// negative outside.
    double log_margin(double rho, double theta) const;
    void validate() const;
};

/// Pointwise relative energy.  Exactly zero when s equals ref.
double rel_energy_point(const thermo::EquationOfState& eos, const PointState& s, const PointState& ref,
                        double epsilon);

/// Pointwise density on the grid.
Field rel_energy_density(const thermo::EquationOfState& eos, const CompressibleState& s,
                         const ReferenceTriple& ref);

/// Trapezoid rule in x3, uniform sum over the horizontal nodes.
double integrate(const LayeredGrid& grid, const Field& f);

double rel_energy_total(const thermo::EquationOfState& eos, const CompressibleState& s,
                        const ReferenceTriple& ref);

/// Solves s(rho, theta) = s_target for theta in [theta_lo, theta_hi] by
/// Newton's method with a bisection safeguard (relative tolerance 1e-12).
/// Empty when the root is not bracketed or the iteration fails.
std::optional<double> invert_temperature(const thermo::EquationOfState& eos, double rho, double s_target,
                                         double theta_lo, double theta_hi);

/// Relative energy written as E(rho, S, m) minus its linearisation at the
/// reference, with E = |m|^2 / (2 rho) + eps^{-2} rho e.  The temperature is
/// recovered from S / rho inside [theta_min / 2, 2 theta_max] of K; empty if
/// that fails.
std::optional<double> rel_energy_conservative_point(const thermo::EquationOfState& eos, double rho, double S,
                                                    const Vec3& m, const PointState& ref, double epsilon,
                                                    const EssentialSet& K);

struct ConservativeResult {
    double total = 0.0;                ///< integral over points that converged
    std::vector<std::size_t> failed;   ///< node indices where theta could not be recovered
};

ConservativeResult rel_energy_conservative(const thermo::EquationOfState& eos, const LayeredGrid& grid,
                                           const Field& rho, const Field& S_total, const Field3& m,
                                           double epsilon, const ReferenceTriple& ref, const EssentialSet& K);

/// Integral of 1/2 eps^2 rho |u|^2 + rho e - th~ rho s.  Depends on the
/// additive entropy constant of the equation of state.
double ballistic_energy(const thermo::EquationOfState& eos, const CompressibleState& s, const Field& theta_tilde);

/// (field where (rho, theta) lies in K and 0 elsewhere, the complement).
std::pair<Field, Field> ess_res_split(const Field& field, const CompressibleState& s, const EssentialSet& K);

}  // namespace majda
