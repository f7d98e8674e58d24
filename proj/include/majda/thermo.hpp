/// @file thermo.hpp
/// @brief Constitutive relations for a monoatomic gas with radiation.
///
/// The molecular part of the pressure is written through a structural
/// function P of the scaling variable Z = rho / theta^{3/2}:
///
///   p(rho, theta) = theta^{5/2} P(Z) + (a/3) theta^4
///   e(rho, theta) = (3/2) theta^{5/2} P(Z) / rho + a theta^4 / rho
///   s(rho, theta) = S(Z) + (4a/3) theta^3 / rho,   S'(Z) = -(3/2) h(Z) / Z
///
/// with h(Z) = (5/3 P(Z) - P'(Z) Z) / Z.  Everything else in this header
/// (thermodynamic derivatives, validators, transport laws) is derived from
/// the structural function and the radiation constant.
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace majda::thermo {

enum class Preset { ideal_monoatomic, third_law_compliant, tabulated };

std::string to_string(Preset preset);
Preset parse_preset(const std::string& name);

/// Thermostatic state; both components must be strictly positive.
struct ThermoState {
    double rho = 1.0;
    double theta = 1.0;
};

/// Raised when a state leaves the positive quadrant.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when dp/drho > 0 or de/dtheta > 0 fails at a state.
class StabilityViolation : public std::runtime_error {
public:
    StabilityViolation(std::string inequality, ThermoState state, double value);
    const std::string& inequality() const noexcept { return inequality_; }
    ThermoState state() const noexcept { return state_; }
    double value() const noexcept { return value_; }

private:
    std::string inequality_;
    ThermoState state_;
    double value_;
};

/// Structural function P together with h and S.  Implementations are
/// immutable and shared between copies of an EquationOfState.
class StructuralFunction {
public:
    virtual ~StructuralFunction() = default;
    virtual double pressure(double z) const = 0;
    virtual double derivative(double z) const = 0;
    /// (5/3 P - P' Z) / Z for Z > 0.
    virtual double h(double z) const;
    /// S(Z), additive constant fixed by the implementation.
    virtual double entropy(double z) const = 0;
};

/// Equation of state.  Copies share the same underlying instance; identity
/// is what the relative-energy code checks before mixing states.
class EquationOfState {
public:
    /// P(Z) = Z, entropy constant chosen so that S(1) = 0.
    static EquationOfState ideal_monoatomic(double radiation_constant = 0.0);

    /// h(Z) = 2 / (3 (1 + Z)), S(Z) = ln(1 + 1/Z),
    /// P(Z) = Z^{5/3} (p_inf + int_Z^inf h(s) s^{-5/3} ds).
    static EquationOfState third_law_compliant(double p_inf = 1.0,
                                               double radiation_constant = 0.0);

    /// Monotone cubic interpolant through (Z_i, P_i).  Z must start at 0
    /// and be strictly increasing.
    static EquationOfState tabulated(std::vector<double> z, std::vector<double> p,
                                     double radiation_constant = 0.0);

    /// Two-column plain text table, '#' starts a comment.
    static EquationOfState from_table_file(const std::filesystem::path& path,
                                           double radiation_constant = 0.0);

    /// Any structural function supplied by the caller (tests, experiments).
    static EquationOfState custom(std::shared_ptr<const StructuralFunction> fn,
                                  double radiation_constant = 0.0,
                                  std::optional<double> p_inf = std::nullopt);

    Preset preset() const noexcept { return preset_; }
    double radiation_constant() const noexcept { return a_; }
    /// Declared asymptotic value of P(Z)/Z^{5/3}; empty for presets that
    /// do not claim one.
    std::optional<double> p_inf() const noexcept { return p_inf_; }
    std::uint64_t id() const noexcept { return id_; }
    bool same_instance(const EquationOfState& other) const noexcept { return id_ == other.id_; }

    double structural_pressure(double z) const { return fn_->pressure(z); }
    double structural_derivative(double z) const { return fn_->derivative(z); }
    double structural_h(double z) const { return fn_->h(z); }
    double structural_entropy(double z) const { return fn_->entropy(z); }

private:
    EquationOfState(Preset preset, std::shared_ptr<const StructuralFunction> fn, double a,
                    std::optional<double> p_inf);

    Preset preset_;
    std::shared_ptr<const StructuralFunction> fn_;
    double a_;
    std::optional<double> p_inf_;
    std::uint64_t id_;
};

double scaling_variable(ThermoState s);

double pressure(const EquationOfState& eos, ThermoState s);
double internal_energy(const EquationOfState& eos, ThermoState s);
double entropy(const EquationOfState& eos, ThermoState s);

/// Molecular parts alone; p_m = (2/3) rho e_m holds identically.
double molecular_pressure(const EquationOfState& eos, ThermoState s);
double molecular_internal_energy(const EquationOfState& eos, ThermoState s);

struct ThermoPartials {
    double dp_drho = 0.0;
    double dp_dtheta = 0.0;
    double de_dtheta = 0.0;
    double de_drho = 0.0;
};

/// Analytic for structural functions with a closed-form derivative, centred
/// differences for tabulated P.  Throws StabilityViolation when dp/drho or
/// de/dtheta is not strictly positive.
ThermoPartials thermo_partials(const EquationOfState& eos, ThermoState s);

/// Same values without the stability check.
ThermoPartials thermo_partials_unchecked(const EquationOfState& eos, ThermoState s);

// ---------------------------------------------------------------------------
// Structural validation
// ---------------------------------------------------------------------------

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    double c_bound = 0.0;  ///< sup of h over the sampled grid
    double z_max = 0.0;
    int n_samples = 0;

    bool passed(const std::string& name) const;
    bool all_passed() const;
    std::vector<std::string> failed() const;
    std::string summary() const;
};

/// Check names used in ValidationReport.
namespace check {
inline constexpr const char* zero_at_origin = "P(0)=0";
inline constexpr const char* increasing = "P'>0";
inline constexpr const char* h_bounded = "0<h<=c";
inline constexpr const char* scaled_decreasing = "P/Z^(5/3) decreasing";
inline constexpr const char* scaled_limit = "P/Z^(5/3)->p_inf";
inline constexpr const char* third_law = "S(Z)->0";
}  // namespace check

/// Relative tolerance of the asymptotic checks, evaluated at Z = z_max.
inline constexpr double kLimitTolerance = 1e-3;

ValidationReport validate_structural(const EquationOfState& eos, double z_max, int n_samples);

struct GrowthConstants {
    double lower = 0.0;  ///< sup (rho^{5/3} + theta^4) / (rho e)
    double upper = 0.0;  ///< sup rho e / (1 + rho^{5/3} + theta^4)
};

/// Empirical constants of the two-sided bound between rho e and
/// rho^{5/3} + theta^4 over a log-spaced box of states.
GrowthConstants energy_growth_constants(const EquationOfState& eos, double rho_min, double rho_max,
                                        double theta_min, double theta_max, int n_per_axis);

// ---------------------------------------------------------------------------
// Transport coefficients
// ---------------------------------------------------------------------------

using Matrix3 = std::array<std::array<double, 3>, 3>;
using Vector3 = std::array<double, 3>;

struct TransportCoefficients {
    std::function<double(double)> mu;
    std::function<double(double)> lambda_bulk;
    std::function<double(double)> kappa;
    double mu_low = 0.0;
    double lambda_up = 0.0;
    double kappa_low = 0.0;
    double kappa_up = 0.0;
    double beta = 7.0;

    /// mu = mu0 (1 + theta), lambda = lambda0 (1 + theta),
    /// kappa = kappa0 (1 + theta^beta); the bound constants equal the
    /// coefficients.
    static TransportCoefficients linear(double mu0, double lambda0, double kappa0, double beta);
};

struct TransportReport {
    bool mu_lower = false;
    bool lambda_bounds = false;
    bool kappa_bounds = false;
    bool beta_above_six = false;
    bool all() const { return mu_lower && lambda_bounds && kappa_bounds && beta_above_six; }
};

TransportReport validate_transport(const TransportCoefficients& tc, double theta_max, int n_samples);

/// Newtonian viscous stress.
Matrix3 stress_tensor(const TransportCoefficients& tc, double theta, const Matrix3& grad_u);

/// Fourier heat flux -kappa(theta) grad theta.
Vector3 heat_flux(const TransportCoefficients& tc, double theta, const Vector3& grad_theta);

}  // namespace majda::thermo
