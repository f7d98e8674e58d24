/// @file static_profile.hpp
/// @brief Hydrostatic background density and the layer viscosity it induces.
#pragma once

#include "majda/thermo.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace majda {

/// Thrown when the density reaches zero, or dp/drho stops being positive,
/// before the top of the column.
class StratificationCollapse : public std::runtime_error {
public:
    StratificationCollapse(const std::string& what, double height)
        : std::runtime_error(what), height_(height)
    {
    }
    double height() const noexcept { return height_; }

private:
    double height_;
};

/// Density r and temperature Theta on uniform nodes x3_i = i / (n_nodes - 1).
struct StaticProfile {
    std::vector<double> x3;
    std::vector<double> r;
    std::vector<double> theta;
    double g = 0.0;

    std::size_t n_nodes() const noexcept { return x3.size(); }
    double spacing() const { return 1.0 / static_cast<double>(x3.size() - 1); }
    double r_min() const;
    /// Gravitational potential G(x3) = -g x3.
    double potential(std::size_t i) const { return -g * x3[i]; }

    /// Profile with r = r_value and Theta = theta_value at every node.
    static StaticProfile uniform(std::size_t n_nodes, double r_value, double theta_value, double g = 0.0);
};

/// Integrates dp/drho(r, Theta) r' = -r g upward from r(0) = r_bott with an
/// adaptive Dormand-Prince pair and samples the dense output on the grid.
StaticProfile solve_static(const thermo::EquationOfState& eos, double theta, double g, double r_bott,
                           std::size_t n_nodes);

/// Same balance with a height-dependent temperature:
///   dp/drho r' + dp/dtheta Theta' = -r g.
/// When dtheta is empty Theta' is taken by centred differences of theta.
StaticProfile solve_static_general(const thermo::EquationOfState& eos, const std::function<double(double)>& theta,
                                   double g, double r_bott, std::size_t n_nodes,
                                   const std::function<double(double)>& dtheta = {});

struct BalanceResidual {
    double max = 0.0;  ///< max over interior nodes of |d/dx3 p + r g|
    double l2 = 0.0;   ///< sqrt(h sum res^2) over the same nodes
};

BalanceResidual balance_residual(const thermo::EquationOfState& eos, const StaticProfile& profile);

/// nu_i = mu(Theta_i) / r_i.
std::vector<double> viscosity_profile(const StaticProfile& profile, const thermo::TransportCoefficients& tc);

/// Two columns "x3 r", one node per line.
void write_profile(std::ostream& out, const StaticProfile& profile);

/// Reads a two-column (x3, nu) table covering [0, 1] and interpolates it
/// monotonically onto n_nodes uniform nodes.
std::vector<double> load_nu_table(const std::filesystem::path& path, std::size_t n_nodes);

}  // namespace majda
