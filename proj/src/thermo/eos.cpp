#include "majda/thermo.hpp"

#include "../detail/two_column.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

// pchip.hpp in Boost 1.74 calls an unqualified isnan before declaring it.
#include <boost/math/special_functions/fpclassify.hpp>
namespace boost::math::interpolators {
using boost::math::isnan;
}
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace majda::thermo {

namespace {

using boost::math::quadrature::gauss_kronrod;

std::uint64_t next_instance_id()
{
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1, std::memory_order_relaxed);
}

double segment_integral(const std::function<double(double)>& f, double a, double b)
{
    if (a == b) {
        return 0.0;
    }
    return gauss_kronrod<double, 15>::integrate(f, a, b, 10, 1e-15);
}

// P(Z) = Z.
class IdealStructural final : public StructuralFunction {
public:
    double pressure(double z) const override { return z; }
    double derivative(double) const override { return 1.0; }
    double h(double) const override { return 2.0 / 3.0; }
    double entropy(double z) const override { return -std::log(z); }
};

// Structural function defined through a prescribed h:
//   P(Z) = Z^{5/3} (p_inf + I(Z)),  I(Z) = int_Z^inf h(s) s^{-5/3} ds.
// I is accumulated on a log-spaced table of nodes once; an evaluation only
// integrates the short piece between Z and the next node.  The integrals are
// carried out in y = ln s where the integrand h(e^y) e^{-2y/3} is smooth.
class HDefinedStructural final : public StructuralFunction {
public:
    HDefinedStructural(std::function<double(double)> h, std::function<double(double)> entropy,
                       double p_inf)
        : h_(std::move(h)), entropy_(std::move(entropy)), p_inf_(p_inf)
    {
        constexpr int kPerDecade = 8;
        const int n = static_cast<int>(std::lround((kLogMax - kLogMin) * kPerDecade)) + 1;
        log_nodes_.resize(n);
        tail_.resize(n);
        for (int k = 0; k < n; ++k) {
            log_nodes_[k] = std::log(10.0) * (kLogMin + static_cast<double>(k) / kPerDecade);
        }
        tail_[n - 1] = far_tail(log_nodes_[n - 1]);
        for (int k = n - 2; k >= 0; --k) {
            tail_[k] = tail_[k + 1] + segment_integral(integrand(), log_nodes_[k], log_nodes_[k + 1]);
        }
    }

    double pressure(double z) const override
    {
        if (z <= 0.0) {
            return 0.0;
        }
        return std::pow(z, 5.0 / 3.0) * (p_inf_ + tail(z));
    }

    double derivative(double z) const override
    {
        if (z <= 0.0) {
            return 1.5 * h_(0.0);
        }
        return 5.0 / 3.0 * pressure(z) / z - h_(z);
    }

    double h(double z) const override { return h_(z); }
    double entropy(double z) const override { return entropy_(z); }

    /// int_Z^inf h(s) s^{-5/3} ds
    double tail(double z) const
    {
        const double y = std::log(z);
        const int n = static_cast<int>(log_nodes_.size());
        if (y >= log_nodes_[n - 1]) {
            return far_tail(y);
        }
        if (y < log_nodes_[0]) {
            return tail_[0] + segment_integral(integrand(), y, log_nodes_[0]);
        }
        const auto it = std::upper_bound(log_nodes_.begin(), log_nodes_.end(), y);
        const auto k = static_cast<std::size_t>(it - log_nodes_.begin());
        // at most one table cell wide, where the integrand is analytic
        return tail_[k] + boost::math::quadrature::gauss<double, 20>::integrate(integrand(), y, log_nodes_[k]);
    }

private:
    static constexpr double kLogMin = -12.0;
    static constexpr double kLogMax = 12.0;

    std::function<double(double)> integrand() const
    {
        return [this](double y) { return h_(std::exp(y)) * std::exp(-2.0 * y / 3.0); };
    }

    double far_tail(double y0) const
    {
        boost::math::quadrature::exp_sinh<double> integrator;
        return integrator.integrate(integrand(), y0, std::numeric_limits<double>::infinity(), 1e-15);
    }

    std::function<double(double)> h_;
    std::function<double(double)> entropy_;
    double p_inf_;
    std::vector<double> log_nodes_;
    std::vector<double> tail_;
};

// Monotone cubic interpolant through a (Z, P) table.  Beyond the last node
// P is continued as P_last (Z / Z_last)^{5/3}, i.e. with h = 0 and S = 0.
// S(Z) = (3/2) int_Z^{Z_last} h(s)/s ds, cached at the nodes.
class TabulatedStructural final : public StructuralFunction {
public:
    TabulatedStructural(std::vector<double> z, std::vector<double> p)
        : z_(z), p_(p), interp_(std::move(z), std::move(p))
    {
        const std::size_t n = z_.size();
        entropy_at_node_.assign(n, 0.0);
        for (std::size_t k = n - 1; k-- > 1;) {
            entropy_at_node_[k] = entropy_at_node_[k + 1] + log_segment(z_[k], z_[k + 1]);
        }
        entropy_at_node_[0] = std::numeric_limits<double>::infinity();
    }

    double pressure(double z) const override
    {
        if (z >= z_.back()) {
            return p_.back() * std::pow(z / z_.back(), 5.0 / 3.0);
        }
        return interp_(std::max(z, 0.0));
    }

    double derivative(double z) const override
    {
        if (z >= z_.back()) {
            return 5.0 / 3.0 * pressure(z) / z;
        }
        return interp_.prime(std::max(z, 0.0));
    }

    double entropy(double z) const override
    {
        if (z >= z_.back()) {
            return 0.0;
        }
        if (z <= 0.0) {
            return std::numeric_limits<double>::infinity();
        }
        const auto it = std::upper_bound(z_.begin(), z_.end(), z);
        const auto k = static_cast<std::size_t>(it - z_.begin());
        return entropy_at_node_[k] + log_segment(z, z_[k]);
    }

private:
    double log_segment(double a, double b) const
    {
        auto f = [this](double y) { return 1.5 * h(std::exp(y)); };
        return segment_integral(f, std::log(a), std::log(b));
    }

    std::vector<double> z_;
    std::vector<double> p_;
    boost::math::interpolators::pchip<std::vector<double>> interp_;
    std::vector<double> entropy_at_node_;
};

void require_state(ThermoState s)
{
    if (!(s.rho > 0.0) || !(s.theta > 0.0) || !std::isfinite(s.rho) || !std::isfinite(s.theta)) {
        std::ostringstream os;
        os << "thermodynamic state outside the positive quadrant: rho=" << s.rho
           << " theta=" << s.theta;
        throw DomainError(os.str());
    }
}

}  // namespace

// ---------------------------------------------------------------------------

std::string to_string(Preset preset)
{
    switch (preset) {
        case Preset::ideal_monoatomic: return "ideal-monoatomic";
        case Preset::third_law_compliant: return "third-law-compliant";
        case Preset::tabulated: return "tabulated";
    }
    return "unknown";
}

Preset parse_preset(const std::string& name)
{
    if (name == "ideal-monoatomic" || name == "ideal") {
        return Preset::ideal_monoatomic;
    }
    if (name == "third-law-compliant" || name == "third-law") {
        return Preset::third_law_compliant;
    }
    if (name == "tabulated") {
        return Preset::tabulated;
    }
    throw std::invalid_argument("unknown equation-of-state preset '" + name + "'");
}

StabilityViolation::StabilityViolation(std::string inequality, ThermoState state, double value)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "thermodynamic stability violated: " << inequality << " fails at rho=" << state.rho
             << " theta=" << state.theta << " (value " << value << ")";
          return os.str();
      }()),
      inequality_(std::move(inequality)),
      state_(state),
      value_(value)
{
}

double StructuralFunction::h(double z) const
{
    return (5.0 / 3.0 * pressure(z) - derivative(z) * z) / z;
}

EquationOfState::EquationOfState(Preset preset, std::shared_ptr<const StructuralFunction> fn,
                                 double a, std::optional<double> p_inf)
    : preset_(preset), fn_(std::move(fn)), a_(a), p_inf_(p_inf), id_(next_instance_id())
{
    if (!(a >= 0.0)) {
        throw std::invalid_argument("radiation constant must be non-negative");
    }
}

EquationOfState EquationOfState::ideal_monoatomic(double radiation_constant)
{
    return {Preset::ideal_monoatomic, std::make_shared<IdealStructural>(), radiation_constant,
            std::nullopt};
}

EquationOfState EquationOfState::third_law_compliant(double p_inf, double radiation_constant)
{
    if (!(p_inf > 0.0)) {
        throw std::invalid_argument("p_inf must be positive");
    }
    auto h = [](double z) { return 2.0 / (3.0 * (1.0 + z)); };
    auto s = [](double z) { return std::log1p(1.0 / z); };
    return {Preset::third_law_compliant, std::make_shared<HDefinedStructural>(h, s, p_inf),
            radiation_constant, p_inf};
}

EquationOfState EquationOfState::tabulated(std::vector<double> z, std::vector<double> p,
                                           double radiation_constant)
{
    if (z.size() != p.size()) {
        throw std::invalid_argument("tabulated P: column lengths differ");
    }
    if (z.size() < 4) {
        throw std::invalid_argument("tabulated P: at least four rows are required");
    }
    if (z.front() != 0.0) {
        throw std::invalid_argument("tabulated P: first row must be at Z = 0");
    }
    for (std::size_t i = 1; i < z.size(); ++i) {
        if (!(z[i] > z[i - 1])) {
            throw std::invalid_argument("tabulated P: Z must be strictly increasing (row " +
                                        std::to_string(i + 1) + ")");
        }
    }
    return {Preset::tabulated, std::make_shared<TabulatedStructural>(std::move(z), std::move(p)),
            radiation_constant, std::nullopt};
}

EquationOfState EquationOfState::from_table_file(const std::filesystem::path& path,
                                                 double radiation_constant)
{
    auto [z, p] = detail::read_two_columns(path, "P table");
    return tabulated(std::move(z), std::move(p), radiation_constant);
}

EquationOfState EquationOfState::custom(std::shared_ptr<const StructuralFunction> fn,
                                        double radiation_constant, std::optional<double> p_inf)
{
    return {Preset::tabulated, std::move(fn), radiation_constant, p_inf};
}

// ---------------------------------------------------------------------------

double scaling_variable(ThermoState s)
{
    return s.rho / std::pow(s.theta, 1.5);
}

double molecular_pressure(const EquationOfState& eos, ThermoState s)
{
    require_state(s);
    return std::pow(s.theta, 2.5) * eos.structural_pressure(scaling_variable(s));
}

double molecular_internal_energy(const EquationOfState& eos, ThermoState s)
{
    require_state(s);
    return 1.5 * std::pow(s.theta, 2.5) / s.rho * eos.structural_pressure(scaling_variable(s));
}

double pressure(const EquationOfState& eos, ThermoState s)
{
    const double a = eos.radiation_constant();
    return molecular_pressure(eos, s) + a / 3.0 * std::pow(s.theta, 4);
}

double internal_energy(const EquationOfState& eos, ThermoState s)
{
    const double a = eos.radiation_constant();
    return molecular_internal_energy(eos, s) + a / s.rho * std::pow(s.theta, 4);
}

double entropy(const EquationOfState& eos, ThermoState s)
{
    require_state(s);
    const double a = eos.radiation_constant();
    return eos.structural_entropy(scaling_variable(s)) + 4.0 * a / 3.0 * std::pow(s.theta, 3) / s.rho;
}

ThermoPartials thermo_partials_unchecked(const EquationOfState& eos, ThermoState s)
{
    require_state(s);
    ThermoPartials d;
    if (eos.preset() == Preset::tabulated) {
        const double hr = 1e-5 * s.rho;
        const double ht = 1e-5 * s.theta;
        const ThermoState rp{s.rho + hr, s.theta};
        const ThermoState rm{s.rho - hr, s.theta};
        const ThermoState tp{s.rho, s.theta + ht};
        const ThermoState tm{s.rho, s.theta - ht};
        d.dp_drho = (pressure(eos, rp) - pressure(eos, rm)) / (2.0 * hr);
        d.dp_dtheta = (pressure(eos, tp) - pressure(eos, tm)) / (2.0 * ht);
        d.de_drho = (internal_energy(eos, rp) - internal_energy(eos, rm)) / (2.0 * hr);
        d.de_dtheta = (internal_energy(eos, tp) - internal_energy(eos, tm)) / (2.0 * ht);
        return d;
    }
    const double a = eos.radiation_constant();
    const double z = scaling_variable(s);
    const double p = eos.structural_pressure(z);
    const double dp = eos.structural_derivative(z);
    const double th32 = std::pow(s.theta, 1.5);
    const double th3 = s.theta * s.theta * s.theta;
    d.dp_drho = s.theta * dp;
    // 5/2 P - 3/2 P' Z = 3/2 h Z; the left side cancels badly at large Z.
    const double h = eos.structural_h(z);
    d.dp_dtheta = th32 * 1.5 * h * z + 4.0 * a / 3.0 * th3;
    d.de_dtheta = 2.25 * h + 4.0 * a * th3 / s.rho;
    d.de_drho = 1.5 * std::pow(s.theta, 2.5) / (s.rho * s.rho) * (dp * z - p) -
                a * th3 * s.theta / (s.rho * s.rho);
    return d;
}

ThermoPartials thermo_partials(const EquationOfState& eos, ThermoState s)
{
    const ThermoPartials d = thermo_partials_unchecked(eos, s);
    if (!(d.dp_drho > 0.0)) {
        throw StabilityViolation("dp/drho > 0", s, d.dp_drho);
    }
    if (!(d.de_dtheta > 0.0)) {
        throw StabilityViolation("de/dtheta > 0", s, d.de_dtheta);
    }
    return d;
}

}  // namespace majda::thermo
