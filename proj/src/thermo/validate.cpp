#include "majda/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace majda::thermo {

namespace {

std::vector<double> log_grid(double lo, double hi, int n)
{
    std::vector<double> out(static_cast<std::size_t>(n));
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
    }
    out.back() = hi;
    return out;
}

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

bool ValidationReport::passed(const std::string& name) const
{
    for (const auto& c : checks) {
        if (c.name == name) {
            return c.passed;
        }
    }
    throw std::out_of_range("no structural check named '" + name + "'");
}

bool ValidationReport::all_passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::vector<std::string> ValidationReport::failed() const
{
    std::vector<std::string> out;
    for (const auto& c : checks) {
        if (!c.passed) {
            out.push_back(c.name);
        }
    }
    return out;
}

std::string ValidationReport::summary() const
{
    std::ostringstream os;
    os << "structural validation (z_max=" << z_max << ", samples=" << n_samples << ")\n";
    for (const auto& c : checks) {
        os << "  [" << (c.passed ? "pass" : "FAIL") << "] " << c.name;
        if (!c.detail.empty()) {
            os << "  " << c.detail;
        }
        os << '\n';
    }
    os << "  empirical c_bound = " << fmt(c_bound) << '\n';
    return os.str();
}

ValidationReport validate_structural(const EquationOfState& eos, double z_max, int n_samples)
{
    if (!(z_max > 0.0)) {
        throw std::invalid_argument("validate_structural: z_max must be positive");
    }
    if (n_samples < 2) {
        throw std::invalid_argument("validate_structural: need at least two samples");
    }

    ValidationReport report;
    report.z_max = z_max;
    report.n_samples = n_samples;
    const auto zs = log_grid(z_max * 1e-12, z_max, n_samples);

    {
        const double p0 = eos.structural_pressure(0.0);
        report.checks.push_back({check::zero_at_origin, std::abs(p0) <= 1e-14, "P(0)=" + fmt(p0)});
    }

    {
        double worst = eos.structural_derivative(0.0);
        double where = 0.0;
        for (double z : zs) {
            const double d = eos.structural_derivative(z);
            if (d < worst || std::isnan(d)) {
                worst = d;
                where = z;
            }
        }
        report.checks.push_back({check::increasing, worst > 0.0,
                                 "min P'=" + fmt(worst) + " at Z=" + fmt(where)});
    }

    {
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (double z : zs) {
            const double h = eos.structural_h(z);
            lo = std::min(lo, h);
            hi = std::max(hi, h);
            if (std::isnan(h)) {
                lo = h;
                break;
            }
        }
        report.c_bound = hi;
        const bool ok = lo > 0.0 && std::isfinite(hi);
        report.checks.push_back({check::h_bounded, ok, "min h=" + fmt(lo) + " sup h=" + fmt(hi)});
    }

    {
        bool ok = true;
        double prev = eos.structural_pressure(zs.front()) / std::pow(zs.front(), 5.0 / 3.0);
        double at = 0.0;
        for (std::size_t i = 1; i < zs.size(); ++i) {
            const double q = eos.structural_pressure(zs[i]) / std::pow(zs[i], 5.0 / 3.0);
            if (q > prev * (1.0 + 1e-12)) {
                ok = false;
                at = zs[i];
                break;
            }
            prev = q;
        }
        report.checks.push_back(
            {check::scaled_decreasing, ok, ok ? std::string{} : "increase at Z=" + fmt(at)});
    }

    {
        const double q1 = eos.structural_pressure(z_max) / std::pow(z_max, 5.0 / 3.0);
        const double z0 = z_max / 10.0;
        const double q0 = eos.structural_pressure(z0) / std::pow(z0, 5.0 / 3.0);
        bool ok = q1 > 0.0 && std::abs(q1 - q0) <= kLimitTolerance * q1;
        std::string detail = "P/Z^(5/3)=" + fmt(q1) + " at Z_max, " + fmt(q0) + " at Z_max/10";
        if (const auto p_inf = eos.p_inf()) {
            ok = ok && std::abs(q1 - *p_inf) <= kLimitTolerance * *p_inf;
            detail += ", declared p_inf=" + fmt(*p_inf);
        }
        report.checks.push_back({check::scaled_limit, ok, detail});
    }

    {
        const double s1 = eos.structural_entropy(z_max);
        const double s0 = eos.structural_entropy(z_max / 10.0);
        const bool ok = std::abs(s1) <= kLimitTolerance && std::abs(s1) <= std::abs(s0);
        report.checks.push_back({check::third_law, ok, "S(Z_max)=" + fmt(s1)});
    }

    return report;
}

GrowthConstants energy_growth_constants(const EquationOfState& eos, double rho_min, double rho_max,
                                        double theta_min, double theta_max, int n_per_axis)
{
    GrowthConstants c;
    const auto rhos = log_grid(rho_min, rho_max, n_per_axis);
    const auto thetas = log_grid(theta_min, theta_max, n_per_axis);
    for (double rho : rhos) {
        for (double theta : thetas) {
            const double re = rho * internal_energy(eos, {rho, theta});
            const double g = std::pow(rho, 5.0 / 3.0) + std::pow(theta, 4);
            c.lower = std::max(c.lower, g / re);
            c.upper = std::max(c.upper, re / (1.0 + g));
        }
    }
    return c;
}

}  // namespace majda::thermo
