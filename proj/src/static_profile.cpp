#include "majda/static_profile.hpp"

#include "detail/two_column.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include <boost/numeric/odeint.hpp>

// pchip.hpp in Boost 1.74 calls an unqualified isnan before declaring it.
#include <boost/math/special_functions/fpclassify.hpp>
namespace boost::math::interpolators {
using boost::math::isnan;
}
#include <boost/math/interpolators/pchip.hpp>

namespace majda {

namespace {

constexpr double kAbsTol = 1e-10;
constexpr double kRelTol = 1e-12;

std::vector<double> uniform_nodes(std::size_t n_nodes)
{
    if (n_nodes < 2) {
        throw std::invalid_argument("static profile: need at least two nodes");
    }
    std::vector<double> x(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
        x[i] = static_cast<double>(i) / static_cast<double>(n_nodes - 1);
    }
    return x;
}

std::string at_height(double x)
{
    std::ostringstream os;
    os.precision(6);
    os << " at x3=" << x;
    return os.str();
}

}  // namespace

double StaticProfile::r_min() const
{
    return *std::min_element(r.begin(), r.end());
}

StaticProfile StaticProfile::uniform(std::size_t n_nodes, double r_value, double theta_value, double g)
{
    StaticProfile p;
    p.x3 = uniform_nodes(n_nodes);
    p.r.assign(n_nodes, r_value);
    p.theta.assign(n_nodes, theta_value);
    p.g = g;
    return p;
}

StaticProfile solve_static(const thermo::EquationOfState& eos, double theta, double g, double r_bott,
                           std::size_t n_nodes)
{
    if (!(theta > 0.0)) {
        throw std::invalid_argument("solve_static: Theta must be positive");
    }
    return solve_static_general(
        eos, [theta](double) { return theta; }, g, r_bott, n_nodes, [](double) { return 0.0; });
}

StaticProfile solve_static_general(const thermo::EquationOfState& eos, const std::function<double(double)>& theta,
                                   double g, double r_bott, std::size_t n_nodes,
                                   const std::function<double(double)>& dtheta)
{
    if (!(r_bott > 0.0)) {
        throw std::invalid_argument("solve_static: r_bott must be positive");
    }
    StaticProfile out;
    out.x3 = uniform_nodes(n_nodes);
    out.g = g;
    out.theta.resize(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
        out.theta[i] = theta(out.x3[i]);
        if (!(out.theta[i] > 0.0)) {
            throw std::invalid_argument("solve_static: Theta must be positive" + at_height(out.x3[i]));
        }
    }

    auto theta_prime = [&](double x) {
        if (dtheta) {
            return dtheta(x);
        }
        const double h = 1e-6;
        return (theta(x + h) - theta(x - h)) / (2.0 * h);
    };

    using State = std::array<double, 1>;
    auto rhs = [&](const State& y, State& dydx, double x) {
        const double r = y[0];
        if (!(r > 0.0)) {
            throw StratificationCollapse("stratification collapse: density reached zero" + at_height(x), x);
        }
        const auto d = thermo::thermo_partials_unchecked(eos, {r, theta(x)});
        if (!(d.dp_drho > 0.0)) {
            throw StratificationCollapse("stratification collapse: dp/drho <= 0" + at_height(x), x);
        }
        dydx[0] = -(r * g + d.dp_dtheta * theta_prime(x)) / d.dp_drho;
    };

    namespace odeint = boost::numeric::odeint;
    auto stepper = odeint::make_dense_output(kAbsTol, kRelTol, odeint::runge_kutta_dopri5<State>());
    State y{r_bott};
    out.r.resize(n_nodes);
    std::size_t k = 0;
    odeint::integrate_times(stepper, rhs, y, out.x3.begin(), out.x3.end(), 1.0 / static_cast<double>(n_nodes - 1),
                            [&](const State& s, double x) {
                                if (!(s[0] > 0.0)) {
                                    throw StratificationCollapse(
                                        "stratification collapse: density reached zero" + at_height(x), x);
                                }
                                out.r[k++] = s[0];
                            });
    return out;
}

BalanceResidual balance_residual(const thermo::EquationOfState& eos, const StaticProfile& profile)
{
    const std::size_t n = profile.n_nodes();
    BalanceResidual res;
    if (n < 3) {
        return res;
    }
    const double h = profile.spacing();
    double sum = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double pp = thermo::pressure(eos, {profile.r[i + 1], profile.theta[i + 1]});
        const double pm = thermo::pressure(eos, {profile.r[i - 1], profile.theta[i - 1]});
        const double v = std::abs((pp - pm) / (2.0 * h) + profile.r[i] * profile.g);
        res.max = std::max(res.max, v);
        sum += v * v;
    }
    res.l2 = std::sqrt(h * sum);
    return res;
}

std::vector<double> viscosity_profile(const StaticProfile& profile, const thermo::TransportCoefficients& tc)
{
    std::vector<double> nu(profile.n_nodes());
    for (std::size_t i = 0; i < nu.size(); ++i) {
        nu[i] = tc.mu(profile.theta[i]) / profile.r[i];
    }
    return nu;
}

void write_profile(std::ostream& out, const StaticProfile& profile)
{
    out.precision(17);
    out << "# x3 r\n";
    for (std::size_t i = 0; i < profile.n_nodes(); ++i) {
        out << profile.x3[i] << ' ' << profile.r[i] << '\n';
    }
}

std::vector<double> load_nu_table(const std::filesystem::path& path, std::size_t n_nodes)
{
    auto [x, nu] = detail::read_two_columns(path, "viscosity table");
    if (x.size() < 4) {
        throw std::invalid_argument("viscosity table needs at least four rows");
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(nu[i] > 0.0)) {
            throw std::invalid_argument("viscosity table: nu must be positive");
        }
        if (i > 0 && !(x[i] > x[i - 1])) {
            throw std::invalid_argument("viscosity table: x3 must be strictly increasing");
        }
    }
    if (x.front() > 0.0 || x.back() < 1.0) {
        throw std::invalid_argument("viscosity table must cover [0, 1]");
    }
    const auto nodes = uniform_nodes(n_nodes);
    boost::math::interpolators::pchip<std::vector<double>> interp(std::move(x), std::move(nu));
    std::vector<double> out(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
        out[i] = interp(nodes[i]);
    }
    return out;
}

}  // namespace majda
