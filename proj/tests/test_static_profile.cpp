#include "doctest.h"

#include "majda/static_profile.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace majda;
using thermo::EquationOfState;

namespace {

// Classical RK4 for dp/drho r' + dp/dtheta Theta' = -r g on the ideal gas,
// where the balance reads Theta r' + r Theta' = -r g.
double rk4_ideal(double r0, double g, const std::function<double(double)>& th,
                 const std::function<double(double)>& dth, double x_end, int steps)
{
    auto f = [&](double x, double r) { return -(r * g + r * dth(x)) / th(x); };
    const double h = x_end / steps;
    double r = r0;
    for (int i = 0; i < steps; ++i) {
        const double x = i * h;
        const double k1 = f(x, r);
        const double k2 = f(x + h / 2, r + h / 2 * k1);
        const double k3 = f(x + h / 2, r + h / 2 * k2);
        const double k4 = f(x + h, r + h * k3);
        r += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return r;
}

double max_error(const StaticProfile& p, const std::function<double(double)>& exact)
{
    double e = 0.0;
    for (std::size_t i = 0; i < p.n_nodes(); ++i) {
        e = std::max(e, std::abs(p.r[i] - exact(p.x3[i])));
    }
    return e;
}

}  // namespace

TEST_CASE("isothermal ideal gas gives the exponential atmosphere")
{
    const auto eos = EquationOfState::ideal_monoatomic(0.0);
    const auto p = solve_static(eos, 1.0, 1.0, 1.0, 65);
    CHECK(std::abs(p.r.back() - std::exp(-1.0)) < 1e-8);
    CHECK(max_error(p, [](double x) { return std::exp(-x); }) < 1e-8);
    const double rk = rk4_ideal(1.0, 1.0, [](double) { return 1.0; }, [](double) { return 0.0; }, 1.0, 2000);
    CHECK(std::abs(p.r.back() - rk) < 1e-8);

    const auto hot = solve_static(eos, 2.5, 3.0, 0.7, 33);
    CHECK(max_error(hot, [](double x) { return 0.7 * std::exp(-3.0 * x / 2.5); }) < 1e-8);
    CHECK(hot.r_min() > 0.0);
}

TEST_CASE("zero gravity keeps the bottom density")
{
    const auto p = solve_static(EquationOfState::third_law_compliant(), 1.3, 0.0, 2.0, 17);
    for (double r : p.r) {
        CHECK(r == 2.0);
    }
}

TEST_CASE("radiation does not change the isothermal profile")
{
    const auto a0 = solve_static(EquationOfState::ideal_monoatomic(0.0), 1.0, 1.0, 1.0, 33);
    const auto a3 = solve_static(EquationOfState::ideal_monoatomic(3.0), 1.0, 1.0, 1.0, 33);
    CHECK(a0.r == a3.r);
}

TEST_CASE("general solver")
{
    const auto eos = EquationOfState::ideal_monoatomic(0.0);
    SUBCASE("constant temperature reproduces solve_static")
    {
        const auto a = solve_static(eos, 1.0, 1.0, 1.0, 65);
        const auto b = solve_static_general(eos, [](double) { return 1.0; }, 1.0, 1.0, 65);
        for (std::size_t i = 0; i < a.n_nodes(); ++i) {
            CHECK(std::abs(a.r[i] - b.r[i]) < 1e-12);
        }
    }
    auto th = [](double x) { return 1.0 + x; };
    auto dth = [](double) { return 1.0; };
    SUBCASE("linear temperature without gravity")
    {
        const auto p = solve_static_general(eos, th, 0.0, 1.0, 33, dth);
        CHECK(max_error(p, [](double x) { return 1.0 / (1.0 + x); }) < 1e-9);
    }
    SUBCASE("linear temperature with gravity")
    {
        const auto p = solve_static_general(eos, th, 1.0, 1.0, 33, dth);
        const double rk = rk4_ideal(1.0, 1.0, th, dth, 1.0, 20000);
        CHECK(std::abs(p.r.back() - rk) < 1e-7);
        CHECK(max_error(p, [](double x) { return std::pow(1.0 + x, -2.0); }) < 1e-8);
    }
    SUBCASE("finite-difference Theta' when no derivative is given")
    {
        const auto p = solve_static_general(eos, th, 1.0, 1.0, 33);
        CHECK(max_error(p, [](double x) { return std::pow(1.0 + x, -2.0); }) < 1e-7);
    }
}

TEST_CASE("stratification collapse reports the height")
{
    // P decreases between Z = 1 and Z = 2; starting at Z = 3 the column
    // thins into that band before x3 = 1.
    const auto eos = EquationOfState::tabulated({0.0, 1.0, 2.0, 3.0, 4.0}, {0.0, 1.0, 0.5, 2.0, 3.0});
    try {
        (void)solve_static(eos, 1.0, 5.0, 3.0, 33);
        FAIL("expected collapse");
    } catch (const StratificationCollapse& e) {
        CHECK(e.height() > 0.0);
        CHECK(e.height() < 1.0);
    }
    CHECK_THROWS_AS(solve_static(eos, 1.0, 1.0, -1.0, 33), std::invalid_argument);
}

TEST_CASE("balance residual")
{
    const auto eos = EquationOfState::ideal_monoatomic(0.0);
    SUBCASE("second order on the exact exponential")
    {
        auto exact = [](std::size_t n) {
            auto p = StaticProfile::uniform(n, 1.0, 1.0, 1.0);
            for (std::size_t i = 0; i < n; ++i) {
                p.r[i] = std::exp(-p.x3[i]);
            }
            return p;
        };
        const auto r1 = balance_residual(eos, exact(129));
        const auto r2 = balance_residual(eos, exact(257));
        const double order = std::log2(r1.max / r2.max);
        CHECK(order == doctest::Approx(2.0).epsilon(0.02));
        CHECK(std::log2(r1.l2 / r2.l2) == doctest::Approx(2.0).epsilon(0.02));
        CHECK(r2.max < 1e-5);
    }
    SUBCASE("unbalanced constant density")
    {
        const auto r = balance_residual(eos, StaticProfile::uniform(17, 2.0, 1.0, 3.0));
        CHECK(r.max == doctest::Approx(6.0));
    }
    SUBCASE("balanced constant density")
    {
        const auto r = balance_residual(eos, StaticProfile::uniform(17, 2.0, 1.0, 0.0));
        CHECK(r.max == 0.0);
        CHECK(r.l2 == 0.0);
    }
}

TEST_CASE("viscosity profile")
{
    thermo::TransportCoefficients tc = thermo::TransportCoefficients::linear(1.0, 0.0, 1.0, 7.0);
    tc.mu = [](double) { return 2.0; };
    for (double nu : viscosity_profile(StaticProfile::uniform(9, 1.0, 1.0), tc)) {
        CHECK(nu == 2.0);
    }
    tc.mu = [](double) { return 1.0; };
    const auto p = solve_static(EquationOfState::ideal_monoatomic(), 1.0, 1.0, 1.0, 65);
    const auto nu = viscosity_profile(p, tc);
    double worst_slope = 0.0;
    for (std::size_t i = 0; i < nu.size(); ++i) {
        CHECK(nu[i] == doctest::Approx(std::exp(p.x3[i])).epsilon(1e-8));
        if (i > 0) {
            worst_slope = std::max(worst_slope, std::abs(nu[i] - nu[i - 1]) / p.spacing());
        }
    }
    CHECK(worst_slope < std::exp(1.0) * 1.01);
}

TEST_CASE("profile export and viscosity table")
{
    const auto p = solve_static(EquationOfState::ideal_monoatomic(), 1.0, 1.0, 1.0, 5);
    std::ostringstream os;
    write_profile(os, p);
    std::istringstream in(os.str());
    std::string header;
    std::getline(in, header);
    double x = 0.0;
    double r = 0.0;
    int rows = 0;
    while (in >> x >> r) {
        CHECK(r == p.r[static_cast<std::size_t>(rows)]);
        ++rows;
    }
    CHECK(rows == 5);

    const auto path = std::filesystem::temp_directory_path() / "majda_nu.txt";
    {
        std::ofstream out(path);
        out << "# x3 nu\n0 1\n0.25 1.5\n0.5 2\n0.75 2.5\n1 3\n";
    }
    const auto nu = load_nu_table(path, 9);
    for (std::size_t i = 0; i < nu.size(); ++i) {
        CHECK(nu[i] == doctest::Approx(1.0 + 2.0 * static_cast<double>(i) / 8.0));
    }
    {
        std::ofstream out(path);
        out << "0 1\n0.5 -1\n0.7 1\n1 1\n";
    }
    CHECK_THROWS(load_nu_table(path, 9));
    std::filesystem::remove(path);
}
