#include "doctest.h"

#include "majda/thermo.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace majda::thermo;

namespace {

// Composite Simpson in y = ln s of int_Z^inf h(s) s^{-5/3} ds, truncated
// where the integrand has decayed below round-off.  Independent of the
// library's Gauss-Kronrod / exp-sinh path.
double simpson_tail(double z)
{
    auto f = [](double y) {
        const double s = std::exp(y);
        return 2.0 / (3.0 * (1.0 + s)) * std::exp(-2.0 * y / 3.0);
    };
    const double a = std::log(z);
    const double b = a + 60.0;
    const int n = 200000;
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    }
    return sum * h / 3.0;
}

double fd(const std::function<double(double)>& f, double x)
{
    const double h = 1e-3 * x;
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

double rel(double a, double b, double scale)
{
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), scale});
}

}  // namespace

TEST_CASE("pressure reduces to the ideal gas for P(Z) = Z")
{
    const auto eos = EquationOfState::ideal_monoatomic(0.0);
    CHECK(pressure(eos, {2.0, 3.0}) == doctest::Approx(6.0).epsilon(1e-14));
    const auto rad = EquationOfState::ideal_monoatomic(3.0);
    CHECK(pressure(rad, {1.0, 1.0}) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("third-law pressure matches quadrature oracle")
{
    const auto eos = EquationOfState::third_law_compliant(1.0, 0.0);
    // mpmath, 30 digits: P(1) = 1 + int_1^inf h s^{-5/3} ds
    constexpr double p1 = 1.25289854421715163921543590921;
    CHECK(std::abs(1.0 + simpson_tail(1.0) - p1) < 1e-12);
    CHECK(pressure(eos, {1.0, 1.0}) == doctest::Approx(p1).epsilon(1e-13));

    for (double z : {1e-14, 1e-7, 0.01, 0.37, 3.3, 100.0, 1e5, 5e12, 1e15}) {
        const double expected = std::pow(z, 5.0 / 3.0) * (1.0 + simpson_tail(z));
        CHECK(eos.structural_pressure(z) == doctest::Approx(expected).epsilon(1e-11));
    }
    // closed-form h is recovered from P and P'
    for (double z : {1e-3, 0.5, 7.0, 1e4}) {
        const double h = (5.0 / 3.0 * eos.structural_pressure(z) - eos.structural_derivative(z) * z) / z;
        CHECK(h == doctest::Approx(2.0 / (3.0 * (1.0 + z))).epsilon(1e-10));
    }
    CHECK(eos.structural_pressure(0.0) == 0.0);
    CHECK(eos.structural_derivative(0.0) == doctest::Approx(1.0));
}

TEST_CASE("internal energy examples and the monoatomic identity")
{
    const auto ideal = EquationOfState::ideal_monoatomic(0.0);
    CHECK(internal_energy(ideal, {1.0, 2.0}) == doctest::Approx(3.0));
    const auto rad = EquationOfState::ideal_monoatomic(3.0);
    CHECK(internal_energy(rad, {1.0, 1.0}) == doctest::Approx(4.5));

    const auto third = EquationOfState::third_law_compliant(1.0, 2.0);
    const auto table = EquationOfState::tabulated({0.0, 0.5, 1.0, 2.0, 4.0, 8.0},
                                                  {0.0, 0.5, 1.05, 2.3, 5.2, 12.0}, 0.5);
    for (const auto* eos : {&ideal, &rad, &third, &table}) {
        for (double rho : {0.01, 0.3, 1.0, 7.0}) {
            for (double theta : {0.05, 0.9, 2.0, 11.0}) {
                const ThermoState s{rho, theta};
                const double pm = molecular_pressure(*eos, s);
                const double em = molecular_internal_energy(*eos, s);
                CHECK(3.0 * pm / (2.0 * rho) == doctest::Approx(em).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("entropy examples")
{
    const auto eos = EquationOfState::third_law_compliant(1.0, 0.0);
    CHECK(entropy(eos, {1.0, 1.0}) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    // Z = 1000 at theta = 1
    CHECK(entropy(eos, {1000.0, 1.0}) == doctest::Approx(9.99500333083533e-4).epsilon(1e-12));

    const auto rad = EquationOfState::third_law_compliant(1.0, 3.0);
    const ThermoState s{2.0, 1.0};
    CHECK(entropy(rad, s) - rad.structural_entropy(2.0) == doctest::Approx(2.0));

    const auto ideal = EquationOfState::ideal_monoatomic(0.0);
    CHECK(entropy(ideal, {1.0, 1.0}) == 0.0);
}

TEST_CASE("entropy is strictly decreasing in Z")
{
    for (const auto& eos : {EquationOfState::ideal_monoatomic(), EquationOfState::third_law_compliant()}) {
        double prev = eos.structural_entropy(1e-8);
        for (int i = 1; i <= 400; ++i) {
            const double z = std::pow(10.0, -8.0 + 16.0 * i / 400.0);
            const double s = eos.structural_entropy(z);
            CHECK(s < prev);
            prev = s;
        }
    }
}

TEST_CASE("partials: ideal examples")
{
    const auto ideal = EquationOfState::ideal_monoatomic(0.0);
    for (double theta : {0.2, 1.0, 3.5}) {
        CHECK(thermo_partials(ideal, {0.7, theta}).dp_drho == doctest::Approx(theta));
    }
    const auto rad = EquationOfState::ideal_monoatomic(3.0);
    CHECK(thermo_partials(rad, {1.0, 1.0}).dp_dtheta == doctest::Approx(5.0));
    CHECK(thermo_partials(rad, {1.0, 1.0}).de_dtheta == doctest::Approx(1.5 + 12.0));
}

TEST_CASE("partials: tabulated centred differences agree with an independent stencil")
{
    const auto eos = EquationOfState::tabulated({0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0},
                                                {0.0, 0.5, 1.05, 2.3, 5.2, 12.0, 28.0}, 0.3);
    for (double rho : {0.3, 1.1, 2.5}) {
        for (double theta : {0.6, 1.0, 1.7}) {
            const ThermoState s{rho, theta};
            const auto d = thermo_partials(eos, s);
            auto p_r = [&](double r) { return pressure(eos, {r, theta}); };
            auto p_t = [&](double t) { return pressure(eos, {rho, t}); };
            auto e_t = [&](double t) { return internal_energy(eos, {rho, t}); };
            // pchip is only C1: use a small step for the reference as well
            auto fd2 = [](const std::function<double(double)>& f, double x) {
                const double h = 3e-7 * x;
                return (f(x + h) - f(x - h)) / (2 * h);
            };
            CHECK(rel(d.dp_drho, fd2(p_r, rho), 1e-12) < 1e-6);
            CHECK(rel(d.dp_dtheta, fd2(p_t, theta), 1e-12) < 1e-6);
            CHECK(rel(d.de_dtheta, fd2(e_t, theta), 1e-12) < 1e-6);
            // dp/drho = theta P'(Z) from the interpolant derivative
            CHECK(rel(d.dp_drho, theta * eos.structural_derivative(scaling_variable(s)), 1e-12) < 1e-6);
        }
    }
}

TEST_CASE("partials: stability violation names the inequality")
{
    // P decreasing between Z = 1 and Z = 2
    const auto eos = EquationOfState::tabulated({0.0, 1.0, 2.0, 3.0, 4.0}, {0.0, 1.0, 0.5, 2.0, 3.0});
    try {
        (void)thermo_partials(eos, {1.5, 1.0});
        FAIL("expected a StabilityViolation");
    } catch (const StabilityViolation& e) {
        CHECK(e.inequality() == "dp/drho > 0");
    }
    CHECK_THROWS_AS(pressure(eos, {-1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(entropy(eos, {1.0, 0.0}), DomainError);
}

TEST_CASE("Gibbs relation holds to 1e-8 on a 20x20 grid")
{
    for (const auto& eos : {EquationOfState::ideal_monoatomic(0.0), EquationOfState::ideal_monoatomic(0.7),
                            EquationOfState::third_law_compliant(1.0, 0.0),
                            EquationOfState::third_law_compliant(2.0, 0.4)}) {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            for (int j = 0; j < 20; ++j) {
                const double rho = std::pow(10.0, -1.0 + 2.0 * i / 19.0);
                const double theta = std::pow(10.0, -1.0 + 2.0 * j / 19.0);
                auto s_t = [&](double t) { return entropy(eos, {rho, t}); };
                auto e_t = [&](double t) { return internal_energy(eos, {rho, t}); };
                auto s_r = [&](double r) { return entropy(eos, {r, theta}); };
                auto e_r = [&](double r) { return internal_energy(eos, {r, theta}); };
                const double p = pressure(eos, {rho, theta});
                const double lhs_t = theta * fd(s_t, theta);
                const double rhs_t = fd(e_t, theta);
                const double lhs_r = theta * fd(s_r, rho);
                const double rhs_r = fd(e_r, rho) - p / (rho * rho);
                worst = std::max(worst, rel(lhs_t, rhs_t, 1e-300));
                worst = std::max(worst, rel(lhs_r, rhs_r, 1e-300));
            }
        }
        INFO("preset " << to_string(eos.preset()) << " a=" << eos.radiation_constant());
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("analytic partials agree with finite differences")
{
    const auto eos = EquationOfState::third_law_compliant(1.5, 0.8);
    for (double rho : {0.05, 1.0, 20.0}) {
        for (double theta : {0.1, 1.0, 5.0}) {
            const auto d = thermo_partials(eos, {rho, theta});
            auto p_r = [&](double r) { return pressure(eos, {r, theta}); };
            auto p_t = [&](double t) { return pressure(eos, {rho, t}); };
            auto e_r = [&](double r) { return internal_energy(eos, {r, theta}); };
            auto e_t = [&](double t) { return internal_energy(eos, {rho, t}); };
            CHECK(rel(d.dp_drho, fd(p_r, rho), 1e-300) < 1e-9);
            // p is nearly theta-independent at large Z, so the difference
            // quotient loses digits relative to p / theta, not to dp/dtheta
            const double p_scale = pressure(eos, {rho, theta}) / theta;
            const double e_scale = internal_energy(eos, {rho, theta}) / theta;
            CHECK(rel(d.dp_dtheta, fd(p_t, theta), p_scale) < 1e-9);
            CHECK(rel(d.de_drho, fd(e_r, rho), 1e-12) < 1e-8);
            CHECK(rel(d.de_dtheta, fd(e_t, theta), e_scale) < 1e-9);
        }
    }
}

TEST_CASE("structural validator")
{
    SUBCASE("ideal fails exactly the asymptotic checks")
    {
        const auto r = validate_structural(EquationOfState::ideal_monoatomic(), 1e6, 200);
        const auto failed = r.failed();
        REQUIRE(failed.size() == 2);
        CHECK(failed[0] == check::scaled_limit);
        CHECK(failed[1] == check::third_law);
        CHECK(r.c_bound == doctest::Approx(2.0 / 3.0));
    }
    SUBCASE("third-law preset passes everything")
    {
        const auto r = validate_structural(EquationOfState::third_law_compliant(), 1e6, 200);
        INFO(r.summary());
        CHECK(r.all_passed());
        CHECK(r.c_bound <= 2.0 / 3.0 + 1e-9);
    }
    SUBCASE("constant zero P fails monotonicity")
    {
        const auto eos = EquationOfState::tabulated({0.0, 1.0, 2.0, 3.0}, {0.0, 0.0, 0.0, 0.0});
        const auto r = validate_structural(eos, 1e3, 50);
        CHECK_FALSE(r.passed(check::increasing));
        CHECK(r.passed(check::zero_at_origin));
    }
    SUBCASE("argument checks")
    {
        CHECK_THROWS_AS(validate_structural(EquationOfState::ideal_monoatomic(), 0.0, 10), std::invalid_argument);
        CHECK_THROWS_AS(validate_structural(EquationOfState::ideal_monoatomic(), 1.0, 1), std::invalid_argument);
    }
}

TEST_CASE("energy growth constants are finite for the compliant preset")
{
    const auto eos = EquationOfState::third_law_compliant(1.0, 1.0);
    const auto c = energy_growth_constants(eos, 1e-4, 1e4, 1e-3, 1e3, 60);
    MESSAGE("growth constants: lower=" << c.lower << " upper=" << c.upper);
    CHECK(std::isfinite(c.lower));
    CHECK(std::isfinite(c.upper));
    CHECK(c.lower > 0.0);
    CHECK(c.upper > 0.0);
    CHECK(c.lower < 10.0);
    CHECK(c.upper < 10.0);
}

TEST_CASE("tabulated table file")
{
    const auto path = std::filesystem::temp_directory_path() / "majda_ptable.txt";
    {
        std::ofstream out(path);
        out << "# Z P\n0 0\n0.5 0.5\n1 1.05  # comment\n\n2 2.3\n4 5.2\n";
    }
    const auto eos = EquationOfState::from_table_file(path, 0.0);
    CHECK(eos.structural_pressure(1.0) == doctest::Approx(1.05));
    CHECK(eos.structural_pressure(0.0) == 0.0);
    {
        std::ofstream out(path);
        out << "0 0\n1 1\n0.5 2\n3 3\n";
    }
    CHECK_THROWS_AS(EquationOfState::from_table_file(path, 0.0), std::invalid_argument);
    std::filesystem::remove(path);
}

TEST_CASE("stress tensor")
{
    const auto tc = TransportCoefficients::linear(1.0, 0.0, 1.0, 7.0);
    Matrix3 zero{};
    CHECK(stress_tensor(tc, 1.0, zero) == zero);

    Matrix3 id{};
    id[0][0] = id[1][1] = id[2][2] = 1.0;
    for (const auto& row : stress_tensor(tc, 2.0, id)) {
        for (double v : row) {
            CHECK(std::abs(v) < 1e-15);
        }
    }

    Matrix3 rot{};
    rot[0][1] = 0.3;
    rot[1][0] = -0.3;
    rot[0][2] = 1.2;
    rot[2][0] = -1.2;
    for (const auto& row : stress_tensor(tc, 0.5, rot)) {
        for (double v : row) {
            CHECK(v == 0.0);
        }
    }

    const auto bulk = TransportCoefficients::linear(0.7, 0.4, 1.0, 7.0);
    Matrix3 g{{{0.1, -2.0, 0.4}, {0.3, 1.5, 0.0}, {-0.7, 0.2, -0.9}}};
    const auto s = stress_tensor(bulk, 1.3, g);
    const double div = 0.1 + 1.5 - 0.9;
    CHECK(s[0][0] + s[1][1] + s[2][2] == doctest::Approx(3.0 * bulk.lambda_bulk(1.3) * div));
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            CHECK(s[i][j] == s[j][i]);
        }
    }
}

TEST_CASE("heat flux")
{
    const auto tc = TransportCoefficients::linear(1.0, 0.0, 1.0, 7.0);
    CHECK(heat_flux(tc, 1.0, {0.0, 0.0, 0.0}) == Vector3{0.0, 0.0, 0.0});
    const auto q = heat_flux(tc, 1.0, {1.0, 0.0, 0.0});
    CHECK(q[0] == doctest::Approx(-2.0));
    CHECK(q[1] == 0.0);
    const Vector3 g{0.3, -1.0, 2.0};
    for (double theta : {0.1, 1.0, 4.0}) {
        const auto f = heat_flux(tc, theta, g);
        CHECK(f[0] * g[0] + f[1] * g[1] + f[2] * g[2] <= 0.0);
    }
}

TEST_CASE("transport bounds")
{
    const auto tc = TransportCoefficients::linear(0.5, 0.2, 1.0, 7.0);
    CHECK(validate_transport(tc, 50.0, 500).all());
    auto bad = tc;
    bad.beta = 5.0;
    CHECK_FALSE(validate_transport(bad, 50.0, 500).beta_above_six);
    bad = tc;
    bad.mu = [](double) { return 0.1; };
    CHECK_FALSE(validate_transport(bad, 50.0, 500).mu_lower);
}

TEST_CASE("copies share instance identity")
{
    const auto a = EquationOfState::ideal_monoatomic();
    const auto b = a;
    const auto c = EquationOfState::ideal_monoatomic();
    CHECK(a.same_instance(b));
    CHECK_FALSE(a.same_instance(c));
}
