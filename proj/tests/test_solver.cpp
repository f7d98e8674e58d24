#include "doctest.h"

#include "majda/initial.hpp"
#include "majda/solver.hpp"

#include <cmath>
#include <numbers>

#ifdef MAJDA_HAVE_OPENMP
#include <omp.h>
#endif

using namespace majda;
using std::numbers::pi;

namespace {

SolverConfig uniform_config(const LayeredGrid& g, double nu, double r = 1.0)
{
    SolverConfig c;
    c.nu.assign(g.n_layers(), nu);
    c.r.assign(g.n_layers(), r);
    c.mu = nu * r;
    return c;
}

VectorField zero_velocity(const LayeredGrid& g)
{
    return {Field(g.size(), 0.0), Field(g.size(), 0.0)};
}

}  // namespace

TEST_CASE("mean flow: analytic decay of the first sine mode")
{
    const std::size_t n = 129;
    std::vector<std::array<double, 2>> u(n);
    for (std::size_t k = 0; k < n; ++k) {
        u[k] = {std::sin(pi * static_cast<double>(k) / 128.0), 0.0};
    }
    u.back() = {0.0, 0.0};
    const std::vector<double> r(n, 1.0);
    for (int i = 0; i < 1000; ++i) {
        mean_flow_step(u, r, 1.0, 1e-4);
    }
    const double amp = std::exp(-pi * pi * 0.1);
    CHECK(amp == doctest::Approx(0.372708).epsilon(1e-6));
    double err = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        err = std::max(err, std::abs(u[k][0] - amp * std::sin(pi * static_cast<double>(k) / 128.0)));
        CHECK(u[k][1] == 0.0);
    }
    CHECK(err < 1e-5);
    CHECK(u.front()[0] == 0.0);
    CHECK(u.back()[0] == 0.0);
}

TEST_CASE("mean flow: zero stays zero, weighted energy does not grow")
{
    const std::size_t n = 33;
    std::vector<std::array<double, 2>> zero(n, {0.0, 0.0});
    std::vector<double> r(n);
    for (std::size_t k = 0; k < n; ++k) {
        r[k] = std::exp(-2.0 * static_cast<double>(k) / 32.0);
    }
    mean_flow_step(zero, r, 0.3, 1e-2);
    for (const auto& v : zero) {
        CHECK(v[0] == 0.0);
        CHECK(v[1] == 0.0);
    }

    std::vector<std::array<double, 2>> u(n, {0.0, 0.0});
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double x = static_cast<double>(k) / 32.0;
        u[k] = {std::sin(3 * pi * x) + x * (1 - x), std::cos(7 * pi * x) * x * (1 - x) * 4};
    }
    auto energy = [&] {
        double e = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            e += r[k] * (u[k][0] * u[k][0] + u[k][1] * u[k][1]);
        }
        return e;
    };
    double prev = energy();
    for (double dt : {1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0}) {
        for (int i = 0; i < 5; ++i) {
            mean_flow_step(u, r, 0.3, dt);
            const double e = energy();
            CHECK(e <= prev * (1.0 + 1e-14));
            prev = e;
            CHECK(u.front()[0] == 0.0);
            CHECK(u.back()[1] == 0.0);
        }
    }
}

TEST_CASE("pure diffusion of the 3-D eigenmode")
{
    const LayeredGrid g{32, 32, 64};
    const double nu = 0.5;
    Solver solver(g, uniform_config(g, nu));
    auto s = taylor_green(g, 1.0);
    const auto u0 = zero_velocity(g);
    const double dt = 1e-3;
    for (int i = 0; i < 50; ++i) {
        solver.advect_diffuse_step(s, u0, dt);
    }
    const double expected = std::exp(-3.0 * nu * pi * pi * 0.05);
    const double got = s.omega[g.index(8, 8, 32)];  // sin(pi/2)^3 node
    CHECK(std::abs(got - expected) / expected < 1e-4);
    // shape is preserved
    const auto ref = taylor_green(g, got);
    double err = 0.0;
    for (std::size_t i = 0; i < s.omega.size(); ++i) {
        err = std::max(err, std::abs(s.omega[i] - ref.omega[i]));
    }
    CHECK(err < 1e-12);
}

TEST_CASE("zero vorticity stays zero")
{
    const LayeredGrid g{16, 16, 8};
    Solver solver(g, uniform_config(g, 0.1));
    auto s = LayeredState::zeros(g);
    for (int i = 0; i < 5; ++i) {
        solver.step(s);
    }
    for (double v : s.omega) {
        CHECK(v == 0.0);
    }
    CHECK(s.t == doctest::Approx(5e-3));
}

TEST_CASE("uniform translation over one period")
{
    const LayeredGrid g{128, 16, 2};
    auto cfg = uniform_config(g, 1e-8);
    cfg.dt_max = 5e-4;
    Solver solver(g, cfg);
    auto s = LayeredState::zeros(g);
    for (int i2 = 0; i2 < g.n2; ++i2) {
        for (int i1 = 0; i1 < g.n1; ++i1) {
            const double x = g.x1(i1);
            const double y = g.x2(i2);
            s.omega[g.index(i1, i2, 1)] = std::sin(pi * x) * std::cos(pi * y) + 0.5 * std::cos(2 * pi * x + 0.4);
        }
    }
    const auto initial = s.omega;
    const VectorField u{Field(g.size(), 1.0), Field(g.size(), 0.0)};
    // one period of the 2-periodic domain at speed 1
    for (int i = 0; i < 4000; ++i) {
        solver.advect_diffuse_step(s, u, 5e-4);
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < initial.size(); ++i) {
        num += (s.omega[i] - initial[i]) * (s.omega[i] - initial[i]);
        den += initial[i] * initial[i];
    }
    MESSAGE("translation L2 shape error " << std::sqrt(num / den));
    CHECK(std::sqrt(num / den) < 1e-3);
}

TEST_CASE("CFL violation carries the admissible step")
{
    const LayeredGrid g{16, 16, 4};
    Solver solver(g, uniform_config(g, 0.1));
    auto s = taylor_green(g, 1.0);
    const VectorField u{Field(g.size(), 10.0), Field(g.size(), 0.0)};
    const double adm = solver.admissible_dt(u);
    CHECK(adm == doctest::Approx(0.5 * (2.0 / 16) / 10.0));
    try {
        solver.advect_diffuse_step(s, u, 2 * adm);
        FAIL("expected CflViolation");
    } catch (const CflViolation& e) {
        CHECK(e.admissible() == doctest::Approx(adm));
        CHECK(e.requested() == doctest::Approx(2 * adm));
    }
    CHECK(solver.admissible_dt(zero_velocity(g)) == std::numeric_limits<double>::infinity());
}

TEST_CASE("a zero step leaves the state untouched")
{
    const LayeredGrid g{16, 16, 6};
    Solver solver(g, uniform_config(g, 0.1));
    auto s = random_bandlimited(g, 3, 3, 1.0);
    s.u_mean[2] = {0.3, 0.1};
    const auto before = s;
    CHECK(solver.step(s, 0.0) == 0.0);
    CHECK(s.omega == before.omega);
    CHECK(s.u_mean == before.u_mean);
    CHECK(s.t == before.t);
}

TEST_CASE("pure mean shear stays a decaying shear")
{
    const LayeredGrid g{16, 16, 32};
    auto cfg = uniform_config(g, 1.0);
    cfg.dt_max = 1e-3;
    Solver solver(g, cfg);
    auto s = shear_layer(g, 1.0);
    while (s.t < 0.1 - 1e-12) {
        solver.step(s, 0.1 - s.t);
    }
    for (double v : s.omega) {
        CHECK(v == 0.0);
    }
    CHECK(s.u_mean[16][0] == doctest::Approx(std::exp(-pi * pi * 0.1)).epsilon(1e-5));
}

TEST_CASE("solver configuration is validated")
{
    const LayeredGrid g{16, 16, 4};
    auto cfg = uniform_config(g, 0.1);
    cfg.picard_tol = -1.0;
    cfg.cfl = 2.0;
    try {
        Solver bad(g, cfg);
        FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("picard_tol") != std::string::npos);
        CHECK(msg.find("cfl") != std::string::npos);
    }
    auto short_nu = uniform_config(g, 0.1);
    short_nu.nu.pop_back();
    CHECK_THROWS_AS(Solver(g, short_nu), std::invalid_argument);
}

TEST_CASE("diagnostics")
{
    const LayeredGrid g{32, 32, 8};
    Spectral sp(g);
    const std::vector<double> r(g.n_layers(), 1.0);
    SUBCASE("zero state")
    {
        const auto d = diagnostics(sp, LayeredState::zeros(g), r);
        CHECK(d.energy == 0.0);
        CHECK(d.enstrophy == 0.0);
        CHECK(d.max_vorticity == 0.0);
        CHECK(d.div_residual == 0.0);
        CHECK(d.max_velocity == 0.0);
    }
    SUBCASE("single horizontal mode on every layer")
    {
        auto s = LayeredState::zeros(g);
        for (int k = 0; k <= g.n3; ++k) {
            for (int i2 = 0; i2 < g.n2; ++i2) {
                for (int i1 = 0; i1 < g.n1; ++i1) {
                    s.omega[g.index(i1, i2, k)] = std::sin(pi * g.x1(i1)) * std::sin(pi * g.x2(i2));
                }
            }
        }
        const auto d = diagnostics(sp, s, r);
        // |U|^2 integrates to 1/(2 pi^2) per layer; times r/2 over unit height
        CHECK(d.energy == doctest::Approx(1.0 / (4.0 * pi * pi)).epsilon(1e-13));
        CHECK(d.enstrophy == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(d.max_vorticity == doctest::Approx(1.0));
        CHECK(d.div_residual < 1e-12);
        CHECK(d.max_velocity == doctest::Approx(1.0 / (2 * pi)));
    }
}

TEST_CASE("run: t_final = 0 emits one row and one snapshot")
{
    const LayeredGrid g{16, 16, 8};
    Solver solver(g, uniform_config(g, 0.1));
    auto s = taylor_green(g, 1.0);
    int rows = 0;
    int snaps = 0;
    RunObserver obs;
    obs.on_diagnostics = [&](const DiagnosticsRecord&) { ++rows; };
    obs.on_snapshot = [&](const LayeredState&, const Solver&, long) { ++snaps; };
    const auto summary = run(solver, s, {0.0, 0, 1}, obs);
    CHECK(rows == 1);
    CHECK(snaps == 1);
    CHECK(summary.steps == 0);
    CHECK(summary.ok());
}

TEST_CASE("run: decaying Taylor-Green")
{
    const LayeredGrid g{32, 32, 16};
    auto cfg = uniform_config(g, 0.05);
    cfg.dt_max = 2e-3;
    Solver solver(g, cfg);
    auto s = taylor_green(g, 1.0);
    std::vector<DiagnosticsRecord> rows;
    RunObserver obs;
    obs.on_diagnostics = [&](const DiagnosticsRecord& d) { rows.push_back(d); };
    const auto summary = run(solver, s, {0.1, 0, 1}, obs);
    CHECK(summary.ok());
    CHECK(summary.steps == 50);
    CHECK(s.t == 0.1);
    REQUIRE(rows.size() == 51);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].energy < rows[i - 1].energy);
        CHECK(rows[i].max_vorticity <= rows[0].max_vorticity);
    }
}

TEST_CASE("run: restarting with the advection history is bit-exact")
{
    const LayeredGrid g{16, 16, 8};
    auto cfg = uniform_config(g, 0.02);
    // dyadic step and end times so both runs take exactly the same steps
    cfg.dt_max = 1.0 / 512;
    auto init = random_bandlimited(g, 11, 3, 2.0);
    init.u_mean[3] = {0.2, -0.1};

    Solver a(g, cfg);
    auto sa = init;
    run(a, sa, {20.0 / 512, 0, 1});

    Solver b(g, cfg);
    auto sb = init;
    run(b, sb, {10.0 / 512, 0, 1});
    Solver c(g, cfg);
    c.set_history(b.history());
    auto sc = sb;
    run(c, sc, {20.0 / 512, 0, 1});
    CHECK(sc.omega == sa.omega);
    CHECK(sc.u_mean == sa.u_mean);
    CHECK(sc.t == sa.t);
}

TEST_CASE("run: an inactive cut-off changes nothing")
{
    const LayeredGrid g{16, 16, 8};
    auto cfg = uniform_config(g, 0.02);
    auto init = random_bandlimited(g, 5, 3, 1.0);
    Solver plain(g, cfg);
    auto s1 = init;
    run(plain, s1, {0.05, 0, 1});
    cfg.cutoff = default_cutoff_level(plain.spectral(), init);
    Solver clipped(g, cfg);
    auto s2 = init;
    const auto summary = run(clipped, s2, {0.05, 0, 1});
    CHECK(summary.cutoff_activations == 0);
    CHECK(s1.omega == s2.omega);
}

TEST_CASE("run: an invariant breach throws after the observer saw it")
{
    const LayeredGrid g{16, 16, 4};
    Solver solver(g, uniform_config(g, 0.1));
    auto s = taylor_green(g, 1.0);
    s.omega[0] = 1.0;  // nonzero at the bottom wall
    CHECK_THROWS_AS(run(solver, s, {0.01, 0, 1}), InvariantViolation);
}

#ifdef MAJDA_HAVE_OPENMP
TEST_CASE("steps do not depend on the thread count")
{
    const LayeredGrid g{32, 32, 12};
    auto cfg = uniform_config(g, 0.01);
    const auto init = random_bandlimited(g, 21, 4, 3.0);
    const int saved = omp_get_max_threads();
    auto advance = [&](int threads) {
        omp_set_num_threads(threads);
        Solver solver(g, cfg);
        auto s = init;
        for (int i = 0; i < 5; ++i) {
            solver.step(s);
        }
        return s;
    };
    const auto one = advance(1);
    const auto four = advance(4);
    omp_set_num_threads(saved);
    CHECK(one.omega == four.omega);
}
#endif
