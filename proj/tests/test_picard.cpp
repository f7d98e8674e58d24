#include "doctest.h"

#include "majda/initial.hpp"
#include "majda/solver.hpp"

#include <cmath>

using namespace majda;

namespace {

SolverConfig picard_config(const LayeredGrid& g, double nu)
{
    SolverConfig c;
    c.mode = SolverMode::picard;
    c.nu.assign(g.n_layers(), nu);
    c.r.assign(g.n_layers(), 1.0);
    c.mu = nu;
    return c;
}

double max_diff(const Field& a, const Field& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

LayeredState advance(const LayeredGrid& g, SolverConfig cfg, LayeredState s, double dt, double t_final)
{
    cfg.dt_max = dt;
    Solver solver(g, cfg);
    run(solver, s, {t_final, 0, 1});
    return s;
}

}  // namespace

TEST_CASE("Picard: zero vorticity converges in one iteration")
{
    const LayeredGrid g{16, 16, 8};
    Solver solver(g, picard_config(g, 0.1));
    auto s = shear_layer(g, 0.5);
    const auto rep = solver.picard_solve(s, 1e-3);
    CHECK(rep.iterations == 1);
    REQUIRE(rep.residuals.size() == 1);
    CHECK(rep.residuals[0] == 0.0);
    for (double v : s.omega) {
        CHECK(v == 0.0);
    }
    CHECK(s.t == 1e-3);
}

TEST_CASE("Picard: a vanishing cut-off level reduces to pure diffusion")
{
    const LayeredGrid g{16, 16, 8};
    auto cfg = picard_config(g, 0.05);
    cfg.cutoff = 1e-14;
    Solver picard(g, cfg);
    auto imex_cfg = cfg;
    imex_cfg.mode = SolverMode::imex;
    Solver diffusion(g, imex_cfg);

    auto s = random_bandlimited(g, 3, 3, 1.0);
    auto ref = s;
    const VectorField still{Field(g.size(), 0.0), Field(g.size(), 0.0)};
    for (int i = 0; i < 10; ++i) {
        picard.picard_solve(s, 1e-3);
        diffusion.advect_diffuse_step(ref, still, 1e-3);
    }
    CHECK(max_diff(s.omega, ref.omega) < 1e-12);
}

TEST_CASE("Picard and IMEX agree on the steady Taylor-Green pattern")
{
    const LayeredGrid g{32, 32, 32};
    auto cfg = picard_config(g, 0.05);
    const auto init = taylor_green(g, 1.0);
    const auto p = advance(g, cfg, init, 1e-3, 0.1);
    cfg.mode = SolverMode::imex;
    const auto e = advance(g, cfg, init, 1e-3, 0.1);
    CHECK(max_diff(p.omega, e.omega) < 1e-6);
}

TEST_CASE("Picard is second order in time")
{
    const LayeredGrid g{16, 16, 8};
    auto cfg = picard_config(g, 0.01);
    auto init = random_bandlimited(g, 17, 3, 4.0);
    init.u_mean[4] = {0.5, -0.3};
    const double t_final = 1.0 / 16;
    const auto ref = advance(g, cfg, init, 1.0 / 4096, t_final);
    std::vector<double> errors;
    for (double dt : {1.0 / 128, 1.0 / 256, 1.0 / 512}) {
        errors.push_back(max_diff(advance(g, cfg, init, dt, t_final).omega, ref.omega));
    }
    MESSAGE("Picard errors " << errors[0] << " " << errors[1] << " " << errors[2]);
    for (std::size_t i = 1; i < errors.size(); ++i) {
        const double ratio = errors[i - 1] / errors[i];
        CHECK(ratio > 3.5);
        CHECK(ratio < 4.5);
    }
}

TEST_CASE("Picard: non-convergence reports the residual history")
{
    const LayeredGrid g{16, 16, 8};
    auto cfg = picard_config(g, 0.01);
    cfg.picard_max_iter = 2;
    cfg.picard_tol = 1e-15;
    Solver solver(g, cfg);
    auto s = random_bandlimited(g, 9, 3, 5.0);
    const auto before = s;
    try {
        solver.picard_solve(s, 1e-2);
        FAIL("expected PicardNonConvergence");
    } catch (const PicardNonConvergence& e) {
        REQUIRE(e.residuals().size() == 2);
        CHECK(e.residuals()[1] < e.residuals()[0]);
    }
    CHECK(s.omega == before.omega);
    CHECK(s.t == before.t);
}

TEST_CASE("Picard through run records iteration counts")
{
    const LayeredGrid g{16, 16, 8};
    auto cfg = picard_config(g, 0.02);
    cfg.dt_max = 1e-2;
    Solver solver(g, cfg);
    auto s = random_bandlimited(g, 4, 3, 2.0);
    const auto summary = run(solver, s, {0.05, 0, 1});
    CHECK(summary.ok());
    CHECK(summary.max_picard_iterations >= 2);
    CHECK(summary.max_picard_iterations <= cfg.picard_max_iter);
    CHECK(solver.last_picard().iterations >= 2);
}
