#include "majda/solver.hpp"

#include "majda/cutoff.hpp"

#include "detail/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace majda {

namespace {

using cplx = std::complex<double>;
constexpr cplx I{0.0, 1.0};

std::string num(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

std::string to_string(SolverMode mode)
{
    return mode == SolverMode::imex ? "imex" : "picard";
}

SolverMode parse_solver_mode(const std::string& name)
{
    if (name == "imex") {
        return SolverMode::imex;
    }
    if (name == "picard") {
        return SolverMode::picard;
    }
    throw std::invalid_argument("unknown solver mode '" + name + "' (expected imex or picard)");
}

void SolverConfig::validate(const LayeredGrid& grid) const
{
    std::vector<std::string> errs;
    if (!(cfl > 0.0 && cfl <= 1.0)) {
        errs.push_back("cfl must lie in (0, 1]");
    }
    if (!(dt_max > 0.0)) {
        errs.push_back("dt_max must be positive");
    }
    if (cutoff && !(*cutoff > 0.0)) {
        errs.push_back("cutoff level must be positive");
    }
    if (!(picard_tol > 0.0)) {
        errs.push_back("picard_tol must be positive");
    }
    if (picard_max_iter < 1) {
        errs.push_back("picard_max_iter must be at least 1");
    }
    if (nu.size() != grid.n_layers() || r.size() != grid.n_layers()) {
        errs.push_back("nu and r need one value per vertical node (" + std::to_string(grid.n_layers()) + ")");
    } else {
        if (!std::all_of(nu.begin(), nu.end(), [](double v) { return v > 0.0; })) {
            errs.push_back("nu must be positive at every node");
        }
        if (!std::all_of(r.begin(), r.end(), [](double v) { return v > 0.0; })) {
            errs.push_back("r must be positive at every node");
        }
    }
    if (!(mu > 0.0)) {
        errs.push_back("mu must be positive");
    }
    if (!errs.empty()) {
        std::string msg = "invalid solver configuration:";
        for (const auto& e : errs) {
            msg += "\n  " + e;
        }
        throw std::invalid_argument(msg);
    }
}

CflViolation::CflViolation(double requested, double admissible)
    : std::runtime_error("time step " + num(requested) + " exceeds the advective limit " + num(admissible)),
      requested_(requested), admissible_(admissible)
{
}

namespace {

std::string picard_message(const std::vector<double>& res)
{
    std::string msg = "Picard iteration did not converge in " + std::to_string(res.size()) + " iterations; residuals:";
    for (double r : res) {
        msg += " " + num(r);
    }
    return msg;
}

}  // namespace

PicardNonConvergence::PicardNonConvergence(std::vector<double> residuals)
    : std::runtime_error(picard_message(residuals)), residuals_(std::move(residuals))
{
}

void mean_flow_step(std::vector<std::array<double, 2>>& u_mean, const std::vector<double>& r, double mu, double dt)
{
    if (dt == 0.0) {
        return;
    }
    const std::size_t n = u_mean.size();
    if (n < 3 || r.size() != n) {
        throw std::invalid_argument("mean_flow_step: need at least three nodes and one density per node");
    }
    if (!(dt > 0.0) || !(mu > 0.0)) {
        throw std::invalid_argument("mean_flow_step: dt and mu must be positive");
    }
    const std::size_t m = n - 2;
    const double h = 1.0 / static_cast<double>(n - 1);
    const double s = 0.5 * dt * mu / (h * h);

    // mass[i] couples interior node i + 1 to i + 2
    std::vector<double> off(m > 0 ? m - 1 : 0);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        off[i] = std::sqrt(r[i + 1] * r[i + 2]) / 12.0;
    }
    std::vector<double> a(m), b(m), c(m), scratch;
    for (std::size_t i = 0; i < m; ++i) {
        b[i] = 10.0 / 12.0 * r[i + 1] + 2.0 * s;
        a[i] = i > 0 ? off[i - 1] - s : 0.0;
        c[i] = i + 1 < m ? off[i] - s : 0.0;
    }
    for (int comp = 0; comp < 2; ++comp) {
        std::vector<double> d(m);
        for (std::size_t i = 0; i < m; ++i) {
            const double u = u_mean[i + 1][comp];
            const double ul = u_mean[i][comp];
            const double ur = u_mean[i + 2][comp];
            double v = 10.0 / 12.0 * r[i + 1] * u + s * (ul - 2.0 * u + ur);
            if (i > 0) {
                v += off[i - 1] * ul;
            }
            if (i + 1 < m) {
                v += off[i] * ur;
            }
            d[i] = v;
        }
        detail::solve_tridiagonal(a, b, c, d, scratch);
        for (std::size_t i = 0; i < m; ++i) {
            u_mean[i + 1][comp] = d[i];
        }
        u_mean.front()[comp] = 0.0;
        u_mean.back()[comp] = 0.0;
    }
}

Solver::Solver(const LayeredGrid& grid, SolverConfig config) : spectral_(grid), config_(std::move(config))
{
    config_.validate(grid);
}

VectorField Solver::velocity_from(const Field& omega, const std::vector<std::array<double, 2>>& u_mean) const
{
    LayeredState tmp;
    tmp.omega = omega;
    tmp.u_mean = u_mean;
    auto u = total_velocity(spectral_, tmp);
    if (config_.cutoff) {
        cutoff_activations_ += apply_cutoff(u, *config_.cutoff);
    }
    return u;
}

VectorField Solver::advecting_velocity(const LayeredState& state) const
{
    return velocity_from(state.omega, state.u_mean);
}

double Solver::admissible_dt(const VectorField& u) const
{
    double umax = 0.0;
    for (std::size_t i = 0; i < u.u1.size(); ++i) {
        umax = std::max(umax, std::hypot(u.u1[i], u.u2[i]));
    }
    if (umax == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const auto& g = grid();
    return config_.cfl * std::min(g.h1(), g.h2()) / umax;
}

SpectralField Solver::nonlinear(const SpectralField& omega_hat, const VectorField& u) const
{
    const auto& g = grid();
    const std::size_t M = spectral_.modes();
    const std::size_t L = g.layer_size();
    const int half = spectral_.half();
    SpectralField out(M * g.n_layers(), cplx{});
    const bool dealias = config_.dealias;

    auto keep = [&](int j1, int j2) {
        return dealias ? spectral_.in_dealias_band(j1, j2) : !spectral_.is_nyquist(j1, j2);
    };

    const auto interior = static_cast<std::ptrdiff_t>(g.n3 - 1);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t kk = 0; kk < interior; ++kk) {
        const std::size_t k = static_cast<std::size_t>(kk) + 1;
        std::vector<cplx> a(M), b(M);
        Field ux(L), uy(L), wx(L), wy(L), prod(L);
        const double* u1 = u.u1.data() + k * L;
        const double* u2 = u.u2.data() + k * L;
        if (dealias) {
            for (auto [src, dst] : {std::pair{u1, ux.data()}, std::pair{u2, uy.data()}}) {
                spectral_.forward_layer(src, a.data());
                for (int j2 = 0; j2 < g.n2; ++j2) {
                    for (int j1 = 0; j1 < half; ++j1) {
                        if (!spectral_.in_dealias_band(j1, j2)) {
                            a[spectral_.mode_index(j1, j2)] = cplx{};
                        }
                    }
                }
                spectral_.backward_layer(a.data(), dst);
            }
        } else {
            std::copy(u1, u1 + L, ux.begin());
            std::copy(u2, u2 + L, uy.begin());
        }
        const cplx* w = omega_hat.data() + k * M;
        for (int j2 = 0; j2 < g.n2; ++j2) {
            for (int j1 = 0; j1 < half; ++j1) {
                const std::size_t m = spectral_.mode_index(j1, j2);
                const bool k_on = keep(j1, j2);
                a[m] = k_on ? I * spectral_.k1(j1) * w[m] : cplx{};
                b[m] = k_on ? I * spectral_.k2(j2) * w[m] : cplx{};
            }
        }
        spectral_.backward_layer(a.data(), wx.data());
        spectral_.backward_layer(b.data(), wy.data());
        for (std::size_t i = 0; i < L; ++i) {
            prod[i] = ux[i] * wx[i] + uy[i] * wy[i];
        }
        cplx* n = out.data() + k * M;
        spectral_.forward_layer(prod.data(), n);
        for (int j2 = 0; j2 < g.n2; ++j2) {
            for (int j1 = 0; j1 < half; ++j1) {
                const std::size_t m = spectral_.mode_index(j1, j2);
                n[m] = (dealias && !spectral_.in_dealias_band(j1, j2)) ? cplx{} : -n[m];
            }
        }
    }
    return out;
}

SpectralField Solver::crank_nicolson(const SpectralField& omega_hat, const SpectralField& forcing, double dt) const
{
    const auto& g = grid();
    const std::size_t M = spectral_.modes();
    const int half = spectral_.half();
    const std::size_t n = static_cast<std::size_t>(g.n3 - 1);
    const double h2inv = 1.0 / (g.h3() * g.h3());
    SpectralField out(omega_hat.size(), cplx{});

    const auto total = static_cast<std::ptrdiff_t>(M);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t mm = 0; mm < total; ++mm) {
        const std::size_t m = static_cast<std::size_t>(mm);
        const int j1 = static_cast<int>(m % static_cast<std::size_t>(half));
        const int j2 = static_cast<int>(m / static_cast<std::size_t>(half));
        const double kk = spectral_.k1(j1) * spectral_.k1(j1) + spectral_.k2(j2) * spectral_.k2(j2);
        std::vector<double> a(n), b(n), c(n), scratch;
        std::vector<cplx> d(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t k = i + 1;
            const double nu = config_.nu[k];
            const double off = -0.5 * dt * nu * h2inv;
            a[i] = off;
            c[i] = off;
            b[i] = 1.0 + 0.5 * dt * nu * (2.0 * h2inv + kk);
            const cplx w = omega_hat[k * M + m];
            const cplx wl = omega_hat[(k - 1) * M + m];
            const cplx wr = omega_hat[(k + 1) * M + m];
            const cplx lap = nu * ((wr - 2.0 * w + wl) * h2inv - kk * w);
            d[i] = w + 0.5 * dt * lap + dt * forcing[k * M + m];
        }
        detail::solve_tridiagonal(a, b, c, d, scratch);
        for (std::size_t i = 0; i < n; ++i) {
            out[(i + 1) * M + m] = d[i];
        }
    }
    return out;
}

Field Solver::to_physical(const SpectralField& omega_hat) const
{
    Field w = spectral_.backward(omega_hat);
    const auto& g = grid();
    std::fill(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(g.layer_size()), 0.0);
    std::fill(w.end() - static_cast<std::ptrdiff_t>(g.layer_size()), w.end(), 0.0);
    return w;
}

void Solver::advect_diffuse_step(LayeredState& state, const VectorField& u, double dt)
{
    if (dt == 0.0) {
        return;
    }
    if (!(dt > 0.0)) {
        throw std::invalid_argument("advect_diffuse_step: dt must be non-negative");
    }
    const double adm = admissible_dt(u);
    if (dt > adm * (1.0 + 1e-12)) {
        throw CflViolation(dt, adm);
    }
    const auto w_hat = spectral_.forward(state.omega);
    auto n_now = nonlinear(w_hat, u);
    SpectralField forcing;
    if (history_.valid) {
        const double ratio = dt / (2.0 * history_.dt_prev);
        forcing.resize(n_now.size());
        for (std::size_t i = 0; i < n_now.size(); ++i) {
            forcing[i] = (1.0 + ratio) * n_now[i] - ratio * history_.n_prev[i];
        }
    } else {
        forcing = n_now;
    }
    const auto w_new = crank_nicolson(w_hat, forcing, dt);
    history_.valid = true;
    history_.dt_prev = dt;
    history_.n_prev = std::move(n_now);
    state.omega = to_physical(w_new);
}

double Solver::step(LayeredState& state, double dt_cap)
{
    if (!(dt_cap > 0.0)) {
        return 0.0;
    }
    const auto u = advecting_velocity(state);
    const double dt = std::min({config_.dt_max, admissible_dt(u), dt_cap});
    if (config_.mode == SolverMode::picard) {
        last_picard_ = picard_solve(state, dt);
        return dt;
    }
    advect_diffuse_step(state, u, dt);
    mean_flow_step(state.u_mean, config_.r, config_.mu, dt);
    state.t += dt;
    return dt;
}

PicardReport Solver::picard_solve(LayeredState& state, double dt)
{
    PicardReport report;
    if (dt == 0.0) {
        return report;
    }
    if (!(dt > 0.0)) {
        throw std::invalid_argument("picard_solve: dt must be non-negative");
    }
    const auto u0 = advecting_velocity(state);
    const double adm = admissible_dt(u0);
    if (dt > adm * (1.0 + 1e-12)) {
        throw CflViolation(dt, adm);
    }
    const auto w0_hat = spectral_.forward(state.omega);
    const auto n0 = nonlinear(w0_hat, u0);

    auto u_mean_new = state.u_mean;
    mean_flow_step(u_mean_new, config_.r, config_.mu, dt);

    Field w_k = state.omega;
    SpectralField w_k_hat = w0_hat;
    SpectralField forcing(n0.size());
    for (int it = 1; it <= config_.picard_max_iter; ++it) {
        const auto u_k = velocity_from(w_k, u_mean_new);
        const auto n_k = nonlinear(w_k_hat, u_k);
        for (std::size_t i = 0; i < forcing.size(); ++i) {
            forcing[i] = 0.5 * (n0[i] + n_k[i]);
        }
        auto w_next_hat = crank_nicolson(w0_hat, forcing, dt);
        Field w_next = to_physical(w_next_hat);
        double diff = 0.0;
        for (std::size_t i = 0; i < w_next.size(); ++i) {
            diff = std::max(diff, std::abs(w_next[i] - w_k[i]));
        }
        report.residuals.push_back(diff);
        w_k = std::move(w_next);
        w_k_hat = std::move(w_next_hat);
        if (diff < config_.picard_tol) {
            report.iterations = it;
            state.omega = std::move(w_k);
            state.u_mean = std::move(u_mean_new);
            state.t += dt;
            history_ = {};
            return report;
        }
    }
    throw PicardNonConvergence(report.residuals);
}

void Solver::set_history(AdvectionHistory h)
{
    if (h.valid && (h.n_prev.size() != spectral_.modes() * grid().n_layers() || !(h.dt_prev > 0.0))) {
        throw std::invalid_argument("advection history does not match the grid");
    }
    history_ = std::move(h);
}

double default_cutoff_level(const Spectral& sp, const LayeredState& state)
{
    const auto u = biot_savart_layer(sp, state.omega);
    double umax = 0.0;
    for (std::size_t i = 0; i < u.u1.size(); ++i) {
        umax = std::max({umax, std::abs(u.u1[i]), std::abs(u.u2[i])});
    }
    double mean = 0.0;
    for (const auto& v : state.u_mean) {
        mean = std::max({mean, std::abs(v[0]), std::abs(v[1])});
    }
    const double level = 2.0 * (umax + mean);
    return level > 0.0 ? level : 1.0;
}

namespace {

std::string structural_problem(const LayeredGrid& g, const LayeredState& s, const DiagnosticsRecord& d)
{
    const std::size_t L = g.layer_size();
    for (std::size_t i = 0; i < L; ++i) {
        if (s.omega[i] != 0.0 || s.omega[s.omega.size() - L + i] != 0.0) {
            return "vorticity is nonzero at a wall";
        }
    }
    if (s.u_mean.front() != std::array<double, 2>{0.0, 0.0} || s.u_mean.back() != std::array<double, 2>{0.0, 0.0}) {
        return "mean flow is nonzero at a wall";
    }
    if (!std::isfinite(d.energy) || !std::isfinite(d.max_vorticity) || !std::isfinite(d.max_velocity)) {
        return "non-finite values in the state";
    }
    if (d.div_residual > kDivergenceTol * d.max_gradient) {
        return "horizontal divergence " + num(d.div_residual) + " exceeds " + num(kDivergenceTol) +
               " * max|grad U| = " + num(kDivergenceTol * d.max_gradient);
    }
    return {};
}

}  // namespace

RunSummary run(Solver& solver, LayeredState& state, const RunOptions& options, const RunObserver& observer)
{
    if (options.t_final < state.t) {
        throw std::invalid_argument("run: t_final lies before the initial time");
    }
    if (options.diagnostics_every < 1 || options.snapshot_every < 0) {
        throw std::invalid_argument("run: diagnostics_every must be >= 1 and snapshot_every >= 0");
    }
    const auto& sp = solver.spectral();
    const auto& r = solver.config().r;
    RunSummary summary;

    auto emit_diag = [&](const DiagnosticsRecord& d) {
        if (observer.on_diagnostics) {
            observer.on_diagnostics(d);
        }
    };
    auto emit_snap = [&](long step) {
        if (observer.on_snapshot) {
            observer.on_snapshot(state, solver, step);
        }
    };

    const auto d0 = diagnostics(sp, state, r);
    summary.omega0_max = d0.max_vorticity;
    summary.omega_max = d0.max_vorticity;
    emit_diag(d0);
    emit_snap(0);
    if (auto problem = structural_problem(solver.grid(), state, d0); !problem.empty()) {
        throw InvariantViolation("initial state: " + problem);
    }

    const double e0 = d0.energy;
    double e_prev = e0;
    bool mp_reported = false;
    bool energy_reported = false;
    const double t_eps = 1e-12 * std::max(1.0, std::abs(options.t_final));
    long step = 0;
    while (options.t_final - state.t > t_eps) {
        solver.step(state, options.t_final - state.t);
        if (std::abs(options.t_final - state.t) <= t_eps) {
            state.t = options.t_final;
        }
        ++step;
        summary.max_picard_iterations = std::max(summary.max_picard_iterations, solver.last_picard().iterations);
        const auto d = diagnostics(sp, state, r);
        const bool last = options.t_final - state.t <= t_eps;

        if (auto problem = structural_problem(solver.grid(), state, d); !problem.empty()) {
            emit_diag(d);
            emit_snap(step);
            throw InvariantViolation("t=" + num(state.t) + ": " + problem);
        }
        summary.omega_max = std::max(summary.omega_max, d.max_vorticity);
        if (d.max_vorticity > summary.omega0_max * (1.0 + kMaxPrincipleTol) && !mp_reported) {
            summary.violations.push_back("maximum principle: max|omega| = " + num(d.max_vorticity) + " > " +
                                         num(summary.omega0_max) + " at t=" + num(state.t));
            mp_reported = true;
        }
        summary.worst_energy_increase = std::max(summary.worst_energy_increase, d.energy - e_prev);
        if (d.energy - e_prev > kEnergyStepTol * e0 && !energy_reported) {
            summary.violations.push_back("energy increased by " + num(d.energy - e_prev) + " at t=" + num(state.t));
            energy_reported = true;
        }
        e_prev = d.energy;

        if (step % options.diagnostics_every == 0 || last) {
            emit_diag(d);
        }
        if ((options.snapshot_every > 0 && step % options.snapshot_every == 0) || last) {
            emit_snap(step);
        }
    }
    summary.steps = step;
    summary.t = state.t;
    summary.cutoff_activations = solver.cutoff_activations();
    return summary;
}

}  // namespace majda
