#include "majda/stability_gap.hpp"

#include "majda/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace majda {

double gap_distance(const Spectral& sp, const LayeredState& a, const LayeredState& b, const std::vector<double>& r)
{
    auto ua = total_velocity(sp, a);
    const auto ub = total_velocity(sp, b);
    for (std::size_t i = 0; i < ua.u1.size(); ++i) {
        ua.u1[i] -= ub.u1[i];
        ua.u2[i] -= ub.u2[i];
    }
    return kinetic_energy(sp.grid(), ua, r);
}

StabilityGapReport stability_gap(const LayeredGrid& grid, const SolverConfig& config, LayeredState u1,
                                 LayeredState u2, double t_final)
{
    if (u1.t != u2.t) {
        throw std::invalid_argument("stability gap: both trajectories must start at the same time");
    }
    if (!(t_final >= u1.t)) {
        throw std::invalid_argument("stability gap: t_final lies before the initial time");
    }
    Solver s1(grid, config);
    Solver s2(grid, config);
    const auto& sp = s1.spectral();
    const auto& r = s1.config().r;

    std::vector<double> t{u1.t};
    std::vector<double> D{gap_distance(sp, u1, u2, r)};
    double grad = max_gradient_norm(sp, total_velocity(sp, u1));
    double sup_grad = grad;
    double integral = 0.0;
    std::vector<double> integrals{0.0};

    const double t_eps = 1e-12 * std::max(1.0, std::abs(t_final));
    while (t_final - u1.t > t_eps) {
        const double adm = std::min(s1.admissible_dt(s1.advecting_velocity(u1)),
                                    s2.admissible_dt(s2.advecting_velocity(u2)));
        const double dt = std::min({config.dt_max, adm, t_final - u1.t});
        s1.step(u1, dt);
        s2.step(u2, dt);
        if (std::abs(t_final - u1.t) <= t_eps) {
            u1.t = u2.t = t_final;
        }
        const double g = max_gradient_norm(sp, total_velocity(sp, u1));
        integral += 0.5 * dt * (grad + g);
        grad = g;
        sup_grad = std::max(sup_grad, g);
        t.push_back(u1.t);
        D.push_back(gap_distance(sp, u1, u2, r));
        integrals.push_back(integral);
    }

    StabilityGapReport rep;
    rep.C = 2.0 * sup_grad;
    const double D0 = D.front();
    bool have_rate = false;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double elapsed = t[i] - t.front();
        GapPoint p{t[i], D[i], D0 * std::exp(rep.C * elapsed), D0 * std::exp(2.0 * integrals[i])};
        // rounding slack only
        const double slack = 1e-10;
        if (p.D > p.bound * (1.0 + slack) || p.D > p.gronwall * (1.0 + slack)) {
            rep.within_bound = false;
        }
        if (i > 0 && p.D > D[i - 1]) {
            rep.monotone = false;
        }
        if (elapsed > 0.0 && D0 > 0.0 && p.D > 0.0) {
            const double rate = std::log(p.D / D0) / elapsed;
            rep.observed_rate = have_rate ? std::max(rep.observed_rate, rate) : rate;
            have_rate = true;
        }
        rep.series.push_back(p);
    }
    return rep;
}

void write_gap_csv(std::ostream& out, const StabilityGapReport& report)
{
    const auto old = out.precision(17);
    out << "t,D,bound\n";
    for (const auto& p : report.series) {
        out << p.t << ',' << p.D << ',' << p.bound << '\n';
    }
    out.precision(old);
}

}  // namespace majda
