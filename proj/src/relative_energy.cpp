#include "majda/relative_energy.hpp"

#include "majda/diagnostics.hpp"

#include <cmath>
#include <string>

namespace majda {

using thermo::EquationOfState;

namespace {

void check_same_grid(const LayeredGrid& a, const LayeredGrid& b)
{
    if (!(a == b)) {
        throw std::invalid_argument("state and reference live on different grids");
    }
}

void check_eos(const EquationOfState& eos, const ReferenceTriple& ref)
{
    if (ref.eos_id && *ref.eos_id != eos.id()) {
        throw MixedEosError("reference triple is bound to a different equation-of-state instance");
    }
}

void check_size(const Field& f, std::size_t n, const char* name)
{
    if (f.size() != n) {
        throw std::invalid_argument(std::string(name) + " has " + std::to_string(f.size()) + " values, expected " +
                                    std::to_string(n));
    }
}

double dot(const Vec3& a, const Vec3& b)
{
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

}  // namespace

CompressibleState CompressibleState::uniform(const LayeredGrid& grid, double rho, double theta, double epsilon)
{
    const std::size_t n = grid.size();
    return {grid, Field(n, rho), Field(n, theta), {Field(n, 0.0), Field(n, 0.0), Field(n, 0.0)}, epsilon};
}

void CompressibleState::validate() const
{
    const std::size_t n = grid.size();
    check_size(rho, n, "rho");
    check_size(theta, n, "theta");
    for (const auto& c : u) {
        check_size(c, n, "u");
    }
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("epsilon must be positive");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(rho[i] > 0.0) || !(theta[i] > 0.0)) {
            throw std::invalid_argument("density and temperature must be positive (node " + std::to_string(i) + ")");
        }
    }
}

ReferenceTriple ReferenceTriple::uniform(const LayeredGrid& grid, double r, double theta)
{
    const std::size_t n = grid.size();
    return {grid, Field(n, r), Field(n, theta), {Field(n, 0.0), Field(n, 0.0), Field(n, 0.0)}, std::nullopt};
}

ReferenceTriple ReferenceTriple::from_profile(const LayeredGrid& grid, const StaticProfile& profile,
                                              const VectorField* u)
{
    if (profile.n_nodes() != grid.n_layers()) {
        throw std::invalid_argument("profile has " + std::to_string(profile.n_nodes()) + " nodes but the grid has " +
                                    std::to_string(grid.n_layers()) + " layers");
    }
    auto ref = uniform(grid, 1.0, 1.0);
    const std::size_t L = grid.layer_size();
    for (std::size_t k = 0; k < grid.n_layers(); ++k) {
        for (std::size_t i = k * L; i < (k + 1) * L; ++i) {
            ref.r_tilde[i] = profile.r[k];
            ref.theta_tilde[i] = profile.theta[k];
        }
    }
    if (u != nullptr) {
        check_size(u->u1, grid.size(), "u1");
        check_size(u->u2, grid.size(), "u2");
        ref.u_tilde[0] = u->u1;
        ref.u_tilde[1] = u->u2;
    }
    return ref;
}

void ReferenceTriple::validate() const
{
    const std::size_t n = grid.size();
    check_size(r_tilde, n, "r_tilde");
    check_size(theta_tilde, n, "theta_tilde");
    for (const auto& c : u_tilde) {
        check_size(c, n, "u_tilde");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(r_tilde[i] > 0.0) || !(theta_tilde[i] > 0.0)) {
            throw std::invalid_argument("reference density and temperature must be positive");
        }
    }
    const std::size_t L = grid.layer_size();
    for (std::size_t i = 0; i < L; ++i) {
        for (const auto& c : u_tilde) {
            if (c[i] != 0.0 || c[n - L + i] != 0.0) {
                throw std::invalid_argument("reference velocity must vanish on the walls");
            }
        }
    }
}

EssentialSet EssentialSet::around(double rho, double theta, double factor)
{
    if (!(factor > 1.0)) {
        throw std::invalid_argument("essential set factor must exceed 1");
    }
    EssentialSet k{rho / factor, rho * factor, theta / factor, theta * factor};
    k.validate();
    return k;
}

double EssentialSet::log_margin(double rho, double theta) const
{
    return std::min({std::log(rho / rho_min), std::log(rho_max / rho), std::log(theta / theta_min),
                     std::log(theta_max / theta)});
}

void EssentialSet::validate() const
{
    if (!(rho_min > 0.0 && rho_min < rho_max && theta_min > 0.0 && theta_min < theta_max) ||
        !std::isfinite(rho_max) || !std::isfinite(theta_max)) {
        throw std::invalid_argument("essential set needs 0 < rho_min < rho_max and 0 < theta_min < theta_max");
    }
}

double rel_energy_point(const EquationOfState& eos, const PointState& s, const PointState& ref, double epsilon)
{
    const Vec3 du{s.u[0] - ref.u[0], s.u[1] - ref.u[1], s.u[2] - ref.u[2]};
    const double kinetic = 0.5 * s.rho * dot(du, du);

    const thermo::ThermoState st{s.rho, s.theta};
    const thermo::ThermoState rt{ref.rho, ref.theta};
    // The bracket regrouped as rho [(e - e~) - th~ (s - s~)] - p~ (rho - r~) / r~,
    // which vanishes term by term at the reference.
    const double de = thermo::internal_energy(eos, st) - thermo::internal_energy(eos, rt);
    const double ds = thermo::entropy(eos, st) - thermo::entropy(eos, rt);
    const double dr = (s.rho - ref.rho) / ref.rho;
    const double bracket = s.rho * (de - ref.theta * ds) - thermo::pressure(eos, rt) * dr;
    return kinetic + bracket / (epsilon * epsilon);
}

Field rel_energy_density(const EquationOfState& eos, const CompressibleState& s, const ReferenceTriple& ref)
{
    check_same_grid(s.grid, ref.grid);
    check_eos(eos, ref);
    s.validate();
    ref.validate();
    const auto n = static_cast<std::ptrdiff_t>(s.grid.size());
    Field out(s.grid.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto j = static_cast<std::size_t>(i);
        out[j] = rel_energy_point(eos, s.at(j), ref.at(j), s.epsilon);
    }
    return out;
}

double integrate(const LayeredGrid& grid, const Field& f)
{
    check_size(f, grid.size(), "integrand");
    const auto w = volume_weights(grid);
    const std::size_t L = grid.layer_size();
    double total = 0.0;
    for (std::size_t k = 0; k < grid.n_layers(); ++k) {
        double layer = 0.0;
        for (std::size_t i = k * L; i < (k + 1) * L; ++i) {
            layer += f[i];
        }
        total += w[k] * layer;
    }
    return total;
}

double rel_energy_total(const EquationOfState& eos, const CompressibleState& s, const ReferenceTriple& ref)
{
    return integrate(s.grid, rel_energy_density(eos, s, ref));
}

std::optional<double> invert_temperature(const EquationOfState& eos, double rho, double s_target, double theta_lo,
                                         double theta_hi)
{
    if (!(rho > 0.0) || !(theta_lo > 0.0) || !(theta_hi > theta_lo) || !std::isfinite(s_target)) {
        return std::nullopt;
    }
    auto f = [&](double th) { return thermo::entropy(eos, {rho, th}) - s_target; };
    double lo = theta_lo;
    double hi = theta_hi;
    const double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo == 0.0) {
        return lo;
    }
    if (f_hi == 0.0) {
        return hi;
    }
    if (f_lo > 0.0 || f_hi < 0.0) {
        return std::nullopt;
    }
    double th = std::sqrt(lo * hi);
    for (int it = 0; it < 200; ++it) {
        const double fv = f(th);
        if (fv == 0.0) {
            return th;
        }
        (fv < 0.0 ? lo : hi) = th;
        // ds/dtheta = (de/dtheta) / theta at fixed density
        const double slope = thermo::thermo_partials_unchecked(eos, {rho, th}).de_dtheta / th;
        double next = th - fv / slope;
        if (!std::isfinite(next) || next <= lo || next >= hi) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - th) <= 1e-12 * th) {
            return next;
        }
        th = next;
    }
    return std::nullopt;
}

std::optional<double> rel_energy_conservative_point(const EquationOfState& eos, double rho, double S, const Vec3& m,
                                                    const PointState& ref, double epsilon, const EssentialSet& K)
{
    const auto theta = invert_temperature(eos, rho, S / rho, 0.5 * K.theta_min, 2.0 * K.theta_max);
    if (!theta) {
        return std::nullopt;
    }
    const double inv_eps2 = 1.0 / (epsilon * epsilon);
    const thermo::ThermoState rt{ref.rho, ref.theta};
    const double e_ref = thermo::internal_energy(eos, rt);
    const double s_ref = thermo::entropy(eos, rt);
    const double p_ref = thermo::pressure(eos, rt);
    const Vec3 m_ref{ref.rho * ref.u[0], ref.rho * ref.u[1], ref.rho * ref.u[2]};

    const double E = dot(m, m) / (2.0 * rho) + inv_eps2 * rho * thermo::internal_energy(eos, {rho, *theta});
    const double E_ref = dot(m_ref, m_ref) / (2.0 * ref.rho) + inv_eps2 * ref.rho * e_ref;
    const double dE_drho = -0.5 * dot(ref.u, ref.u) + inv_eps2 * (e_ref - ref.theta * s_ref + p_ref / ref.rho);
    const double dE_dS = inv_eps2 * ref.theta;
    const Vec3 dm{m[0] - m_ref[0], m[1] - m_ref[1], m[2] - m_ref[2]};
    return E - E_ref - dE_drho * (rho - ref.rho) - dE_dS * (S - ref.rho * s_ref) - dot(ref.u, dm);
}

ConservativeResult rel_energy_conservative(const EquationOfState& eos, const LayeredGrid& grid, const Field& rho,
                                           const Field& S_total, const Field3& m, double epsilon,
                                           const ReferenceTriple& ref, const EssentialSet& K)
{
    check_same_grid(grid, ref.grid);
    check_eos(eos, ref);
    ref.validate();
    K.validate();
    const std::size_t n = grid.size();
    check_size(rho, n, "rho");
    check_size(S_total, n, "S");
    for (const auto& c : m) {
        check_size(c, n, "m");
    }
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("epsilon must be positive");
    }
    Field density(n);
    std::vector<char> ok(n, 0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        const auto j = static_cast<std::size_t>(i);
        std::optional<double> v;
        if (rho[j] > 0.0) {
            v = rel_energy_conservative_point(eos, rho[j], S_total[j], {m[0][j], m[1][j], m[2][j]}, ref.at(j),
                                              epsilon, K);
        }
        density[j] = v.value_or(0.0);
        ok[j] = v.has_value() ? 1 : 0;
    }
    ConservativeResult result;
    for (std::size_t j = 0; j < n; ++j) {
        if (!ok[j]) {
            result.failed.push_back(j);
        }
    }
    result.total = integrate(grid, density);
    return result;
}

double ballistic_energy(const EquationOfState& eos, const CompressibleState& s, const Field& theta_tilde)
{
    s.validate();
    check_size(theta_tilde, s.grid.size(), "theta_tilde");
    const auto n = static_cast<std::ptrdiff_t>(s.grid.size());
    Field f(s.grid.size());
    const double eps2 = s.epsilon * s.epsilon;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto j = static_cast<std::size_t>(i);
        const thermo::ThermoState st{s.rho[j], s.theta[j]};
        const double u2 = s.u[0][j] * s.u[0][j] + s.u[1][j] * s.u[1][j] + s.u[2][j] * s.u[2][j];
        f[j] = 0.5 * eps2 * st.rho * u2 +
               st.rho * (thermo::internal_energy(eos, st) - theta_tilde[j] * thermo::entropy(eos, st));
    }
    return integrate(s.grid, f);
}

std::pair<Field, Field> ess_res_split(const Field& field, const CompressibleState& s, const EssentialSet& K)
{
    K.validate();
    const std::size_t n = s.grid.size();
    check_size(field, n, "field");
    check_size(s.rho, n, "rho");
    check_size(s.theta, n, "theta");
    Field ess(n, 0.0);
    Field res(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        (K.contains(s.rho[i], s.theta[i]) ? ess : res)[i] = field[i];
    }
    return {std::move(ess), std::move(res)};
}

}  // namespace majda
