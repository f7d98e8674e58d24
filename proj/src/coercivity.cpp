#include "majda/coercivity.hpp"

#include "majda/initial.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace majda {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

double log_uniform(const CounterRng& rng, std::uint64_t counter, double lo, double hi)
{
    return std::exp(rng.uniform(counter, std::log(lo), std::log(hi)));
}

Vec3 in_ball(const CounterRng& rng, std::uint64_t counter, double radius)
{
    const double cos_polar = rng.uniform(counter, -1.0, 1.0);
    const double azimuth = rng.uniform(counter + 1, 0.0, 2.0 * std::numbers::pi);
    const double r = radius * std::cbrt(rng.uniform(counter + 2));
    const double sin_polar = std::sqrt(std::max(0.0, 1.0 - cos_polar * cos_polar));
    return {r * sin_polar * std::cos(azimuth), r * sin_polar * std::sin(azimuth), r * cos_polar};
}

void accumulate(CoercivityClass& c, double ratio)
{
    if (std::isnan(ratio)) {
        ++c.degenerate;
        return;
    }
    c.constant = c.used == 0 ? ratio : std::min(c.constant, ratio);
    ++c.used;
}

}  // namespace

bool CoercivityReport::passed() const
{
    auto ok = [](const CoercivityClass& c) { return c.used == 0 || c.constant > 0.0; };
    return (essential.used + residual.used) > 0 && ok(essential) && ok(residual);
}

std::string CoercivityReport::summary() const
{
    std::ostringstream os;
    os.precision(6);
    os << "reference     rho=" << reference.rho << " theta=" << reference.theta << '\n'
       << "K             [" << K.rho_min << ", " << K.rho_max << "] x [" << K.theta_min << ", " << K.theta_max
       << "]\n"
       << "epsilon       " << epsilon << '\n'
       << "seed          " << seed << '\n';
    auto line = [&](const char* name, const CoercivityClass& c) {
        os << name << "C=";
        if (c.used == 0) {
            os << "n/a";
        } else {
            os << c.constant;
        }
        os << " from " << c.used << " samples";
        if (c.degenerate > 0) {
            os << " (" << c.degenerate << " degenerate excluded)";
        }
        os << '\n';
    };
    line("essential     ", essential);
    line("residual      ", residual);
    os << "result        " << (passed() ? "PASS" : "FAIL") << '\n';
    return os.str();
}

CoercivityReport coercivity_from_samples(const thermo::EquationOfState& eos, const EssentialSet& K,
                                         thermo::ThermoState ref, const std::vector<PointState>& states,
                                         double epsilon)
{
    K.validate();
    if (!K.contains(ref.rho, ref.theta)) {
        throw std::invalid_argument("coercivity reference must lie inside the essential set");
    }
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("epsilon must be positive");
    }
    CoercivityReport report;
    report.epsilon = epsilon;
    report.K = K;
    report.reference = {ref.rho, ref.theta, {}};
    report.essential.constant = nan;
    report.residual.constant = nan;
    const double inv_eps2 = 1.0 / (epsilon * epsilon);
    for (std::size_t id = 0; id < states.size(); ++id) {
        const auto& s = states[id];
        const double u2 = s.u[0] * s.u[0] + s.u[1] * s.u[1] + s.u[2] * s.u[2];
        const double E = rel_energy_point(eos, s, report.reference, epsilon);
        CoercivitySample sample{id, s, K.contains(s.rho, s.theta), nan};
        double norm = 0.0;
        if (sample.essential) {
            const double dr = s.rho - ref.rho;
            const double dt = s.theta - ref.theta;
            norm = inv_eps2 * (dr * dr + dt * dt) + u2;
        } else {
            const thermo::ThermoState st{s.rho, s.theta};
            norm = inv_eps2 * (1.0 + s.rho * thermo::internal_energy(eos, st) +
                               s.rho * std::abs(thermo::entropy(eos, st))) +
                   s.rho * u2;
        }
        if (norm > 0.0) {
            sample.ratio = E / norm;
        }
        accumulate(sample.essential ? report.essential : report.residual, sample.ratio);
        report.samples.push_back(sample);
    }
    return report;
}

CoercivityReport coercivity_check(const thermo::EquationOfState& eos, const EssentialSet& K, thermo::ThermoState ref,
                                  std::size_t n_samples, std::uint64_t seed, double epsilon, double u_radius)
{
    K.validate();
    if (!(u_radius >= 0.0)) {
        throw std::invalid_argument("velocity radius must be non-negative");
    }
    const CounterRng rng(seed);
    std::vector<PointState> states;
    states.reserve(2 * n_samples);
    std::uint64_t counter = 0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        PointState s;
        s.rho = log_uniform(rng, counter++, K.rho_min, K.rho_max);
        s.theta = log_uniform(rng, counter++, K.theta_min, K.theta_max);
        s.u = in_ball(rng, counter, u_radius);
        counter += 3;
        states.push_back(s);
    }
    const EssentialSet shell{K.rho_min / 10.0, K.rho_max * 10.0, K.theta_min / 10.0, K.theta_max * 10.0};
    for (std::size_t i = 0; i < n_samples; ++i) {
        PointState s;
        do {
            s.rho = log_uniform(rng, counter++, shell.rho_min, shell.rho_max);
            s.theta = log_uniform(rng, counter++, shell.theta_min, shell.theta_max);
        } while (K.contains(s.rho, s.theta));
        s.u = in_ball(rng, counter, u_radius);
        counter += 3;
        states.push_back(s);
    }
    auto report = coercivity_from_samples(eos, K, ref, states, epsilon);
    report.seed = seed;
    return report;
}

void write_coercivity_csv(std::ostream& out, const CoercivityReport& report)
{
    const auto old = out.precision(17);
    out << "sample_id,rho,theta,ratio\n";
    for (const auto& s : report.samples) {
        out << s.id << ',' << s.state.rho << ',' << s.state.theta << ',';
        if (std::isnan(s.ratio)) {
            out << "nan";
        } else {
            out << s.ratio;
        }
        out << '\n';
    }
    out.precision(old);
}

}  // namespace majda
