#include "majda/diagnostics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace majda {

std::vector<double> volume_weights(const LayeredGrid& grid)
{
    std::vector<double> w(grid.n_layers(), grid.h1() * grid.h2() * grid.h3());
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

double kinetic_energy(const LayeredGrid& grid, const VectorField& u, const std::vector<double>& r)
{
    const auto w = volume_weights(grid);
    const std::size_t L = grid.layer_size();
    double total = 0.0;
    for (std::size_t k = 0; k < grid.n_layers(); ++k) {
        double layer = 0.0;
        for (std::size_t i = k * L; i < (k + 1) * L; ++i) {
            layer += u.u1[i] * u.u1[i] + u.u2[i] * u.u2[i];
        }
        total += 0.5 * r[k] * w[k] * layer;
    }
    return total;
}

double max_gradient_norm(const Spectral& sp, const VectorField& u)
{
    const auto g1 = gradient_h(sp, u.u1);
    const auto g2 = gradient_h(sp, u.u2);
    double m = 0.0;
    for (std::size_t i = 0; i < g1.u1.size(); ++i) {
        const double f = g1.u1[i] * g1.u1[i] + g1.u2[i] * g1.u2[i] + g2.u1[i] * g2.u1[i] + g2.u2[i] * g2.u2[i];
        m = std::max(m, f);
    }
    return std::sqrt(m);
}

DiagnosticsRecord diagnostics(const Spectral& sp, const LayeredState& state, const std::vector<double>& r)
{
    const auto& grid = sp.grid();
    DiagnosticsRecord d;
    d.t = state.t;
    const auto u = total_velocity(sp, state);
    d.energy = kinetic_energy(grid, u, r);

    const auto w = volume_weights(grid);
    const std::size_t L = grid.layer_size();
    for (std::size_t k = 0; k < grid.n_layers(); ++k) {
        double layer = 0.0;
        for (std::size_t i = k * L; i < (k + 1) * L; ++i) {
            layer += state.omega[i] * state.omega[i];
            d.max_vorticity = std::max(d.max_vorticity, std::abs(state.omega[i]));
        }
        d.enstrophy += w[k] * layer;
    }
    for (std::size_t i = 0; i < u.u1.size(); ++i) {
        d.max_velocity = std::max(d.max_velocity, std::hypot(u.u1[i], u.u2[i]));
    }
    for (double v : divergence_h(sp, u)) {
        d.div_residual = std::max(d.div_residual, std::abs(v));
    }
    d.max_gradient = max_gradient_norm(sp, u);
    return d;
}

DiagnosticsCsv::DiagnosticsCsv(const std::filesystem::path& path) : out_(path)
{
    if (!out_) {
        throw std::runtime_error("cannot open diagnostics file '" + path.string() + "'");
    }
    out_.precision(17);
    out_ << header << '\n';
}

void DiagnosticsCsv::append(const DiagnosticsRecord& rec)
{
    out_ << rec.t << ',' << rec.energy << ',' << rec.enstrophy << ',' << rec.max_vorticity << ','
         << rec.div_residual << ',' << rec.max_velocity << '\n';
}

std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open diagnostics file '" + path.string() + "'");
    }
    std::string line;
    if (!std::getline(in, line) || line != DiagnosticsCsv::header) {
        throw std::runtime_error(path.string() + ":1: missing or unexpected diagnostics header");
    }
    std::vector<DiagnosticsRecord> out;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        DiagnosticsRecord r;
        double* fields[] = {&r.t, &r.energy, &r.enstrophy, &r.max_vorticity, &r.div_residual, &r.max_velocity};
        for (std::size_t i = 0; i < 6; ++i) {
            std::string cell;
            const bool got = static_cast<bool>(std::getline(row, cell, ','));
            std::size_t used = 0;
            try {
                if (!got) {
                    throw std::invalid_argument("missing");
                }
                *fields[i] = std::stod(cell, &used);
            } catch (const std::exception&) {
                used = std::string::npos;
            }
            if (used != cell.size()) {
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": malformed column " +
                                         std::to_string(i + 1));
            }
        }
        out.push_back(r);
    }
    return out;
}

}  // namespace majda
