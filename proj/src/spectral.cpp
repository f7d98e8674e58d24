#include "majda/spectral.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <fftw3.h>

namespace majda {

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

bool power_of_two(int n)
{
    return n > 0 && (n & (n - 1)) == 0;
}

using cplx = std::complex<double>;

fftw_complex* as_fftw(cplx* p)
{
    return reinterpret_cast<fftw_complex*>(p);
}

}  // namespace

void LayeredGrid::validate() const
{
    std::string err;
    if (n1 < 8 || n2 < 8) {
        err += "horizontal resolution must be at least 8 (n1=" + std::to_string(n1) + ", n2=" + std::to_string(n2) +
               "); ";
    }
    if (!power_of_two(n1) || !power_of_two(n2)) {
        err += "n1 and n2 must be powers of two; ";
    }
    if (n3 < 2) {
        err += "n3 must be at least 2 (got " + std::to_string(n3) + "); ";
    }
    if (!err.empty()) {
        err.resize(err.size() - 2);
        throw std::invalid_argument("invalid grid: " + err);
    }
}

LayeredState LayeredState::zeros(const LayeredGrid& grid)
{
    LayeredState s;
    s.omega.assign(grid.size(), 0.0);
    s.u_mean.assign(grid.n_layers(), {0.0, 0.0});
    return s;
}

struct Spectral::Plans {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
};

Spectral::Spectral(const LayeredGrid& grid)
    : grid_(grid), modes_(static_cast<std::size_t>(grid.n2) * static_cast<std::size_t>(grid.n1 / 2 + 1)),
      plans_(std::make_unique<Plans>())
{
    grid_.validate();
    std::lock_guard lock(planner_mutex());
    double* r = fftw_alloc_real(grid_.layer_size());
    fftw_complex* c = fftw_alloc_complex(modes_);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    plans_->r2c = fftw_plan_dft_r2c_2d(grid_.n2, grid_.n1, r, c, flags);
    plans_->c2r = fftw_plan_dft_c2r_2d(grid_.n2, grid_.n1, c, r, flags | FFTW_DESTROY_INPUT);
    fftw_free(r);
    fftw_free(c);
    if (plans_->r2c == nullptr || plans_->c2r == nullptr) {
        throw std::runtime_error("FFTW planning failed");
    }
}

Spectral::~Spectral()
{
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plans_->r2c);
    fftw_destroy_plan(plans_->c2r);
}

double Spectral::k1(int j1) const
{
    return std::numbers::pi * m1(j1);
}

double Spectral::k2(int j2) const
{
    return std::numbers::pi * m2(j2);
}

void Spectral::forward_layer(const double* in, cplx* out) const
{
    // r2c does not modify its input
    fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(in), as_fftw(out));
}

void Spectral::backward_layer(const cplx* in, double* out) const
{
    thread_local std::vector<cplx> scratch;
    scratch.assign(in, in + modes_);
    fftw_execute_dft_c2r(plans_->c2r, as_fftw(scratch.data()), out);
    const double norm = 1.0 / static_cast<double>(grid_.layer_size());
    for (std::size_t i = 0; i < grid_.layer_size(); ++i) {
        out[i] *= norm;
    }
}

SpectralField Spectral::forward(const Field& f) const
{
    SpectralField out(modes_ * grid_.n_layers());
    const auto layers = static_cast<std::ptrdiff_t>(grid_.n_layers());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < layers; ++k) {
        forward_layer(f.data() + static_cast<std::size_t>(k) * grid_.layer_size(),
                      out.data() + static_cast<std::size_t>(k) * modes_);
    }
    return out;
}

Field Spectral::backward(const SpectralField& f) const
{
    Field out(grid_.size());
    const auto layers = static_cast<std::ptrdiff_t>(grid_.n_layers());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < layers; ++k) {
        backward_layer(f.data() + static_cast<std::size_t>(k) * modes_,
                       out.data() + static_cast<std::size_t>(k) * grid_.layer_size());
    }
    return out;
}

namespace {

// Applies op(j1, j2, a_hat, b_hat) -> result hat on every mode of every layer.
template <class Op>
SpectralField map_modes(const Spectral& sp, const SpectralField& a, const SpectralField* b, Op op)
{
    const auto& g = sp.grid();
    SpectralField out(a.size());
    const int half = sp.half();
    for (std::size_t k = 0; k < g.n_layers(); ++k) {
        const std::size_t base = k * sp.modes();
        for (int j2 = 0; j2 < g.n2; ++j2) {
            for (int j1 = 0; j1 < half; ++j1) {
                const std::size_t m = base + sp.mode_index(j1, j2);
                out[m] = op(j1, j2, a[m], b ? (*b)[m] : cplx{});
            }
        }
    }
    return out;
}

constexpr cplx I{0.0, 1.0};

}  // namespace

Field curl_h(const Spectral& sp, const VectorField& u)
{
    const auto a = sp.forward(u.u1);
    const auto b = sp.forward(u.u2);
    return sp.backward(map_modes(sp, a, &b, [&](int j1, int j2, cplx u1, cplx u2) {
        if (sp.is_nyquist(j1, j2)) {
            return cplx{};
        }
        return I * sp.k1(j1) * u2 - I * sp.k2(j2) * u1;
    }));
}

VectorField biot_savart_layer(const Spectral& sp, const Field& omega)
{
    const auto w = sp.forward(omega);
    auto psi = map_modes(sp, w, nullptr, [&](int j1, int j2, cplx wh, cplx) {
        if ((j1 == 0 && j2 == 0) || sp.is_nyquist(j1, j2)) {
            return cplx{};
        }
        const double kk = sp.k1(j1) * sp.k1(j1) + sp.k2(j2) * sp.k2(j2);
        return -wh / kk;
    });
    VectorField u;
    u.u1 = sp.backward(map_modes(sp, psi, nullptr, [&](int, int j2, cplx p, cplx) { return -I * sp.k2(j2) * p; }));
    u.u2 = sp.backward(map_modes(sp, psi, nullptr, [&](int j1, int, cplx p, cplx) { return I * sp.k1(j1) * p; }));
    return u;
}

Field divergence_h(const Spectral& sp, const VectorField& u)
{
    const auto a = sp.forward(u.u1);
    const auto b = sp.forward(u.u2);
    return sp.backward(map_modes(sp, a, &b, [&](int j1, int j2, cplx u1, cplx u2) {
        if (sp.is_nyquist(j1, j2)) {
            return cplx{};
        }
        return I * sp.k1(j1) * u1 + I * sp.k2(j2) * u2;
    }));
}

VectorField gradient_h(const Spectral& sp, const Field& f)
{
    const auto a = sp.forward(f);
    VectorField g;
    g.u1 = sp.backward(map_modes(sp, a, nullptr, [&](int j1, int j2, cplx v, cplx) {
        return sp.is_nyquist(j1, j2) ? cplx{} : I * sp.k1(j1) * v;
    }));
    g.u2 = sp.backward(map_modes(sp, a, nullptr, [&](int j1, int j2, cplx v, cplx) {
        return sp.is_nyquist(j1, j2) ? cplx{} : I * sp.k2(j2) * v;
    }));
    return g;
}

VectorField total_velocity(const Spectral& sp, const LayeredState& state)
{
    auto u = biot_savart_layer(sp, state.omega);
    const auto& g = sp.grid();
    for (std::size_t k = 0; k < g.n_layers(); ++k) {
        const std::size_t base = k * g.layer_size();
        for (std::size_t i = 0; i < g.layer_size(); ++i) {
            u.u1[base + i] += state.u_mean[k][0];
            u.u2[base + i] += state.u_mean[k][1];
        }
    }
    return u;
}

}  // namespace majda
