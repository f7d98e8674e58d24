/// @file spectral.hpp
/// @brief Horizontal Fourier transforms and the layer-wise operators built
/// on them.
///
/// Wavenumbers on the period-2 torus are k = pi m.  Odd derivatives drop the
/// Nyquist mode so that differentiation maps real fields to real fields.
#pragma once

#include "majda/grid.hpp"

#include <complex>
#include <cstdlib>
#include <memory>
#include <vector>

namespace majda {

using SpectralField = std::vector<std::complex<double>>;

/// Owns one r2c and one c2r plan for a single layer and applies them to all
/// layers.  Plans are created with FFTW_ESTIMATE so results do not depend on
/// timing.  Execution is thread-safe; construction is serialised internally.
class Spectral {
public:
    explicit Spectral(const LayeredGrid& grid);
    ~Spectral();
    Spectral(const Spectral&) = delete;
    Spectral& operator=(const Spectral&) = delete;

    const LayeredGrid& grid() const noexcept { return grid_; }

    /// Number of complex modes per layer, n2 (n1/2 + 1).
    std::size_t modes() const noexcept { return modes_; }
    int half() const noexcept { return grid_.n1 / 2 + 1; }
    std::size_t mode_index(int j1, int j2) const
    {
        return static_cast<std::size_t>(j1) + static_cast<std::size_t>(half()) * static_cast<std::size_t>(j2);
    }
    /// Signed integer wavenumbers of the stored mode.
    int m1(int j1) const { return j1; }
    int m2(int j2) const { return j2 <= grid_.n2 / 2 ? j2 : j2 - grid_.n2; }
    double k1(int j1) const;
    double k2(int j2) const;
    bool is_nyquist(int j1, int j2) const { return j1 == grid_.n1 / 2 || j2 == grid_.n2 / 2; }
    /// 2/3 rule: keep modes with 3|m| < n in both directions.
    bool in_dealias_band(int j1, int j2) const
    {
        return 3 * std::abs(m1(j1)) < grid_.n1 && 3 * std::abs(m2(j2)) < grid_.n2;
    }

    void forward_layer(const double* in, std::complex<double>* out) const;
    /// Normalised inverse; `in` is left untouched.
    void backward_layer(const std::complex<double>* in, double* out) const;

    /// All n3 + 1 layers; layers are processed in parallel when OpenMP is on.
    SpectralField forward(const Field& f) const;
    Field backward(const SpectralField& f) const;

private:
    LayeredGrid grid_;
    std::size_t modes_;
    struct Plans;
    std::unique_ptr<Plans> plans_;
};

/// d/dx1 u2 - d/dx2 u1 in every layer.
Field curl_h(const Spectral& sp, const VectorField& u);

/// Divergence-free, zero-mean velocity with curl_h equal to the zero-mean
/// part of omega, layer by layer.
VectorField biot_savart_layer(const Spectral& sp, const Field& omega);

/// d/dx1 u1 + d/dx2 u2 in every layer.
Field divergence_h(const Spectral& sp, const VectorField& u);

/// Horizontal gradient of a scalar field.
VectorField gradient_h(const Spectral& sp, const Field& f);

/// Biot-Savart fluctuation plus the mean flow broadcast over each layer.
VectorField total_velocity(const Spectral& sp, const LayeredState& state);

}  // namespace majda
