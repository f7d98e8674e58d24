/// @file diagnostics.hpp
/// @brief Per-step scalar diagnostics and their CSV sink.
#pragma once

#include "majda/spectral.hpp"

#include <filesystem>
#include <fstream>
#include <vector>

namespace majda {

struct DiagnosticsRecord {
    double t = 0.0;
    double energy = 0.0;         ///< sum (r/2)|U|^2 dV, trapezoid in x3
    double enstrophy = 0.0;      ///< sum omega^2 dV
    double max_vorticity = 0.0;  ///< max |omega|
    double div_residual = 0.0;   ///< max |div_h U|
    double max_velocity = 0.0;   ///< max |U|
    double max_gradient = 0.0;   ///< max Frobenius norm of grad_h U
};

/// Trapezoid weights in x3 times the horizontal cell area, one per layer.
std::vector<double> volume_weights(const LayeredGrid& grid);

/// sum (r/2)|u|^2 dV.
double kinetic_energy(const LayeredGrid& grid, const VectorField& u, const std::vector<double>& r);

/// Max over the grid of the Frobenius norm of grad_h u.
double max_gradient_norm(const Spectral& sp, const VectorField& u);

DiagnosticsRecord diagnostics(const Spectral& sp, const LayeredState& state, const std::vector<double>& r);

/// Append-only writer for `t,energy,enstrophy,max_vorticity,div_residual,max_velocity`.
class DiagnosticsCsv {
public:
    static constexpr const char* header = "t,energy,enstrophy,max_vorticity,div_residual,max_velocity";

    explicit DiagnosticsCsv(const std::filesystem::path& path);
    void append(const DiagnosticsRecord& rec);
    void flush() { out_.flush(); }

private:
    std::ofstream out_;
};

/// Parses a file written by DiagnosticsCsv; throws with the line number on
/// malformed input.  max_gradient is not stored and reads back as zero.
std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::filesystem::path& path);

}  // namespace majda
