/// @file grid.hpp
/// @brief Layered grid on [-1,1)^2 x [0,1] and the solver state.
#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace majda {

/// n1 x n2 periodic nodes in the horizontal, n3 + 1 vertical nodes
/// including both walls.  Scalar fields are stored layer by layer with x1
/// fastest: index = i1 + n1 (i2 + n2 k).
struct LayeredGrid {
    int n1 = 32;
    int n2 = 32;
    int n3 = 32;

    double h1() const { return 2.0 / n1; }
    double h2() const { return 2.0 / n2; }
    double h3() const { return 1.0 / n3; }
    double x1(int i) const { return -1.0 + i * h1(); }
    double x2(int i) const { return -1.0 + i * h2(); }
    double x3(int k) const { return k * h3(); }

    std::size_t layer_size() const { return static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2); }
    std::size_t n_layers() const { return static_cast<std::size_t>(n3) + 1; }
    std::size_t size() const { return layer_size() * n_layers(); }
    std::size_t index(int i1, int i2, int k) const
    {
        return static_cast<std::size_t>(i1) +
               static_cast<std::size_t>(n1) * (static_cast<std::size_t>(i2) + static_cast<std::size_t>(n2) * k);
    }

    /// Throws std::invalid_argument unless n1, n2 are powers of two >= 8 and
    /// n3 >= 2.
    void validate() const;

    bool operator==(const LayeredGrid&) const = default;
};

using Field = std::vector<double>;

struct VectorField {
    Field u1;
    Field u2;
};

/// Prognostic state.  The fluctuating velocity is recovered from omega on
/// demand; the vertical velocity is identically zero.
struct LayeredState {
    double t = 0.0;
    Field omega;
    std::vector<std::array<double, 2>> u_mean;

    static LayeredState zeros(const LayeredGrid& grid);
};

}  // namespace majda
