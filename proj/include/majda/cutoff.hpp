/// @file cutoff.hpp
/// @brief Smooth odd truncation b_L used by the fixed-point construction.
#pragma once

#include "majda/grid.hpp"

namespace majda {

/// b_L(z) = L phi(z / L) with phi(x) = int_0^x chi, where chi is a smooth
/// even bump equal to 1 on [-1,1] and 0 outside [-2,2].  Hence b_L(z) = z
/// exactly for |z| <= L, b_L is odd and C-infinity, and |b_L| < 1.5 L.
double cutoff(double z, double L);

/// Componentwise b_L.  Returns the number of entries that were modified.
std::size_t apply_cutoff(VectorField& u, double L);

}  // namespace majda
