#pragma once

#include <cstddef>
#include <vector>

namespace majda::detail {

/// Thomas algorithm for a x_{i-1} + b x_i + c x_{i+1} = d with real
/// coefficients and a right-hand side of type T (real or complex).  `d` is
/// overwritten by the solution.  No pivoting: callers supply diagonally
/// dominant systems.
template <class T>
void solve_tridiagonal(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& c,
                       std::vector<T>& d, std::vector<double>& scratch)
{
    const std::size_t n = d.size();
    if (n == 0) {
        return;
    }
    scratch.resize(n);
    double beta = b[0];
    d[0] = d[0] / beta;
    for (std::size_t i = 1; i < n; ++i) {
        scratch[i] = c[i - 1] / beta;
        beta = b[i] - a[i] * scratch[i];
        d[i] = (d[i] - a[i] * d[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        d[i] -= scratch[i + 1] * d[i + 1];
    }
}

}  // namespace majda::detail
