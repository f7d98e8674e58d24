#include "majda/cutoff.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

namespace majda {

namespace {

double smooth_zero(double t)
{
    return t > 0.0 ? std::exp(-1.0 / t) : 0.0;
}

// 0 for s <= 0, 1 for s >= 1, smooth in between.
double smooth_step(double s)
{
    const double a = smooth_zero(s);
    return a / (a + smooth_zero(1.0 - s));
}

double bump(double t)
{
    return 1.0 - smooth_step(std::abs(t) - 1.0);
}

double phi(double x)
{
    const double ax = std::abs(x);
    double v = 0.0;
    if (ax <= 1.0) {
        v = ax;
    } else {
        const double upper = std::min(ax, 2.0);
        v = 1.0 + boost::math::quadrature::gauss<double, 30>::integrate(bump, 1.0, upper);
    }
    return std::copysign(v, x);
}

}  // namespace

double cutoff(double z, double L)
{
    if (!(L > 0.0)) {
        throw std::invalid_argument("cutoff level must be positive");
    }
    if (std::abs(z) <= L) {
        return z;
    }
    return L * phi(z / L);
}

std::size_t apply_cutoff(VectorField& u, double L)
{
    std::size_t changed = 0;
    for (auto* comp : {&u.u1, &u.u2}) {
        for (double& v : *comp) {
            if (std::abs(v) > L) {
                v = cutoff(v, L);
                ++changed;
            }
        }
    }
    return changed;
}

}  // namespace majda
