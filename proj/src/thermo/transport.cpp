#include "majda/thermo.hpp"

#include <cmath>

namespace majda::thermo {

TransportCoefficients TransportCoefficients::linear(double mu0, double lambda0, double kappa0,
                                                    double beta)
{
    if (!(mu0 > 0.0) || !(lambda0 >= 0.0) || !(kappa0 > 0.0)) {
        throw std::invalid_argument("transport coefficients: mu0, kappa0 > 0 and lambda0 >= 0 required");
    }
    TransportCoefficients tc;
    tc.mu = [mu0](double theta) { return mu0 * (1.0 + theta); };
    tc.lambda_bulk = [lambda0](double theta) { return lambda0 * (1.0 + theta); };
    tc.kappa = [kappa0, beta](double theta) { return kappa0 * (1.0 + std::pow(theta, beta)); };
    tc.mu_low = mu0;
    tc.lambda_up = lambda0;
    tc.kappa_low = kappa0;
    tc.kappa_up = kappa0;
    tc.beta = beta;
    return tc;
}

TransportReport validate_transport(const TransportCoefficients& tc, double theta_max, int n_samples)
{
    TransportReport r{true, true, true, tc.beta > 6.0};
    constexpr double slack = 1e-12;
    for (int i = 1; i <= n_samples; ++i) {
        const double theta = theta_max * i / n_samples;
        const double mu = tc.mu(theta);
        const double lam = tc.lambda_bulk(theta);
        const double kap = tc.kappa(theta);
        const double kscale = 1.0 + std::pow(theta, tc.beta);
        r.mu_lower = r.mu_lower && tc.mu_low > 0.0 && mu >= tc.mu_low * (1.0 + theta) * (1.0 - slack);
        r.lambda_bounds = r.lambda_bounds && lam >= 0.0 &&
                          lam <= tc.lambda_up * (1.0 + theta) * (1.0 + slack);
        r.kappa_bounds = r.kappa_bounds && tc.kappa_low > 0.0 &&
                         kap >= tc.kappa_low * kscale * (1.0 - slack) &&
                         kap <= tc.kappa_up * kscale * (1.0 + slack);
    }
    return r;
}

Matrix3 stress_tensor(const TransportCoefficients& tc, double theta, const Matrix3& grad_u)
{
    if (!(theta > 0.0)) {
        throw DomainError("stress_tensor: temperature must be positive");
    }
    const double mu = tc.mu(theta);
    const double lam = tc.lambda_bulk(theta);
    const double div = grad_u[0][0] + grad_u[1][1] + grad_u[2][2];
    Matrix3 s{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            s[i][j] = mu * (grad_u[i][j] + grad_u[j][i]);
        }
        s[i][i] += (lam - 2.0 / 3.0 * mu) * div;
    }
    return s;
}

Vector3 heat_flux(const TransportCoefficients& tc, double theta, const Vector3& grad_theta)
{
    if (!(theta > 0.0)) {
        throw DomainError("heat_flux: temperature must be positive");
    }
    const double k = tc.kappa(theta);
    return {-k * grad_theta[0], -k * grad_theta[1], -k * grad_theta[2]};
}

}  // namespace majda::thermo
