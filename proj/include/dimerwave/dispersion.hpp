#pragma once

#include "dimerwave/lattice.hpp"

#include <complex>

namespace dimerwave {

struct DispersionData {
    double mu = 0.0;
    double c = 0.0;
    double omega_mu = 0.0;
    double upsilon_mu = 0.0;
    double tau_mu = 0.0;
    double lambda_plus_at_omega = 0.0;
    double omega_lo = 0.0; ///< sqrt(2 / (c^2 mu)), the frequency omega~_mu
    double omega_hi = 0.0; ///< sqrt((2 + 2 mu) / (c^2 mu))
};

/// 1 + mu +/- sqrt((1 + mu)^2 - 4 mu sin^2 omega); sign must be +1 or -1.
double lambda_pm(double mu, double omega, int sign);

/// Unique root of c^2 mu omega^2 = lambda^+(omega) in the bracket [omega_lo, omega_hi].
DispersionData solve_omega(double mu, double c);

double upsilon(double mu, double c, double omega_mu);

/**
 * (c^2 mu omega^2 - 2 - 2 mu cos^2 omega) / (2 mu^2). The difference is rewritten as the
 * crit-frequency residual plus a cancellation-free closed form, so no O(1) terms cancel.
 */
double tau(double mu, double c, double omega_mu);

/// det(-c^2 omega^2 diag(1, mu) + L~_mu(omega)).
std::complex<double> dispersion_determinant(double mu, double c, double omega);

}  // namespace dimerwave
