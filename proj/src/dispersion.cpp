#include "dimerwave/dispersion.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <string>

namespace dimerwave {
namespace {

// c^2 mu w^2 - lambda^+(w) with the square computed by fma to keep the last bits.
double crit_residual(double mu, double c, double w) {
    const double a = c * c * mu;
    const double hi = a * w * w;
    const double lo = std::fma(a * w, w, -hi) + std::fma(a, w, -a * w) * w;
    return (hi - lambda_pm(mu, w, 1)) + lo;
}

}  // namespace

double lambda_pm(double mu, double omega, int sign) {
    if (sign != 1 && sign != -1) throw InvalidInput("branch sign must be +1 or -1");
    const double s = std::sin(omega);
    const double disc = (1.0 + mu) * (1.0 + mu) - 4.0 * mu * s * s;
    return 1.0 + mu + sign * std::sqrt(std::max(disc, 0.0));
}

double upsilon(double mu, double c, double omega_mu) {
    (void)c;
    const double s = std::sin(omega_mu), co = std::cos(omega_mu);
    const double num = -2.0 * mu * co * s * (1.0 - 2.0 * co * co - mu * co * co * s * s);
    const double den = lambda_pm(mu, omega_mu, 1) - 2.0 * mu * s * s * (1.0 - mu * co * co);
    return num / den;
}

double tau(double mu, double c, double omega_mu) {
    if (!(mu > 0.0)) throw InvalidInput("tau requires mu > 0");
    const double s = std::sin(omega_mu), co = std::cos(omega_mu);
    const double R = 1.0 + mu;
    const double D = std::sqrt(R * R - 4.0 * mu * s * s);
    // lambda^+ - 2 - 2 mu cos^2 = 8 mu^2 s^2 co^2 / ((D + R)(D + 1 - mu)) exactly.
    const double closed = 4.0 * s * s * co * co / ((D + R) * (D + 1.0 - mu));
    return closed + crit_residual(mu, c, omega_mu) / (2.0 * mu * mu);
}

std::complex<double> dispersion_determinant(double mu, double c, double omega) {
    Mat2 m = L_symbol(mu, omega);
    m[0][0] -= c * c * omega * omega;
    m[1][1] -= c * c * omega * omega * mu;
    return m[0][0] * m[1][1] - m[0][1] * m[1][0];
}

DispersionData solve_omega(double mu, double c) {
    ModelParams{c, mu}.validate(true);
    DispersionData d;
    d.mu = mu;
    d.c = c;
    d.omega_lo = std::sqrt(2.0 / (c * c * mu));
    d.omega_hi = std::sqrt((2.0 + 2.0 * mu) / (c * c * mu));
    auto f = [&](double w) { return crit_residual(mu, c, w); };
    const double flo = f(d.omega_lo), fhi = f(d.omega_hi);
    if (flo == 0.0) {
        d.omega_mu = d.omega_lo;
    } else if (fhi == 0.0) {
        d.omega_mu = d.omega_hi;
    } else {
        if (flo * fhi > 0.0)
            throw SolverError("no sign change of the critical-frequency equation in its bracket; mu = " +
                              std::to_string(mu) + " is too large");
        boost::math::tools::eps_tolerance<double> tol(53);
        std::uintmax_t iters = 500;
        auto r = boost::math::tools::toms748_solve(f, d.omega_lo, d.omega_hi, flo, fhi, tol, iters);
        d.omega_mu = std::abs(f(r.first)) <= std::abs(f(r.second)) ? r.first : r.second;
    }
    d.lambda_plus_at_omega = lambda_pm(mu, d.omega_mu, 1);
    d.upsilon_mu = upsilon(mu, c, d.omega_mu);
    d.tau_mu = tau(mu, c, d.omega_mu);
    return d;
}

}  // namespace dimerwave
