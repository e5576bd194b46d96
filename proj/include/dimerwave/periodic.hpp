#pragma once

#include "dimerwave/dispersion.hpp"

#include <array>
#include <string>
#include <vector>

namespace dimerwave {

using RealMat2 = std::array<std::array<double, 2>, 2>;

/**
 * Mode-k block of Gamma = c^2 omega^2 mu d_X^2 + L_mu[omega] I^mu acting on the real pair
 * (cos coefficient of phi1, sin coefficient of phi2).
 */
RealMat2 mode_block(double mu, double c, double omega, int k);

/// Spectral norm of L~_mu(omega k) I^mu / (c^2 omega^2 mu k^2).
double block_neumann_bound(double mu, double c, double omega, int k);

struct KernelPair {
    double omega = 0.0;
    double upsilon = 0.0; ///< nu = (upsilon cos X, sin X)
    double z = 0.0;       ///< nu* = (z cos X, sin X)
    double kernel_residual = 0.0;
    double adjoint_residual = 0.0;
};

KernelPair kernel_pair(double mu, double c);

/**
 * Solve Gamma phi = g mode by mode with pi_mu phi = 0, for g given by its cosine (g1) and
 * sine (g2) coefficients, index k = 1..K stored at position k. The nu*-component of g at
 * k = 1 is discarded.
 */
std::pair<Vec, Vec> solve_gamma(double mu, double c, const Vec& g1, const Vec& g2);

struct PeriodicOptions {
    int n_modes = 16;
    bool auto_modes = true;
    int max_modes = 256;
    double tol = 1e-13;
    int max_newton = 30;
    /// Highest retained mode relative to the fundamental.
    double tail_ratio = 1e-12;
    /// Modes are doubled until sup |G(a p)| on the period grid is below this.
    double max_residual = 1e-10;
};

/**
 * h = a p with p(x) = (mu phi1(omega_a x), phi2(omega_a x)), phi1 = sum A_k cos kX,
 * phi2 = sum B_k sin kX, and phi = nu + psi with <psi, nu*> = 0.
 */
struct PeriodicWave {
    double mu = 0.0;
    double c = 0.0;
    double a = 0.0;
    double omega_mu = 0.0;
    double omega_a = 0.0;
    double upsilon = 0.0;
    double z = 0.0;
    Vec coeffs1; ///< A_k at index k; index 0 unused
    Vec coeffs2; ///< B_k at index k; index 0 unused
    int n_modes = 0;
    int newton_steps = 0;
    double residual = 0.0;            ///< sup |G(a p)| on the period grid
    double residual_normalized = 0.0; ///< sup |G(a p)| / max(|a|, 1e-300), or of the linear part at a = 0
    double tail = 0.0;                ///< max(|A_K|, |B_K|) / |B_1|

    double xi() const { return omega_a - omega_mu; }
    Vec psi1() const;
    Vec psi2() const;
    /// p at a single point.
    std::array<double, 2> p(double x) const;
    /// dp/dx at a single point.
    std::array<double, 2> dp(double x) const;
    /// p sampled on g.
    TwoField sample(const Grid& g) const;
    /// One-period grid used by the solver, L = pi / omega_a.
    Grid period_grid() const;
};

PeriodicWave solve_periodic(double mu, double c, double a, const PeriodicOptions& opts = {},
                            const PeriodicWave* guess = nullptr);

/// c^2 I_mu p'' + L_mu p + a L_mu Q_mu(p, p) on the period grid.
TwoField periodic_residual(const PeriodicWave& w, std::size_t n_points);

struct AmaxResult {
    double a_max = 0.0;
    std::vector<PeriodicWave> branch;
    std::string stop_reason;
};

/// Continuation in a from 0 in steps of da until Newton needs more than max_steps or a reaches a_cap.
AmaxResult find_a_max(double mu, double c, double da = 0.25, double a_cap = 16.0, int max_steps = 8,
                      const PeriodicOptions& opts = {});

}  // namespace dimerwave
