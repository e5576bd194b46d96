#pragma once

#include "dimerwave/dispersion.hpp"
#include "dimerwave/solitary.hpp"

#include <string>
#include <vector>

namespace dimerwave {

/// Lattice grid with the same L as core and at least 16 points per period 2 pi / omega.
Grid oscillatory_grid(const Grid& core, double omega);

/**
 * Jost solution of S_mu zeta = c^2 mu zeta'' + c^2 mu omega_mu^2 zeta + 4 sigma_c zeta = 0 in
 * polar form zeta = r sin(omega (x + phi)), zeta' = omega r cos(omega (x + phi)).
 * parity 1: zeta(0) = 0, zeta'(0) = omega; parity 0: zeta(0) = 1, zeta'(0) = 0.
 */
struct JostData {
    double mu = 0.0;
    double c = 0.0;
    double omega = 0.0;
    int parity = 1;
    Grid grid;      ///< full grid; the polar data live on its nonnegative half
    Vec xs;         ///< stations x_j >= 0
    Vec r;
    Vec phi;
    double r_inf = 0.0;
    double phi_inf = 0.0;
    Vec zeta;       ///< on the full grid, extended by parity
    Vec dzeta;
    int ode_steps = 0;

    /// E(x) = c^2 mu zeta'^2 + (c^2 mu omega^2 + 4 sigma_c) zeta^2 at the stations.
    Vec energy(const Vec& sigma_full) const;
};

struct JostOptions {
    double abs_tol = 1e-13;
    double rel_tol = 1e-13;
    /// Maximum step as a fraction of the period 2 pi / omega.
    double max_step_fraction = 0.05;
};

/// sigma is sampled on the grid of the result; pass sigma_c resampled to oscillatory_grid.
JostData integrate_jost(double mu, double c, const GridFunction& sigma, int parity, const JostOptions& opts = {});

/// Least-squares fit f ~ rho sin(omega (x + theta)) on [x_lo, x_hi].
struct SinusoidFit {
    double rho = 0.0;
    double theta = 0.0;
    double residual = 0.0; ///< sup misfit on the window
};

/// theta is taken on the branch closest to reference.
SinusoidFit fit_sinusoid(const Grid& g, const Vec& f, double omega, double x_lo, double x_hi, double reference = 0.0);

/// Smooth odd nondecreasing cutoff, 0 on [0, 1/2] and 1 on [2, inf).
double cutoff_i1(double x);

/// Delta_mu f = 2 (A^2 - cos^2 omega_mu) f.
Vec apply_Delta(const Grid& g, const Vec& f, double omega);

/// mu K*_mu f = Sigma*_{mu,2} f - 4 sigma_c f.
Vec apply_muK(const ModelParams& p, const TwoField& sigma_refined, const Vec& sigma_c, const Vec& f);

/// L*_mu f = c^2 mu f'' + 2 (1 + mu A^2 + mu^2 tau_mu) f + Sigma*_{mu,2} f, with f'' by finite differences.
Vec apply_light_adjoint(const ModelParams& p, const DispersionData& d, const TwoField& sigma_refined, const Vec& f);

/// L_mu f = c^2 mu f'' + 2 (1 + mu A^2 + mu^2 tau_mu) f + Sigma_{mu,2} f, spectral f''.
Vec apply_light(const ModelParams& p, const DispersionData& d, const TwoField& sigma_refined, const Vec& f);

struct GammaOptions {
    double increment_tol = 1e-10;
    int max_terms = 50;
    /// Above this observed ratio the Neumann series is abandoned for a Krylov solve.
    double max_contraction = 0.9;
    bool allow_krylov_fallback = true;
    JostOptions jost;
};

struct GammaData {
    double mu = 0.0;
    double c = 0.0;
    DispersionData disp;
    Grid grid;
    Vec gamma;            ///< renormalized so the asymptotic amplitude is 1
    double rho_inf = 0.0; ///< amplitude before renormalization (gamma'(0) = omega)
    double theta_inf = 0.0;
    double fit_residual = 0.0;
    int neumann_terms_used = 0;
    double contraction = 0.0;
    bool used_krylov = false;
    double correction_norm = 0.0; ///< sup |gamma - zeta_1| before renormalization
    double adjoint_residual = 0.0; ///< sup |L* gamma| on |x| <= L/2, renormalized gamma
    JostData zeta1;
    JostData zeta0;
    TwoField sigma_refined; ///< sigma_{c,mu} on grid
    Vec sigma_c;            ///< sigma_c on grid
};

GammaData compute_gamma(const RefinedCore& core, const GammaOptions& opts = {});

/// Everything from the monatomic profile: refine, integrate, solve.
GammaData gamma_for(double mu, const SolitaryWave& base, const GammaOptions& opts = {});

/// int g gamma over R, with the tail beyond the grid closed against the fitted sinusoid.
double iota(const GammaData& gd, const Vec& g);

struct KappaData {
    double kappa = 0.0;
    double comparator = 0.0; ///< 2 c^2 mu omega sin(omega theta)
    double sin_term = 0.0;
    Vec chi;
};

/// chi_mu = [2 L_mu Q_mu(sigma_{c,mu}, p0)]_2 with p0 = (mu upsilon cos, sin)(omega x).
Vec chi_mu(const GammaData& gd);
KappaData kappa(const GammaData& gd);

struct McPoint {
    double mu = 0.0;
    double omega = 0.0;
    double theta = 0.0;
    double phase = 0.0; ///< omega * theta
    double sin_term = 0.0;
    double kappa = 0.0;
    double comparator = 0.0;
    double phi_inf = 0.0;
};

struct McInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool clipped_lo = false; ///< touches the scan boundary
    bool clipped_hi = false;
};

struct McScan {
    std::vector<McPoint> points;
    std::vector<McInterval> intervals;
};

McPoint evaluate_mu(double mu, const SolitaryWave& base, const GammaOptions& opts = {});

/// mu_grid ascending; refine crossings of |sin| = 1/2 by bisection to relative width rel_width.
McScan scan_Mc(const SolitaryWave& base, const Vec& mu_grid, double rel_width = 1e-3, const GammaOptions& opts = {});

}  // namespace dimerwave
