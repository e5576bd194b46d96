#pragma once

#include "dimerwave/jost.hpp"
#include "dimerwave/periodic.hpp"

#include <string>
#include <vector>

namespace dimerwave {

/// Everything the fixed point needs that does not change between iterates.
struct NanopteronSetup {
    ModelParams params;
    RefinedCore core; ///< resampled onto gamma.grid
    GammaData gamma;
    KappaData kappa;
    double b_star = 0.0; ///< b_c / 2
    Vec l0;              ///< second component of -G(sigma_{c,mu})

    const Grid& grid() const { return gamma.grid; }
};

NanopteronSetup make_setup(double mu, const SolitaryWave& base, const GammaOptions& opts = {});

/**
 * Solve H_mu f = g for even mean-zero g by GMRES preconditioned with the inverse
 * constant-coefficient symbol. Throws InvalidInput when g has a nonzero mean.
 * rel_tol <= 0 picks max(1e-12, the roundoff floor of the grid).
 */
Vec invert_H(const ModelParams& p, const TwoField& sigma_refined, const Vec& g, double rel_tol = 0.0);

/// P_mu g = g - iota[g] chi / kappa. Throws InvalidInput when kappa is numerically zero.
Vec project_P(const NanopteronSetup& s, const Vec& g);

struct LightSolve {
    Vec f;
    double rel_residual = 0.0;
    int iterations = 0;
    double tail = 0.0;       ///< asymptotic sinusoid amplitude of f relative to sup |f|
    double range_defect = 0.0; ///< |iota[g]| / ||g||_inf
};

/**
 * Solve L_mu f = g for odd g in the range of L_mu, on the periodic box with the constant
 * coefficient symbol as preconditioner. range_tol bounds |iota[g]| / ||g||_inf; tail_tol bounds the
 * non-decaying part of the result.
 */
LightSolve invert_L(const NanopteronSetup& s, const Vec& g, double range_tol = 1e-6, double tail_tol = 1e-6);

struct RhsTerms {
    Vec j2, j3, j4, j5;
    Vec l0, l1, l2, l3, l31, l4, l5;

    Vec j_sum() const;
    /// l0 + l1 + l2 + l31 + l4 + l5
    Vec l_sum_reduced() const;
};

RhsTerms assemble_rhs(const NanopteronSetup& s, const TwoField& eta, double a, const PeriodicWave& wave);

struct NanopteronOptions {
    double tol = 1e-10;
    int max_iter = 60;
    bool jacobi = false;
    /// Refuse mu outside the admissible set |sin(omega theta)| > 1/2.
    bool require_admissible = true;
    PeriodicOptions periodic;
};

struct IterateRecord {
    double eta1_norm = 0.0; ///< ||eta1||_{2, b*/2}
    double eta2_norm = 0.0; ///< ||eta2||_{0, b*/2}
    double a = 0.0;
    double change = 0.0;
    double ratio = 0.0;
};

struct NanopteronSolution {
    ModelParams params;
    TwoField eta;
    double a = 0.0;
    PeriodicWave wave;
    double residual_full = 0.0;  ///< sup |G(sigma + a p + eta)| on |x| <= L/2
    double solvability = 0.0;    ///< |iota[l0 + ... + l5]| at the fixed point
    double a_consistency = 0.0;  ///< |a - N3(eta, a)|
    int iterates = 0;
    std::vector<IterateRecord> history;
    double eta1_norm = 0.0; ///< ||eta1||_{2, b*}
    double eta2_norm = 0.0; ///< ||eta2||_{1, b*}
};

NanopteronSolution iterate(const NanopteronSetup& s, const NanopteronOptions& opts = {});

/// sup |G(sigma + a p + eta)| on |x| <= L/2, with G(a p) taken from the periodic solver.
double full_residual(const NanopteronSetup& s, const TwoField& eta, double a, const PeriodicWave& wave);

struct PhysicalProfiles {
    Grid grid;
    Vec sigma;                  ///< sigma_c
    Vec upsilon1, upsilon2;     ///< T(mu xi + eta)
    Vec phi1, phi2;             ///< T(a p)
    Vec dphi1, dphi2;           ///< exact x-derivatives of phi
    Vec rho1() const;
    Vec rho2() const;
    /// Localized parts differentiated spectrally, the periodic part analytically.
    Vec drho1() const;
    Vec drho2() const;
};

/**
 * Physical profiles rho = T h. With L_out > L the localized parts are zero-extended to
 * [-L_out, L_out) and the periodic part is evaluated there directly.
 */
PhysicalProfiles assemble_physical(const NanopteronSetup& s, const NanopteronSolution& sol, double L_out = 0.0);

/// Same from stored parts: sigma_c and upsilon on a lattice grid g, the periodic wave and a.
PhysicalProfiles physical_from_parts(const Grid& g, const Vec& sigma, const Vec& upsilon1, const Vec& upsilon2,
                                     double a, const PeriodicWave& wave, double L_out = 0.0);

/// Traveling-wave residual of the rho-form equations, sup over |x| <= x_max.
double rho_form_residual(double mu, double c, const Grid& g, const Vec& rho1, const Vec& rho2, double x_max);

}  // namespace dimerwave
