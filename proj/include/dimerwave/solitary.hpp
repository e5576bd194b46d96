#pragma once

#include "dimerwave/lattice.hpp"

namespace dimerwave {

struct SolitaryOptions {
    double L = 40.0;
    int per_unit = 8;
    /// Double L until |sigma(+-L)| / sigma(0) drops below this.
    double boundary_ratio = 1e-10;
    bool auto_extend = true;
    double tol = 1e-14;
    int max_iter = 2000;
};

/// Monatomic solitary wave sigma_c: c^2 sigma'' = 2 delta^2 (sigma + sigma^2).
struct SolitaryWave {
    double c = 0.0;
    GridFunction profile;
    double b_c = 0.0;     ///< fitted exponential decay rate
    double tail_r2 = 0.0; ///< R^2 of the log-linear tail fit
    double residual = 0.0;
    int iterations = 0;
    bool used_newton = false;

    const Grid& grid() const { return profile.grid; }
    double b_star() const { return 0.5 * b_c; }
    /// Band-limited copy on a finer grid with the same L.
    SolitaryWave on_grid(const Grid& g) const;
};

SolitaryWave solve_monatomic(double c, const SolitaryOptions& opts = {});

/// sup-norm of c^2 s'' - 2 delta^2 (s + s^2).
double monatomic_residual(double c, const Grid& g, const Vec& s);

/// Long-wave profile (3 eps^2 / 4) sech^2(eps sqrt(3/8) x), eps^2 = c^2 - 2.
double kdv_profile(double c, double x);

/// Root b > 0 of c^2 b^2 = 2 sinh^2 b, the linear decay rate of sigma_c.
double linear_decay_rate(double c);

/// sigma_{c,mu} = sigma_c e1 + mu xi_mu with G_mod(sigma_{c,mu}, mu) = 0.
struct RefinedCore {
    SolitaryWave base;
    double mu = 0.0;
    TwoField xi;
    TwoField sigma;           ///< sigma_{c,mu}
    double residual_mod = 0.0;
    double residual_second = 0.0;
    int newton_steps = 0;

    const Grid& grid() const { return sigma.grid; }
    ModelParams params() const { return {base.c, mu}; }
    RefinedCore on_grid(const Grid& g) const;
};

struct RefineOptions {
    double tol = 1e-12;
    int max_newton = 25;
};

RefinedCore refine_core(double c, double mu, const SolitaryWave& base, const RefineOptions& opts = {});

/// Heavy operator H_mu f = c^2 f'' + [L_mu (f e1 + 2 Q_mu(sigma, f e1))]_1.
Vec apply_H(const ModelParams& p, const TwoField& sigma, const Vec& f);

/**
 * Inverse of the constant-coefficient symbol -c^2 k^2 + 2 sin^2 k (1 - mu cos^2 k) on even
 * mean-zero localized data. The k = 0 coefficient of the result is the limit of g^(k)/p(k),
 * obtained from the second moment of g.
 */
Vec heavy_symbol_inverse(const ModelParams& p, const Grid& g, const Vec& rhs);

}  // namespace dimerwave
