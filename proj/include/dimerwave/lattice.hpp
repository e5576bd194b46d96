#pragma once

#include "dimerwave/spectral.hpp"

#include <array>
#include <utility>

namespace dimerwave {

/// Wave speed c and mass ratio mu of the dimer.
struct ModelParams {
    double c = 1.45;
    double mu = 0.0;

    /// Throws InvalidInput unless |c| > sqrt(2) and 0 <= mu < 1 (mu > 0 when strict).
    void validate(bool strict_mu = false) const;
};

inline constexpr double sonic_speed = 1.4142135623730951;

using Mat2 = std::array<std::array<std::complex<double>, 2>, 2>;

/// Symbol of L_mu at wavenumber k (A -> cos k, delta -> i sin k).
Mat2 L_symbol(double mu, double k);

// Scalar shift operators on raw samples; exact on lattice grids.
Vec op_A(const Grid& g, const Vec& f);
Vec op_delta(const Grid& g, const Vec& f);

GridFunction shift(const GridFunction& f, double d);
GridFunction apply_A(const GridFunction& f);
GridFunction apply_delta(const GridFunction& f);

TwoField apply_L(const ModelParams& p, const TwoField& h);
/// Same operator assembled from explicit shifts; used for cross-checks.
TwoField apply_L_space(const ModelParams& p, const TwoField& h);
/// L2 adjoint of L_mu (conjugate-transposed symbol).
TwoField apply_L_adjoint(const ModelParams& p, const TwoField& h);

TwoField apply_T(const ModelParams& p, const TwoField& theta, bool inverse = false);
TwoField apply_T_adjoint(const ModelParams& p, const TwoField& theta, bool inverse = false);

/// Q_0(g, gg) = (g1 gg1 + g2 gg2, g1 gg2 + g2 gg1).
TwoField quadratic_Q0(const TwoField& g, const TwoField& gg);
/// Q_mu(g, gg) = T^{-1} Q_0(T g, T gg).
TwoField quadratic_Q(const ModelParams& p, const TwoField& g, const TwoField& gg);

/// L_mu Q_mu(g, gg), the bilinear part of the traveling-wave map.
TwoField LQ(const ModelParams& p, const TwoField& g, const TwoField& gg);

/// G(h, mu) = c^2 I_mu h'' + L_mu h + L_mu Q_mu(h, h).
TwoField residual_G(const ModelParams& p, const TwoField& h);
/// G with the c^2 mu h2'' term dropped.
TwoField residual_G_mod(const ModelParams& p, const TwoField& h);

/// Off-diagonal part of L_mu applied to eta: (L12 eta2, L21 eta1) = mu Theta eta.
TwoField off_diagonal_Theta(const ModelParams& p, const TwoField& eta);

/**
 * Split of 2 L_mu Q_mu(sigma, f) into its diagonal part Sigma f = (Sigma1 f1, Sigma2 f2)
 * and its off-diagonal part mu Omega f = (mu Omega1 f2, mu Omega2 f1).
 */
std::pair<TwoField, TwoField> coefficient_Sigma_Omega(const ModelParams& p, const TwoField& sigma, const TwoField& f);

/// Sigma_{mu,1} f1 and Sigma_{mu,2} f2 separately.
Vec Sigma1(const ModelParams& p, const TwoField& sigma, const Vec& f1);
Vec Sigma2(const ModelParams& p, const TwoField& sigma, const Vec& f2);
/// L2 adjoint of Sigma_{mu,2}.
Vec Sigma2_adjoint(const ModelParams& p, const TwoField& sigma, const Vec& f);

/// Particle chain state; site j has mass 1 when j is odd, mu when j is even.
struct LatticeState {
    long first_index = 0;
    Vec y;
    Vec v;
    double mu = 0.0;

    double mass(std::size_t i) const { return ((first_index + static_cast<long>(i)) % 2 != 0) ? 1.0 : mu; }
};

/// Accelerations from m_j y_j'' = -r_{j-1} - r_{j-1}^2 + r_j + r_j^2; end particles get 0.
Vec lattice_accelerations(const LatticeState& s);

/**
 * Right-hand side (rho1'', rho2'') of the rho-form on the even sublattice.
 * Inputs are samples at consecutive even sites; results are valid away from the two ends
 * (two sites each side).
 */
std::pair<Vec, Vec> rho_form_accelerations(double mu, const Vec& rho1, const Vec& rho2);

}  // namespace dimerwave
