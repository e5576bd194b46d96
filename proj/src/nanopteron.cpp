#include "dimerwave/nanopteron.hpp"

#include "dimerwave/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dimerwave {
namespace {

double sup_on(const Grid& g, const Vec& f, double x_max) {
    double m = 0.0;
    for (std::size_t j = 0; j < g.n; ++j)
        if (std::abs(g.x(j)) <= x_max) m = std::max(m, std::abs(f[j]));
    return m;
}

// ||eta1||_{2,b} + ||eta2||_{0,b}
double x0_norm(const TwoField& eta, double b) {
    return weighted_norm(GridFunction(eta.grid, eta.f1), 2, b) + weighted_norm(GridFunction(eta.grid, eta.f2), 0, b);
}

}  // namespace

NanopteronSetup make_setup(double mu, const SolitaryWave& base, const GammaOptions& opts) {
    NanopteronSetup s;
    s.params = ModelParams{base.c, mu};
    s.params.validate(true);
    RefinedCore core = refine_core(base.c, mu, base);
    s.gamma = compute_gamma(core, opts);
    s.kappa = kappa(s.gamma);
    s.core = core.on_grid(s.gamma.grid);
    s.b_star = 0.5 * base.b_c;
    s.l0 = (-1.0 * residual_G(s.params, s.core.sigma)).f2;
    return s;
}

Vec invert_H(const ModelParams& p, const TwoField& sigma_refined, const Vec& g, double rel_tol) {
    const Grid& grid = sigma_refined.grid;
    if (g.size() != grid.n) throw InvalidInput("invert_H: sample count does not match the grid");
    double l1 = 0.0;
    for (double v : g) l1 += std::abs(v);
    l1 *= grid.dx();
    if (std::abs(trapz(grid, g)) > 1e-11 * std::max(l1, 1e-300))
        throw InvalidInput("invert_H: right-hand side is not mean-zero");
    if (l1 == 0.0) return Vec(grid.n, 0.0);
    LinearMap A = [&](const Vec& f) { return apply_H(p, sigma_refined, f); };
    LinearMap M = [&](const Vec& f) { return heavy_symbol_inverse(p, grid, f); };
    if (rel_tol <= 0.0) {
        // Roundoff in c^2 f'' at the highest resolved wavenumber sets the attainable floor.
        const double k = grid.wavenumber(grid.n / 2);
        rel_tol = std::max(1e-12, 10.0 * 2.2e-16 * (p.c * p.c * k * k + 4.0));
    }
    GmresResult r = gmres(A, g, M, {rel_tol, 80, 1600});
    if (!r.converged) throw SolverError("heavy inversion stagnated", r.rel_residual);
    return symmetrize(grid, r.x, Parity::even);
}

Vec project_P(const NanopteronSetup& s, const Vec& g) {
    const double scale = 2.0 * s.params.c * s.params.c * s.params.mu * s.gamma.disp.omega_mu;
    if (!(std::abs(s.kappa.kappa) > 1e-6 * scale))
        throw InvalidInput("kappa_mu vanishes to working precision; mu is not admissible");
    const double t = iota(s.gamma, g) / s.kappa.kappa;
    return g - t * s.kappa.chi;
}

LightSolve invert_L(const NanopteronSetup& s, const Vec& g, double range_tol, double tail_tol) {
    const Grid& grid = s.grid();
    if (g.size() != grid.n) throw InvalidInput("invert_L: sample count does not match the grid");
    LightSolve out;
    const double gs = sup_norm(g);
    if (gs == 0.0) {
        out.f.assign(grid.n, 0.0);
        return out;
    }
    out.range_defect = std::abs(iota(s.gamma, g)) / gs;
    if (out.range_defect > range_tol)
        throw InvalidInput("invert_L: data is not in the range of L_mu (|iota| / sup = " +
                           std::to_string(out.range_defect) + "); project first");
    const ModelParams& p = s.params;
    const double c2mu = p.c * p.c * p.mu;
    const double mu = p.mu, tau = s.gamma.disp.tau_mu;
    auto symbol = [&](double k) {
        const double co = std::cos(k);
        double m = -c2mu * k * k + 2.0 * (1.0 + mu * co * co + mu * mu * tau);
        if (std::abs(m) < 1e-8) m = std::copysign(1e-8, m);
        return 1.0 / m;
    };
    LinearMap A = [&](const Vec& f) { return apply_light(p, s.gamma.disp, s.core.sigma, f); };
    LinearMap M = [&](const Vec& f) { return apply_multiplier(grid, f, symbol); };
    GmresResult r = gmres(A, g, M, {1e-12, 120, 2400});
    if (!r.converged) throw SolverError("light inversion stagnated", r.rel_residual);
    out.f = symmetrize(grid, r.x, Parity::odd);
    out.rel_residual = r.rel_residual;
    out.iterations = r.iterations;
    const double fs = sup_norm(out.f);
    if (fs > 0.0) {
        const SinusoidFit fit =
            fit_sinusoid(grid, out.f, s.gamma.disp.omega_mu, 0.6 * grid.L, 0.9 * grid.L, 0.0);
        out.tail = fit.rho / fs;
    }
    if (out.tail > tail_tol)
        throw ResolutionError("invert_L: solution carries a non-decaying tail (relative amplitude " +
                              std::to_string(out.tail) + ")");
    return out;
}

Vec RhsTerms::j_sum() const { return j2 + j3 + j4 + j5; }

Vec RhsTerms::l_sum_reduced() const { return l0 + l1 + l2 + l31 + l4 + l5; }

RhsTerms assemble_rhs(const NanopteronSetup& s, const TwoField& eta, double a, const PeriodicWave& wave) {
    const Grid& g = s.grid();
    const ModelParams& p = s.params;
    const double mu = p.mu;
    const TwoField& sig = s.core.sigma;
    RhsTerms t;
    const TwoField pa = wave.sample(g);
    const TwoField J2 = -1.0 * (off_diagonal_Theta(p, eta) + coefficient_Sigma_Omega(p, sig, eta).second);
    const TwoField J3 = (-2.0 * a) * LQ(p, sig, pa);
    const TwoField J4 = (-2.0 * a) * LQ(p, pa, eta);
    const TwoField J5 = -1.0 * LQ(p, eta, eta);
    t.j2 = J2.f1;
    t.j3 = J3.f1;
    t.j4 = J4.f1;
    t.j5 = J5.f1;
    t.l0 = s.l0;
    const Vec dd = op_delta(g, op_delta(g, eta.f2));
    t.l1 = (mu * mu) * ((2.0 * s.gamma.disp.tau_mu) * eta.f2 + 2.0 * op_A(g, op_A(g, dd)));
    t.l2 = J2.f2;
    t.l3 = J3.f2;
    t.l31 = t.l3 + a * s.kappa.chi;
    t.l4 = J4.f2;
    t.l5 = J5.f2;
    return t;
}

double full_residual(const NanopteronSetup& s, const TwoField& eta, double a, const PeriodicWave& wave) {
    const Grid& g = s.grid();
    const TwoField h = s.core.sigma + eta;
    // G is quadratic, and G(a p) = 0 up to the periodic solver's own residual.
    TwoField r = residual_G(s.params, h);
    if (a != 0.0) r = r + (2.0 * a) * LQ(s.params, h, wave.sample(g));
    const double x_max = 0.5 * g.L;
    return std::max(sup_on(g, r.f1, x_max), sup_on(g, r.f2, x_max)) + (a != 0.0 ? wave.residual : 0.0);
}

NanopteronSolution iterate(const NanopteronSetup& s, const NanopteronOptions& opts) {
    if (opts.require_admissible && !(std::abs(s.kappa.sin_term) > 0.5))
        throw InvalidInput("mu = " + std::to_string(s.params.mu) + " is outside the admissible set (|sin| = " +
                           std::to_string(std::abs(s.kappa.sin_term)) + ")");
    const Grid& g = s.grid();
    const double mu = s.params.mu, c = s.params.c;
    const double bw = 0.5 * s.b_star;
    NanopteronSolution sol;
    sol.params = s.params;
    TwoField eta = TwoField::zero(g);
    double a = 0.0;
    PeriodicWave wave = solve_periodic(mu, c, 0.0, opts.periodic);
    double prev_change = -1.0;
    int growing = 0;
    auto wave_at = [&](double amp, const PeriodicWave& from) {
        return amp == from.a ? from : solve_periodic(mu, c, amp, opts.periodic, &from);
    };
    for (int it = 1; it <= opts.max_iter; ++it) {
        const RhsTerms t0 = assemble_rhs(s, eta, a, wave);
        const double a_new = iota(s.gamma, t0.l_sum_reduced()) / s.kappa.kappa;
        PeriodicWave wave_new = wave_at(a_new, wave);
        const RhsTerms t1 = opts.jacobi ? t0 : assemble_rhs(s, eta, a_new, wave_new);
        Vec eta2 = invert_L(s, project_P(s, t1.l_sum_reduced())).f;
        const RhsTerms t2 = opts.jacobi ? t0 : assemble_rhs(s, TwoField(g, eta.f1, eta2), a_new, wave_new);
        Vec j = t2.j_sum();
        j = mean_zero_project(GridFunction(g, j)).values;
        Vec eta1 = invert_H(s.params, s.core.sigma, j);
        const TwoField next(g, eta1, eta2);
        IterateRecord rec;
        rec.change = x0_norm(next - eta, bw) + std::abs(a_new - a);
        rec.ratio = prev_change > 0.0 ? rec.change / prev_change : 0.0;
        rec.eta1_norm = weighted_norm(GridFunction(g, eta1), 2, bw);
        rec.eta2_norm = weighted_norm(GridFunction(g, eta2), 0, bw);
        rec.a = a_new;
        sol.history.push_back(rec);
        eta = next;
        a = a_new;
        wave = std::move(wave_new);
        if (rec.change < opts.tol) {
            sol.iterates = it;
            break;
        }
        // Early ratios compare against the zero start and carry no contraction information.
        growing = (it > 2 && rec.ratio >= 1.0) ? growing + 1 : 0;
        if (growing >= 3)
            throw SolverError("nanopteron iteration is not contracting at mu = " + std::to_string(mu) +
                              ", c = " + std::to_string(c));
        prev_change = rec.change;
        if (it == opts.max_iter)
            throw SolverError("nanopteron iteration hit max_iter; last change " + std::to_string(rec.change));
    }
    sol.eta = eta;
    sol.a = a;
    sol.wave = wave;
    sol.residual_full = full_residual(s, eta, a, wave);
    const RhsTerms t = assemble_rhs(s, eta, a, wave);
    sol.solvability = std::abs(iota(s.gamma, t.l_sum_reduced() + t.l3 - t.l31));
    sol.a_consistency = std::abs(a - iota(s.gamma, t.l_sum_reduced()) / s.kappa.kappa);
    sol.eta1_norm = weighted_norm(GridFunction(g, eta.f1), 2, s.b_star);
    sol.eta2_norm = weighted_norm(GridFunction(g, eta.f2), 1, s.b_star);
    return sol;
}

Vec PhysicalProfiles::rho1() const { return sigma + upsilon1 + phi1; }
Vec PhysicalProfiles::rho2() const { return upsilon2 + phi2; }
Vec PhysicalProfiles::drho1() const { return derivative(grid, sigma + upsilon1) + dphi1; }
Vec PhysicalProfiles::drho2() const { return derivative(grid, upsilon2) + dphi2; }

PhysicalProfiles physical_from_parts(const Grid& gs, const Vec& sigma, const Vec& upsilon1, const Vec& upsilon2,
                                     double a, const PeriodicWave& wave, double L_out) {
    const double mu = wave.mu;
    PhysicalProfiles out;
    out.grid = gs;
    if (L_out > gs.L) {
        const int m = gs.per_unit();
        if (m <= 0) throw InvalidInput("profile extension needs a lattice grid");
        out.grid = Grid::lattice(std::ceil(L_out), m);
    }
    const Grid& g = out.grid;
    out.sigma = extend_localized(gs, sigma, g);
    out.upsilon1 = extend_localized(gs, upsilon1, g);
    out.upsilon2 = extend_localized(gs, upsilon2, g);
    out.phi1.assign(g.n, 0.0);
    out.phi2.assign(g.n, 0.0);
    out.dphi1.assign(g.n, 0.0);
    out.dphi2.assign(g.n, 0.0);
    if (a != 0.0) {
        // Pointwise T on the periodic part; the box is not a multiple of its period.
        for (std::size_t j = 0; j < g.n; ++j) {
            const double x = g.x(j);
            const auto p0 = wave.p(x);
            const auto d0 = wave.dp(x);
            const double adp = 0.25 * (wave.p(x + 2.0)[1] - wave.p(x - 2.0)[1]);
            const double add = 0.25 * (wave.dp(x + 2.0)[1] - wave.dp(x - 2.0)[1]);
            out.phi1[j] = a * (p0[0] - mu * adp);
            out.phi2[j] = a * p0[1];
            out.dphi1[j] = a * (d0[0] - mu * add);
            out.dphi2[j] = a * d0[1];
        }
    }
    return out;
}

PhysicalProfiles assemble_physical(const NanopteronSetup& s, const NanopteronSolution& sol, double L_out) {
    const TwoField ups = apply_T(s.params, s.params.mu * s.core.xi + sol.eta);
    return physical_from_parts(s.grid(), s.core.base.profile.values, ups.f1, ups.f2, sol.a, sol.wave, L_out);
}

double rho_form_residual(double mu, double c, const Grid& g, const Vec& rho1, const Vec& rho2, double x_max) {
    const int m = g.per_unit();
    if (m <= 0) throw InvalidInput("rho-form residual needs a lattice grid");
    const std::size_t stride = 2 * static_cast<std::size_t>(m);
    const Vec d1 = fd_second_derivative(g, rho1, 6);
    const Vec d2 = fd_second_derivative(g, rho2, 6);
    double worst = 0.0;
    for (std::size_t off = 0; off < stride; ++off) {
        Vec r1, r2;
        std::vector<std::size_t> idx;
        for (std::size_t j = off; j < g.n; j += stride) {
            idx.push_back(j);
            r1.push_back(rho1[j]);
            r2.push_back(rho2[j]);
        }
        const auto [a1, a2] = rho_form_accelerations(mu, r1, r2);
        for (std::size_t i = 1; i + 1 < idx.size(); ++i) {
            const std::size_t j = idx[i];
            if (std::abs(g.x(j)) > x_max) continue;
            worst = std::max(worst, std::abs(c * c * d1[j] - a1[i]));
            worst = std::max(worst, mu * std::abs(c * c * d2[j] - a2[i]));
        }
    }
    return worst;
}

}  // namespace dimerwave
