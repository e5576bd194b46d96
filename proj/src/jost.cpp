#include "dimerwave/jost.hpp"

#include "dimerwave/krylov.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace dimerwave {
namespace {

constexpr double pi = std::numbers::pi;

using State = std::array<double, 2>;

Vec window(const Grid& g, const Vec& f, double x_max) {
    Vec r = f;
    for (std::size_t j = 0; j < g.n; ++j)
        if (std::abs(g.x(j)) > x_max) r[j] = 0.0;
    return r;
}

// Values beyond this are affected by the cyclic wrap of the longest shift in Sigma*.
double trusted_extent(const Grid& g) { return g.L - 15.0; }

}  // namespace

Grid oscillatory_grid(const Grid& core, double omega) {
    int m = std::max(core.per_unit(), 1);
    while (m < 8.0 * omega / pi) m *= 2;
    return Grid::lattice(core.L, m);
}

Vec JostData::energy(const Vec& sigma_full) const {
    Vec e(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const std::size_t j = std::min(grid.center() + i, grid.n - 1);
        const double z = r[i] * std::sin(omega * (xs[i] + phi[i]));
        const double dz = omega * r[i] * std::cos(omega * (xs[i] + phi[i]));
        const double s = (grid.center() + i < grid.n) ? sigma_full[j] : 0.0;
        e[i] = c * c * mu * dz * dz + (c * c * mu * omega * omega + 4.0 * s) * z * z;
    }
    return e;
}

JostData integrate_jost(double mu, double c, const GridFunction& sigma, int parity, const JostOptions& opts) {
    if (parity != 0 && parity != 1) throw InvalidInput("Jost parity must be 0 or 1");
    const DispersionData d = solve_omega(mu, c);
    const double w = d.omega_mu;
    const Grid& g = sigma.grid;
    JostData out;
    out.mu = mu;
    out.c = c;
    out.omega = w;
    out.parity = parity;
    out.grid = g;
    const LocalInterpolant sig(g, sigma.values);
    const double L = g.L;
    const double k_r = 2.0 / (c * c * mu * w);
    const double k_phi = 4.0 / (c * c * mu * w * w);
    auto rhs = [&](const State& s, State& ds, double x) {
        const double sv = (std::abs(x) < L) ? sig(x) : 0.0;
        const double ang = w * (x + s[1]);
        const double sn = std::sin(ang);
        ds[0] = -k_r * sv * s[0] * std::sin(2.0 * ang);
        ds[1] = k_phi * sv * sn * sn;
    };
    for (std::size_t j = g.center(); j < g.n; ++j) out.xs.push_back(g.x(j));
    out.xs.push_back(L);
    State s0{1.0, parity == 1 ? 0.0 : pi / (2.0 * w)};
    const double period = 2.0 * pi / w;
    namespace ode = boost::numeric::odeint;
    auto stepper = ode::make_dense_output(opts.abs_tol, opts.rel_tol, opts.max_step_fraction * period,
                                          ode::runge_kutta_dopri5<State>());
    out.r.reserve(out.xs.size());
    out.phi.reserve(out.xs.size());
    try {
        out.ode_steps = static_cast<int>(ode::integrate_times(stepper, rhs, s0, out.xs.begin(), out.xs.end(),
                                                              0.1 * opts.max_step_fraction * period,
                                                              [&](const State& s, double) {
                                                                  out.r.push_back(s[0]);
                                                                  out.phi.push_back(s[1]);
                                                              }));
    } catch (const std::exception& e) {
        throw SolverError(std::string("Jost integration failed: ") + e.what());
    }
    if (out.r.size() != out.xs.size()) throw SolverError("Jost integration stopped early");
    // Tail average over the last tenth of the half line.
    const std::size_t n_half = out.xs.size();
    const std::size_t start = n_half - std::max<std::size_t>(1, n_half / 10);
    double rs = 0.0, ps = 0.0;
    for (std::size_t i = start; i < n_half; ++i) {
        rs += out.r[i];
        ps += out.phi[i];
    }
    out.r_inf = rs / static_cast<double>(n_half - start);
    out.phi_inf = ps / static_cast<double>(n_half - start);
    out.zeta.assign(g.n, 0.0);
    out.dzeta.assign(g.n, 0.0);
    const double sgn = parity == 1 ? -1.0 : 1.0;
    for (std::size_t i = 0; i + 1 < n_half; ++i) {
        const std::size_t j = g.center() + i;
        const double ang = w * (out.xs[i] + out.phi[i]);
        out.zeta[j] = out.r[i] * std::sin(ang);
        out.dzeta[j] = w * out.r[i] * std::cos(ang);
        if (i > 0) {
            out.zeta[g.mirror(j)] = sgn * out.zeta[j];
            out.dzeta[g.mirror(j)] = -sgn * out.dzeta[j];
        }
    }
    {
        const double ang = w * (L + out.phi.back());
        out.zeta[0] = sgn * out.r.back() * std::sin(ang);
        out.dzeta[0] = -sgn * w * out.r.back() * std::cos(ang);
    }
    return out;
}

SinusoidFit fit_sinusoid(const Grid& g, const Vec& f, double omega, double x_lo, double x_hi, double reference) {
    double ss = 0.0, sc = 0.0, cc = 0.0, fs = 0.0, fc = 0.0;
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < g.n; ++j) {
        const double x = g.x(j);
        if (x < x_lo || x > x_hi) continue;
        idx.push_back(j);
        const double s = std::sin(omega * x), co = std::cos(omega * x);
        ss += s * s;
        sc += s * co;
        cc += co * co;
        fs += f[j] * s;
        fc += f[j] * co;
    }
    if (idx.size() < 4) throw ResolutionError("sinusoid fit window holds too few samples");
    const double det = ss * cc - sc * sc;
    const double A = (fs * cc - fc * sc) / det;
    const double B = (fc * ss - fs * sc) / det;
    SinusoidFit out;
    out.rho = std::hypot(A, B);
    const double t0 = std::atan2(B, A) / omega;
    const double per = 2.0 * pi / omega;
    out.theta = t0 + per * std::round((reference - t0) / per);
    for (std::size_t j : idx) {
        const double x = g.x(j);
        out.residual = std::max(out.residual, std::abs(f[j] - A * std::sin(omega * x) - B * std::cos(omega * x)));
    }
    return out;
}

double cutoff_i1(double x) {
    const double ax = std::abs(x);
    auto psi = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
    const double t = (ax - 0.5) / 1.5;
    double v;
    if (t <= 0.0)
        v = 0.0;
    else if (t >= 1.0)
        v = 1.0;
    else
        v = psi(t) / (psi(t) + psi(1.0 - t));
    return x < 0.0 ? -v : v;
}

Vec apply_Delta(const Grid& g, const Vec& f, double omega) {
    const double co = std::cos(omega);
    Vec aa = op_A(g, op_A(g, f));
    return 2.0 * (aa - (co * co) * f);
}

Vec apply_muK(const ModelParams& p, const TwoField& sigma_refined, const Vec& sigma_c, const Vec& f) {
    return Sigma2_adjoint(p, sigma_refined, f) - 4.0 * hadamard(sigma_c, f);
}

Vec apply_light_adjoint(const ModelParams& p, const DispersionData& d, const TwoField& sigma_refined, const Vec& f) {
    const Grid& g = sigma_refined.grid;
    const double mu = p.mu;
    Vec out = (p.c * p.c * mu) * fd_second_derivative(g, f, 6);
    out = out + 2.0 * (f + mu * op_A(g, op_A(g, f)) + (mu * mu * d.tau_mu) * f);
    return out + Sigma2_adjoint(p, sigma_refined, f);
}

Vec apply_light(const ModelParams& p, const DispersionData& d, const TwoField& sigma_refined, const Vec& f) {
    const Grid& g = sigma_refined.grid;
    const double mu = p.mu;
    Vec out = (p.c * p.c * mu) * derivative(g, f, 2);
    out = out + 2.0 * (f + mu * op_A(g, op_A(g, f)) + (mu * mu * d.tau_mu) * f);
    return out + Sigma2(p, sigma_refined, f);
}

GammaData compute_gamma(const RefinedCore& core_in, const GammaOptions& opts) {
    const double mu = core_in.mu, c = core_in.base.c;
    const ModelParams prm{c, mu};
    prm.validate(true);
    GammaData gd;
    gd.mu = mu;
    gd.c = c;
    gd.disp = solve_omega(mu, c);
    const double w = gd.disp.omega_mu;
    const Grid g = oscillatory_grid(core_in.grid(), w);
    gd.grid = g;
    const RefinedCore core = core_in.on_grid(g);
    gd.sigma_refined = core.sigma;
    gd.sigma_c = core.base.profile.values;
    gd.zeta1 = integrate_jost(mu, c, core.base.profile, 1, opts.jost);
    gd.zeta0 = integrate_jost(mu, c, core.base.profile, 0, opts.jost);
    const Vec& z1 = gd.zeta1.zeta;
    const Vec& z0 = gd.zeta0.zeta;
    const double x_max = trusted_extent(g);
    const double pref = 1.0 / (c * c * mu * w);

    LinearMap V = [&](const Vec& f) {
        Vec wv = mu * apply_Delta(g, f, w) + apply_muK(prm, gd.sigma_refined, gd.sigma_c, f);
        wv = window(g, wv, x_max);
        Vec I0 = antiderivative_from_zero(g, hadamard(wv, z0));
        Vec I1 = antiderivative_from_zero(g, hadamard(wv, z1));
        return pref * (hadamard(z0, I1) - hadamard(z1, I0));
    };

    Vec u(g.n, 0.0);
    Vec term = V(z1);
    double prev = sup_norm(term);
    int terms = 1;
    bool neumann_ok = false;
    double ratio = 0.0;
    u = term;
    while (terms < opts.max_terms) {
        if (prev < opts.increment_tol) {
            neumann_ok = true;
            break;
        }
        term = V(term);
        const double now = sup_norm(term);
        ratio = now / prev;
        ++terms;
        u = u + term;
        prev = now;
        if (terms >= 3 && ratio > opts.max_contraction) break;
    }
    if (!neumann_ok && prev < opts.increment_tol) neumann_ok = true;
    gd.neumann_terms_used = terms;
    gd.contraction = ratio;
    if (!neumann_ok) {
        if (!opts.allow_krylov_fallback)
            throw SolverError("V_mu is not a contraction on this grid (ratio " + std::to_string(ratio) +
                              "); use a smaller mu or a larger grid");
        LinearMap A = [&](const Vec& f) { return f - V(f); };
        LinearMap I = [](const Vec& f) { return f; };
        GmresResult r = gmres(A, V(z1), I, {1e-12, 60, 600});
        if (!r.converged) throw SolverError("gamma correction solve did not converge", r.rel_residual);
        u = r.x;
        gd.used_krylov = true;
    }
    gd.correction_norm = sup_norm(window(g, u, x_max));
    Vec gamma = z1 + u;
    gamma = symmetrize(g, gamma, Parity::odd);
    const SinusoidFit fit = fit_sinusoid(g, gamma, w, 0.6 * g.L, 0.9 * g.L, gd.zeta1.phi_inf);
    if (fit.residual > 1e-4 * fit.rho)
        throw ResolutionError("asymptotic sinusoid fit of gamma is poor (relative misfit " + std::to_string(fit.residual / fit.rho) + ")");
    gd.rho_inf = fit.rho;
    gd.theta_inf = fit.theta;
    gd.fit_residual = fit.residual / fit.rho;
    gd.gamma = (1.0 / fit.rho) * gamma;
    Vec res = apply_light_adjoint(prm, gd.disp, gd.sigma_refined, gd.gamma);
    gd.adjoint_residual = sup_norm(window(g, res, 0.5 * g.L));
    return gd;
}

GammaData gamma_for(double mu, const SolitaryWave& base, const GammaOptions& opts) {
    return compute_gamma(refine_core(base.c, mu, base), opts);
}

double iota(const GammaData& gd, const Vec& g) {
    const Grid& grid = gd.grid;
    if (g.size() != grid.n) throw InvalidInput("iota: sample count does not match the gamma grid");
    double total = trapz(grid, hadamard(g, gd.gamma));
    // Exponential tails closed against the asymptotic sinusoid.
    const double b = gd.sigma_c.empty() ? 0.0 : std::max(linear_decay_rate(std::abs(gd.c)), 1e-3);
    const double w = gd.disp.omega_mu;
    const std::complex<double> kern =
        std::exp(std::complex<double>(0.0, w * (grid.L + gd.theta_inf))) / std::complex<double>(b, -w);
    total += g[grid.n - 1] * kern.imag();
    total -= g[0] * kern.imag();
    return total;
}

Vec chi_mu(const GammaData& gd) {
    const Grid& g = gd.grid;
    const double mu = gd.mu, w = gd.disp.omega_mu, ups = gd.disp.upsilon_mu;
    TwoField p0(g, g.sample([&](double x) { return mu * ups * std::cos(w * x); }),
                g.sample([&](double x) { return std::sin(w * x); }));
    return (2.0 * LQ(ModelParams{gd.c, mu}, gd.sigma_refined, p0)).f2;
}

KappaData kappa(const GammaData& gd) {
    KappaData k;
    k.chi = chi_mu(gd);
    k.kappa = iota(gd, k.chi);
    const double w = gd.disp.omega_mu;
    k.sin_term = std::sin(w * gd.theta_inf);
    k.comparator = 2.0 * gd.c * gd.c * gd.mu * w * k.sin_term;
    return k;
}

McPoint evaluate_mu(double mu, const SolitaryWave& base, const GammaOptions& opts) {
    const GammaData gd = gamma_for(mu, base, opts);
    const KappaData kd = kappa(gd);
    McPoint p;
    p.mu = mu;
    p.omega = gd.disp.omega_mu;
    p.theta = gd.theta_inf;
    p.phase = p.omega * p.theta;
    p.sin_term = kd.sin_term;
    p.kappa = kd.kappa;
    p.comparator = kd.comparator;
    p.phi_inf = gd.zeta1.phi_inf;
    return p;
}

McScan scan_Mc(const SolitaryWave& base, const Vec& mu_grid, double rel_width, const GammaOptions& opts) {
    if (mu_grid.size() < 2) throw InvalidInput("mu grid needs at least two points");
    for (std::size_t i = 1; i < mu_grid.size(); ++i)
        if (!(mu_grid[i] > mu_grid[i - 1])) throw InvalidInput("mu grid must be strictly increasing");
    McScan out;
    for (double mu : mu_grid) out.points.push_back(evaluate_mu(mu, base, opts));
    for (std::size_t i = 1; i < out.points.size(); ++i) {
        if (std::abs(out.points[i].phase - out.points[i - 1].phase) >= pi / 4.0)
            throw ResolutionError("mu grid too coarse: phase changes by more than pi/4 between " +
                                  std::to_string(out.points[i - 1].mu) + " and " + std::to_string(out.points[i].mu));
    }
    auto inside = [](const McPoint& p) { return std::abs(p.sin_term) > 0.5; };
    // Bisect in log mu between a point inside and a point outside.
    auto crossing = [&](McPoint in, McPoint outp) {
        while (std::abs(std::log(in.mu / outp.mu)) > rel_width) {
            const double mid = std::sqrt(in.mu * outp.mu);
            McPoint m = evaluate_mu(mid, base, opts);
            if (inside(m))
                in = m;
            else
                outp = m;
        }
        return in.mu;
    };
    const std::size_t n = out.points.size();
    std::size_t i = 0;
    while (i < n) {
        if (!inside(out.points[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && inside(out.points[j + 1])) ++j;
        McInterval iv;
        iv.clipped_lo = (i == 0);
        iv.clipped_hi = (j + 1 == n);
        iv.lo = iv.clipped_lo ? out.points[i].mu : crossing(out.points[i], out.points[i - 1]);
        iv.hi = iv.clipped_hi ? out.points[j].mu : crossing(out.points[j], out.points[j + 1]);
        out.intervals.push_back(iv);
        i = j + 1;
    }
    return out;
}

}  // namespace dimerwave
