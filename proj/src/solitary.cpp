#include "dimerwave/solitary.hpp"

#include "dimerwave/krylov.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace dimerwave {
namespace {

// Multiplier of the integrated fixed-point form sigma = M[sigma^2].
double petviashvili_symbol(double c, double k) {
    const double s2 = std::sin(k) * std::sin(k);
    if (k == 0.0) return 2.0 / (c * c - 2.0);
    return 2.0 * s2 / (c * c * k * k - 2.0 * s2);
}

Vec apply_M(double c, const Grid& g, const Vec& f) {
    return apply_multiplier(g, f, [c](double k) { return petviashvili_symbol(c, k); });
}

struct PetviashviliResult {
    Vec u;
    int iterations = 0;
    bool converged = false;
};

PetviashviliResult petviashvili(double c, const Grid& g, Vec u, const SolitaryOptions& opts) {
    PetviashviliResult out;
    const std::size_t half = g.n / 2;
    for (int it = 1; it <= opts.max_iter; ++it) {
        CVec U = rfft(u);
        CVec N = rfft(hadamard(u, u));
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k <= half; ++k) {
            const double w = (k == 0 || k == half) ? 1.0 : 2.0;
            const double m = petviashvili_symbol(c, g.wavenumber(k));
            // The fixed point has no content where sin k = 0; skip those modes.
            if (m > 1e-10) num += w * std::norm(U[k]) / m;
            den += w * std::real(std::conj(U[k]) * N[k]);
        }
        const double S = num / den;
        Vec next = (S * S) * apply_M(c, g, hadamard(u, u));
        next = symmetrize(g, next, Parity::even);
        const double change = sup_norm(next - u);
        u = std::move(next);
        out.iterations = it;
        if (!std::isfinite(change)) break;
        if (change < opts.tol && std::abs(S - 1.0) < 1e-12) {
            out.converged = true;
            break;
        }
    }
    out.u = std::move(u);
    return out;
}

// Newton-Krylov on sigma - M[sigma^2] = 0; fallback when the power iteration stalls.
bool newton_monatomic(double c, const Grid& g, Vec& u) {
    for (int it = 0; it < 30; ++it) {
        Vec F = u - apply_M(c, g, hadamard(u, u));
        if (sup_norm(F) < 1e-14) return true;
        LinearMap J = [&](const Vec& d) { return d - apply_M(c, g, 2.0 * hadamard(u, d)); };
        LinearMap I = [](const Vec& d) { return d; };
        GmresResult r = gmres(J, -1.0 * F, I, {1e-13, 80, 800});
        u = symmetrize(g, u + r.x, Parity::even);
    }
    return sup_norm(u - apply_M(c, g, hadamard(u, u))) < 1e-12;
}

void fit_tail(SolitaryWave& w) {
    const Grid& g = w.grid();
    // Last quarter of the part of [0, 3L/4] that sits above roundoff. An auto-extended domain
    // otherwise puts the window in the noise floor, and near L the periodic image adds in.
    const Vec& u = w.profile.values;
    const double floor = 1e-11 * u[g.center()];
    double x_end = 0.0;
    for (std::size_t j = g.center(); j < g.n; ++j)
        if (u[j] > floor && g.x(j) <= 0.75 * g.L) x_end = g.x(j);
    Vec xs, ys;
    for (std::size_t j = g.center(); j < g.n; ++j) {
        const double x = g.x(j);
        if (x >= 0.75 * x_end && x <= x_end && u[j] > 0.0) {
            xs.push_back(x);
            ys.push_back(std::log(w.profile.values[j]));
        }
    }
    if (xs.size() < 2) throw ResolutionError("tail fit window is empty");
    LineFit f = fit_line(xs, ys);
    w.b_c = -f.slope;
    w.tail_r2 = f.r2;
}

}  // namespace

double kdv_profile(double c, double x) {
    const double eps = std::sqrt(c * c - 2.0);
    const double s = 1.0 / std::cosh(eps * std::sqrt(3.0 / 8.0) * x);
    return 0.75 * eps * eps * s * s;
}

double linear_decay_rate(double c) {
    auto f = [c](double b) { return std::sinh(b) / b - c / sonic_speed; };
    boost::math::tools::eps_tolerance<double> tol(52);
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(f, 1e-8, 50.0, tol, iters);
    return 0.5 * (r.first + r.second);
}

double monatomic_residual(double c, const Grid& g, const Vec& s) {
    Vec rhs = s + hadamard(s, s);
    // c^2 s'' - 2 delta^2 (s + s^2); delta^2 has symbol -sin^2 k.
    Vec a = (c * c) * derivative(g, s, 2);
    Vec b = apply_multiplier(g, rhs, [](double k) { return -2.0 * std::sin(k) * std::sin(k); });
    return sup_norm(a - b);
}

SolitaryWave SolitaryWave::on_grid(const Grid& g) const {
    SolitaryWave w = *this;
    w.profile = GridFunction(g, resample(grid(), profile.values, g), Parity::even, profile.decay);
    return w;
}

SolitaryWave solve_monatomic(double c, const SolitaryOptions& opts) {
    if (!std::isfinite(c) || std::abs(c) <= sonic_speed)
        throw InvalidInput("solitary wave requires |c| > sqrt(2)");
    if (std::abs(c) > 1.6) throw InvalidInput("solitary solver is restricted to the near-sonic range |c| <= 1.6");
    const double speed = std::abs(c);
    double L = opts.L;
    for (int attempt = 0; attempt < 5; ++attempt) {
        Grid g = Grid::lattice(L, opts.per_unit);
        Vec u0 = g.sample([speed](double x) { return kdv_profile(speed, x); });
        PetviashviliResult pr = petviashvili(speed, g, u0, opts);
        SolitaryWave w;
        w.c = c;
        w.iterations = pr.iterations;
        Vec u = pr.u;
        if (!pr.converged) {
            u = u0;
            if (!newton_monatomic(speed, g, u))
                throw SolverError("solitary iteration did not converge for c = " + std::to_string(c),
                                  monatomic_residual(speed, g, u));
            w.used_newton = true;
        }
        w.profile = GridFunction(g, u, Parity::even);
        w.residual = monatomic_residual(speed, g, u);
        const double peak = u[g.center()];
        const double edge = std::max(std::abs(u[0]), std::abs(u[1]));
        if (opts.auto_extend && edge > opts.boundary_ratio * peak) {
            L *= 2.0;
            continue;
        }
        fit_tail(w);
        w.profile.decay = w.b_c;
        return w;
    }
    throw ResolutionError("solitary profile does not decay within the largest allowed domain");
}

Vec heavy_symbol_inverse(const ModelParams& p, const Grid& g, const Vec& rhs) {
    const double c2 = p.c * p.c, mu = p.mu;
    const double s2 = -c2 + 2.0 * (1.0 - mu);
    // Only the mean-zero part of the input is in the range of the operator.
    const Vec g0 = mean_zero_project(GridFunction(g, rhs)).values;
    Vec x2g(g.n);
    for (std::size_t j = 0; j < g.n; ++j) x2g[j] = g.x(j) * g.x(j) * g0[j];
    const double moment = trapz(g, x2g);
    CVec F = rfft(g0);
    const std::size_t half = g.n / 2;
    for (std::size_t k = 1; k <= half; ++k) {
        const double kk = g.wavenumber(k);
        const double s = std::sin(kk), co = std::cos(kk);
        F[k] /= -c2 * kk * kk + 2.0 * s * s * (1.0 - mu * co * co);
    }
    F[0] = (-moment / (2.0 * s2)) / g.dx();
    return irfft(F, g.n);
}

Vec apply_H(const ModelParams& p, const TwoField& sigma, const Vec& f) {
    const Grid& g = sigma.grid;
    TwoField fe1(g, f, Vec(g.n, 0.0));
    TwoField out = apply_L(p, fe1 + 2.0 * quadratic_Q(p, sigma, fe1));
    return out.f1 + (p.c * p.c) * derivative(g, f, 2);
}

RefinedCore RefinedCore::on_grid(const Grid& g) const {
    RefinedCore r = *this;
    r.base = base.on_grid(g);
    r.xi = TwoField(g, resample(grid(), xi.f1, g), resample(grid(), xi.f2, g));
    r.sigma = TwoField(g, resample(grid(), sigma.f1, g), resample(grid(), sigma.f2, g));
    return r;
}

namespace {

RefinedCore refine_from(double c, double mu, const SolitaryWave& base, TwoField h, const RefineOptions& opts) {
    ModelParams p{c, mu};
    const Grid& g = base.grid();
    const std::size_t n = g.n;
    RefinedCore out;
    out.base = base;
    out.mu = mu;
    if (mu == 0.0) {
        out.xi = TwoField::zero(g);
        out.sigma = h;
        out.residual_mod = sup_norm(residual_G_mod(p, h));
        return out;
    }
    const Vec weight2 = [&] {
        Vec w(n);
        for (std::size_t j = 0; j < n; ++j) w[j] = 1.0 / (2.0 + 4.0 * base.profile.values[j]);
        return w;
    }();
    auto split = [n, &g](const Vec& v) {
        return TwoField(g, Vec(v.begin(), v.begin() + n), Vec(v.begin() + n, v.end()));
    };
    auto join = [n](const TwoField& t) {
        Vec v(2 * n);
        std::copy(t.f1.begin(), t.f1.end(), v.begin());
        std::copy(t.f2.begin(), t.f2.end(), v.begin() + n);
        return v;
    };
    std::string trace;
    for (int it = 0; it <= opts.max_newton; ++it) {
        TwoField F = residual_G_mod(p, h);
        const double res = sup_norm(F);
        trace += " " + std::to_string(res);
        if (res < opts.tol) {
            out.residual_mod = res;
            out.newton_steps = it;
            out.sigma = h;
            out.xi = (1.0 / mu) * (h - TwoField(g, base.profile.values, Vec(n, 0.0)));
            TwoField full = residual_G(p, h);
            out.residual_second = sup_norm(full.f2);
            return out;
        }
        LinearMap J = [&](const Vec& v) {
            TwoField d = split(v);
            TwoField r = apply_L(p, d + 2.0 * quadratic_Q(p, h, d));
            r.f1 = r.f1 + (c * c) * derivative(g, d.f1, 2);
            return join(r);
        };
        LinearMap M = [&](const Vec& v) {
            TwoField d = split(v);
            return join(TwoField(g, heavy_symbol_inverse(p, g, d.f1), hadamard(weight2, d.f2)));
        };
        Vec rhs = join(F);
        for (double& v : rhs) v = -v;
        // The step only needs to beat the quadratic Newton error.
        GmresResult r = gmres(J, rhs, M, {1e-10, 80, 800});
        if (!std::isfinite(r.rel_residual)) break;
        TwoField step = split(r.x);
        h = h + step;
        h.f1 = symmetrize(g, h.f1, Parity::even);
        h.f2 = symmetrize(g, h.f2, Parity::odd);
    }
    throw SolverError("refined core Newton iteration did not converge; residual trace:" + trace);
}

}  // namespace

RefinedCore refine_core(double c, double mu, const SolitaryWave& base, const RefineOptions& opts) {
    ModelParams{c, mu}.validate();
    const Grid& g = base.grid();
    const TwoField h0(g, base.profile.values, Vec(g.n, 0.0));
    const double peak = sup_norm(base.profile.values);
    // A step that wipes out the core means Newton found the trivial state.
    auto accept = [&](const RefinedCore& r) {
        if (sup_norm(r.sigma.f1) < 0.5 * peak)
            throw SolverError("refined core collapsed towards the zero state; mu is too large for this speed");
        return r;
    };
    try {
        return accept(refine_from(c, mu, base, h0, opts));
    } catch (const SolverError&) {
        if (mu == 0.0) throw;
    }
    // Continuation in mu from the unrefined profile.
    TwoField h = h0;
    const int stages = 8;
    RefinedCore r;
    for (int k = 1; k <= stages; ++k) {
        r = refine_from(c, mu * k / stages, base, h, opts);
        h = r.sigma;
    }
    return accept(r);
}

}  // namespace dimerwave
