#include "dimerwave/lattice.hpp"

#include <cmath>
#include <string>

namespace dimerwave {

void ModelParams::validate(bool strict_mu) const {
    if (!std::isfinite(c) || std::abs(c) <= sonic_speed)
        throw InvalidInput("wave speed must satisfy |c| > sqrt(2), got c = " + std::to_string(c));
    if (!std::isfinite(mu) || mu < 0.0 || mu >= 1.0 || (strict_mu && mu == 0.0))
        throw InvalidInput("mass ratio must lie in (0, 1), got mu = " + std::to_string(mu));
}

Mat2 L_symbol(double mu, double k) {
    const double s = std::sin(k), co = std::cos(k);
    const std::complex<double> I(0.0, 1.0);
    Mat2 m;
    m[0][0] = 2.0 * s * s * (1.0 - mu * co * co);
    m[0][1] = -2.0 * mu * co * I * s * (1.0 - 2.0 * co * co - mu * co * co * s * s);
    m[1][0] = 2.0 * mu * I * co * s;
    m[1][1] = 2.0 * (1.0 + mu * co * co + mu * mu * co * co * s * s);
    return m;
}

Vec op_A(const Grid& g, const Vec& f) { return 0.5 * (shift_values(g, f, 1.0) + shift_values(g, f, -1.0)); }

Vec op_delta(const Grid& g, const Vec& f) { return 0.5 * (shift_values(g, f, 1.0) - shift_values(g, f, -1.0)); }

namespace {

Parity flip(Parity p) {
    if (p == Parity::even) return Parity::odd;
    if (p == Parity::odd) return Parity::even;
    return Parity::none;
}

// A delta f = (f(x+2) - f(x-2)) / 4
Vec op_Adelta(const Grid& g, const Vec& f) { return 0.25 * (shift_values(g, f, 2.0) - shift_values(g, f, -2.0)); }

}  // namespace

GridFunction shift(const GridFunction& f, double d) {
    if (std::abs(d) > 0.5 * f.grid.L) throw InvalidInput("shift exceeds L/2");
    return GridFunction(f.grid, shift_values(f.grid, f.values, d), d == 0.0 ? f.parity : Parity::none, f.decay);
}

GridFunction apply_A(const GridFunction& f) { return GridFunction(f.grid, op_A(f.grid, f.values), f.parity, f.decay); }

GridFunction apply_delta(const GridFunction& f) {
    return GridFunction(f.grid, op_delta(f.grid, f.values), flip(f.parity), f.decay);
}

TwoField apply_L(const ModelParams& p, const TwoField& h) {
    const double mu = p.mu;
    return apply_matrix_multiplier(h, [mu](double k) { return L_symbol(mu, k); });
}

TwoField apply_L_space(const ModelParams& p, const TwoField& h) {
    const Grid& g = h.grid;
    const double mu = p.mu;
    auto A = [&](const Vec& f) { return op_A(g, f); };
    auto d = [&](const Vec& f) { return op_delta(g, f); };
    // first row
    Vec dd1 = d(d(h.f1));
    Vec r1 = -2.0 * (dd1 - mu * A(A(dd1)));
    Vec ad2 = A(d(h.f2));
    Vec inner = ad2 - 2.0 * A(A(ad2)) + mu * A(A(d(d(ad2))));
    r1 = r1 - (2.0 * mu) * inner;
    // second row
    Vec r2 = (2.0 * mu) * A(d(h.f1));
    Vec aa2 = A(A(h.f2));
    r2 = r2 + 2.0 * (h.f2 + mu * aa2 - (mu * mu) * d(d(aa2)));
    return TwoField(g, r1, r2);
}

TwoField apply_L_adjoint(const ModelParams& p, const TwoField& h) {
    const double mu = p.mu;
    return apply_matrix_multiplier(h, [mu](double k) {
        Mat2 m = L_symbol(mu, k);
        Mat2 t;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) t[i][j] = std::conj(m[j][i]);
        return t;
    });
}

TwoField apply_T(const ModelParams& p, const TwoField& theta, bool inverse) {
    if (p.mu == 0.0) return theta;
    const double s = inverse ? p.mu : -p.mu;
    return TwoField(theta.grid, theta.f1 + s * op_Adelta(theta.grid, theta.f2), theta.f2);
}

TwoField apply_T_adjoint(const ModelParams& p, const TwoField& theta, bool inverse) {
    if (p.mu == 0.0) return theta;
    const double s = inverse ? -p.mu : p.mu;
    return TwoField(theta.grid, theta.f1, theta.f2 + s * op_Adelta(theta.grid, theta.f1));
}

TwoField quadratic_Q0(const TwoField& g, const TwoField& gg) {
    const std::size_t n = g.grid.n;
    Vec a(n), b(n);
    for (std::size_t j = 0; j < n; ++j) {
        a[j] = g.f1[j] * gg.f1[j] + g.f2[j] * gg.f2[j];
        b[j] = g.f1[j] * gg.f2[j] + g.f2[j] * gg.f1[j];
    }
    return TwoField(g.grid, a, b);
}

TwoField quadratic_Q(const ModelParams& p, const TwoField& g, const TwoField& gg) {
    return apply_T(p, quadratic_Q0(apply_T(p, g), apply_T(p, gg)), true);
}

TwoField LQ(const ModelParams& p, const TwoField& g, const TwoField& gg) { return apply_L(p, quadratic_Q(p, g, gg)); }

TwoField residual_G_mod(const ModelParams& p, const TwoField& h) {
    TwoField out = apply_L(p, h + quadratic_Q(p, h, h));
    out.f1 = out.f1 + (p.c * p.c) * derivative(h.grid, h.f1, 2);
    return out;
}

TwoField residual_G(const ModelParams& p, const TwoField& h) {
    TwoField out = residual_G_mod(p, h);
    if (p.mu != 0.0) out.f2 = out.f2 + (p.c * p.c * p.mu) * derivative(h.grid, h.f2, 2);
    return out;
}

TwoField off_diagonal_Theta(const ModelParams& p, const TwoField& eta) {
    const Grid& g = eta.grid;
    TwoField a(g, Vec(g.n, 0.0), eta.f2);
    TwoField b(g, eta.f1, Vec(g.n, 0.0));
    TwoField La = apply_L(p, a);
    TwoField Lb = apply_L(p, b);
    return TwoField(g, La.f1, Lb.f2);
}

std::pair<TwoField, TwoField> coefficient_Sigma_Omega(const ModelParams& p, const TwoField& sigma, const TwoField& f) {
    const Grid& g = f.grid;
    const Vec zero(g.n, 0.0);
    TwoField b1 = 2.0 * LQ(p, sigma, TwoField(g, f.f1, zero));
    TwoField b2 = 2.0 * LQ(p, sigma, TwoField(g, zero, f.f2));
    return {TwoField(g, b1.f1, b2.f2), TwoField(g, b2.f1, b1.f2)};
}

Vec Sigma1(const ModelParams& p, const TwoField& sigma, const Vec& f1) {
    const Grid& g = sigma.grid;
    return (2.0 * LQ(p, sigma, TwoField(g, f1, Vec(g.n, 0.0)))).f1;
}

Vec Sigma2(const ModelParams& p, const TwoField& sigma, const Vec& f2) {
    const Grid& g = sigma.grid;
    return (2.0 * LQ(p, sigma, TwoField(g, Vec(g.n, 0.0), f2))).f2;
}

Vec Sigma2_adjoint(const ModelParams& p, const TwoField& sigma, const Vec& f) {
    const Grid& g = sigma.grid;
    TwoField w = apply_L_adjoint(p, TwoField(g, Vec(g.n, 0.0), f));
    w = apply_T_adjoint(p, w, true);
    w = quadratic_Q0(apply_T(p, sigma), w);
    w = apply_T_adjoint(p, w, false);
    return 2.0 * w.f2;
}

Vec lattice_accelerations(const LatticeState& s) {
    const std::size_t n = s.y.size();
    Vec a(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double rl = s.y[i] - s.y[i - 1];
        const double rr = s.y[i + 1] - s.y[i];
        a[i] = (-rl - rl * rl + rr + rr * rr) / s.mass(i);
    }
    return a;
}

std::pair<Vec, Vec> rho_form_accelerations(double mu, const Vec& rho1, const Vec& rho2) {
    const std::size_t n = rho1.size();
    Vec a1(n, 0.0), a2(n, 0.0);
    Vec sq(n), pr(n);
    for (std::size_t i = 0; i < n; ++i) {
        sq[i] = rho1[i] * rho1[i] + rho2[i] * rho2[i];
        pr[i] = rho1[i] * rho2[i];
    }
    // On the even sublattice a unit shift in j is one index here, applied twice.
    auto dd = [](const Vec& f, std::size_t i) { return 0.25 * (f[i + 1] - 2.0 * f[i] + f[i - 1]); };
    auto ad = [](const Vec& f, std::size_t i) { return 0.25 * (f[i + 1] - f[i - 1]); };
    auto aa = [](const Vec& f, std::size_t i) { return 0.25 * (f[i + 1] + 2.0 * f[i] + f[i - 1]); };
    for (std::size_t i = 1; i + 1 < n; ++i) {
        a1[i] = 2.0 * dd(rho1, i) + 2.0 * ad(rho2, i) + 2.0 * dd(sq, i) + 4.0 * ad(pr, i);
        a2[i] = (-2.0 * mu * ad(rho1, i) - 2.0 * (rho2[i] + mu * aa(rho2, i)) - 2.0 * mu * ad(sq, i) -
                 4.0 * (pr[i] + mu * aa(pr, i))) /
                mu;
    }
    return {a1, a2};
}

}  // namespace dimerwave
