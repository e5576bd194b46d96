#include <doctest.h>

#include "dimerwave/lattice.hpp"

#include <cmath>
#include <random>

using namespace dimerwave;

namespace {

double sech2(double x) {
    const double s = 1.0 / std::cosh(x);
    return s * s;
}

Vec band_limited(const Grid& g, std::mt19937& rng, Parity p, int modes = 24) {
    std::normal_distribution<double> N(0.0, 1.0);
    Vec f(g.n, 0.0);
    for (int m = 1; m <= modes; ++m) {
        const double k = g.wavenumber(static_cast<std::size_t>(m)), a = N(rng) / m;
        for (std::size_t j = 0; j < g.n; ++j)
            f[j] += p == Parity::odd ? a * std::sin(k * g.x(j)) : a * std::cos(k * g.x(j));
    }
    return f;
}

/// Localized random even x odd pair.
TwoField random_pair(const Grid& g, std::mt19937& rng) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const double a = U(rng), b = U(rng), w = 1.0 + 0.5 * U(rng), s = 0.5 + 0.3 * U(rng);
    return TwoField(g, g.sample([&](double x) { return a * sech2(x / w) + 0.3 * b * std::exp(-s * x * x); }),
                    g.sample([&](double x) { return b * x * std::exp(-s * x * x) + 0.2 * a * std::tanh(x) * sech2(x); }));
}

}  // namespace

TEST_CASE("model parameter validation") {
    CHECK_NOTHROW((ModelParams{1.45, 0.01}.validate(true)));
    CHECK_THROWS_AS((ModelParams{std::sqrt(2.0), 0.01}.validate()), InvalidInput);
    CHECK_THROWS_AS((ModelParams{1.3, 0.01}.validate()), InvalidInput);
    CHECK_THROWS_AS((ModelParams{1.45, 1.0}.validate()), InvalidInput);
    CHECK_THROWS_AS((ModelParams{1.45, 0.0}.validate(true)), InvalidInput);
    CHECK_NOTHROW((ModelParams{1.45, 0.0}.validate(false)));
}

TEST_CASE("shift examples") {
    const Grid g(20.0, 320);
    std::mt19937 rng(1);
    const GridFunction f(g, band_limited(g, rng, Parity::even));
    CHECK(shift(f, 0.0).values == f.values);
    const double k = g.wavenumber(5);
    const GridFunction s(g, g.sample([k](double x) { return std::sin(k * x); }));
    CHECK(sup_norm(shift(s, 0.37).values - g.sample([k](double x) { return std::sin(k * (x + 0.37)); })) < 1e-10);
    CHECK(sup_norm(shift(shift(f, 1.0), -1.0).values - f.values) < 1e-10);
    CHECK_THROWS_AS(shift(f, 10.5), InvalidInput);
}

TEST_CASE("A and delta") {
    const Grid g(20.0, 320);
    const double k = g.wavenumber(9);
    const GridFunction c(g, g.sample([k](double x) { return std::cos(k * x); }), Parity::even);
    CHECK(sup_norm(apply_A(c).values - std::cos(k) * c.values) < 1e-13);
    CHECK(sup_norm(apply_delta(GridFunction(g, Vec(g.n, 3.0))).values) < 1e-14);
    CHECK(apply_delta(c).parity == Parity::odd);
    CHECK(apply_A(c).parity == Parity::even);

    std::mt19937 rng(2);
    for (int t = 0; t < 5; ++t) {
        const Vec f = band_limited(g, rng, Parity::none);
        const Vec lhs = f + op_delta(g, op_delta(g, f));
        CHECK(sup_norm(lhs - op_A(g, op_A(g, f))) < 1e-12);
    }
    // delta of a decaying function has zero mean
    const Vec d = op_delta(g, g.sample([](double x) { return std::exp(-(x - 0.3) * (x - 0.3)); }));
    CHECK(std::abs(trapz(g, d)) < 1e-14);
}

TEST_CASE("L_mu: diagonal at mu = 0, linear in mu, matches the symbol") {
    const Grid g(30.0, 480);
    std::mt19937 rng(3);
    const TwoField h = random_pair(g, rng);
    const TwoField l0 = apply_L({1.45, 0.0}, h);
    CHECK(sup_norm(l0.f1 + 2.0 * op_delta(g, op_delta(g, h.f1))) < 1e-13);
    CHECK(sup_norm(l0.f2 - 2.0 * h.f2) < 1e-13);

    Vec ratio;
    for (double mu : {1e-3, 1e-2, 1e-1}) {
        const TwoField d = apply_L({1.45, mu}, h) - l0;
        ratio.push_back(sup_norm(d) / (mu * sup_norm(h)));
    }
    const double K = *std::max_element(ratio.begin(), ratio.end());
    CHECK(K < 20.0);
    CHECK(*std::min_element(ratio.begin(), ratio.end()) > K / 2.0);

    // pure mode (cos kx, sin kx) = Re[(1, -i) e^{ikx}]
    const double mu = 0.03, k = g.wavenumber(17);
    const Mat2 M = L_symbol(mu, k);
    const std::complex<double> I(0.0, 1.0);
    const std::complex<double> o1 = M[0][0] - I * M[0][1], o2 = M[1][0] - I * M[1][1];
    const TwoField pm(g, g.sample([k](double x) { return std::cos(k * x); }), g.sample([k](double x) { return std::sin(k * x); }));
    const TwoField out = apply_L({1.45, mu}, pm);
    const Vec e1 = g.sample([&](double x) { return std::real(o1 * std::exp(I * k * x)); });
    const Vec e2 = g.sample([&](double x) { return std::real(o2 * std::exp(I * k * x)); });
    CHECK(sup_norm(out.f1 - e1) < 1e-10);
    CHECK(sup_norm(out.f2 - e2) < 1e-10);
    CHECK(sup_norm(apply_L_space({1.45, mu}, h) - apply_L({1.45, mu}, h)) < 1e-12);
}

TEST_CASE("L adjoint and T maps") {
    const Grid g(30.0, 480);
    std::mt19937 rng(4);
    const ModelParams p{1.45, 0.05};
    const TwoField u = random_pair(g, rng), v = random_pair(g, rng);
    const TwoField Lu = apply_L(p, u), Lsv = apply_L_adjoint(p, v);
    CHECK(dot(Lu.f1, v.f1) + dot(Lu.f2, v.f2) == doctest::Approx(dot(u.f1, Lsv.f1) + dot(u.f2, Lsv.f2)).epsilon(1e-12));

    CHECK(sup_norm(apply_T(p, apply_T(p, u), true) - u) < 1e-12);
    CHECK(sup_norm(apply_T({1.45, 0.0}, u) - u) == 0.0);
    Vec ratio;
    for (double mu : {1e-3, 1e-2, 1e-1}) ratio.push_back(sup_norm(apply_T({1.45, mu}, u) - u) / (mu * sup_norm(u)));
    CHECK(*std::max_element(ratio.begin(), ratio.end()) < 2.0);
    const TwoField Tu = apply_T(p, u), Tsv = apply_T_adjoint(p, v);
    CHECK(dot(Tu.f1, v.f1) + dot(Tu.f2, v.f2) == doctest::Approx(dot(u.f1, Tsv.f1) + dot(u.f2, Tsv.f2)).epsilon(1e-12));
}

TEST_CASE("quadratic Q") {
    const Grid g(30.0, 480);
    std::mt19937 rng(5);
    const ModelParams p{1.45, 0.02};
    const TwoField u = random_pair(g, rng), v = random_pair(g, rng);
    CHECK(sup_norm(quadratic_Q(p, u, TwoField::zero(g))) == 0.0);
    CHECK(sup_norm(quadratic_Q(p, u, v) - quadratic_Q(p, v, u)) < 1e-14);
    const TwoField f0(g, u.f1, Vec(g.n, 0.0));
    const TwoField q = quadratic_Q({1.45, 0.0}, f0, f0);
    CHECK(sup_norm(q.f1 - hadamard(u.f1, u.f1)) < 1e-15);
    CHECK(sup_norm(q.f2) == 0.0);
}

TEST_CASE("residual G: zero at zero and the parity contract") {
    const Grid g(30.0, 480);
    std::mt19937 rng(6);
    const ModelParams p{1.45, 0.04};
    CHECK(sup_norm(residual_G(p, TwoField::zero(g))) == 0.0);
    for (int t = 0; t < 25; ++t) {
        const TwoField h = random_pair(g, rng);
        const TwoField r = residual_G(p, h);
        const double nh = sup_norm(h);
        CHECK(std::abs(trapz(g, r.f1)) / (2.0 * g.L) < 1e-11 * nh);
        CHECK(parity_defect(g, r.f1, Parity::even) < 1e-11);
        CHECK(parity_defect(g, r.f2, Parity::odd) < 1e-11);
    }
}

TEST_CASE("Theta, Sigma and Omega") {
    const Grid g(30.0, 480);
    std::mt19937 rng(7);
    const ModelParams p{1.45, 0.03};
    const TwoField sigma(g, g.sample([](double x) { return 0.08 * sech2(0.2 * x); }), Vec(g.n, 0.0));
    const auto [S0, O0] = coefficient_Sigma_Omega(p, sigma, TwoField::zero(g));
    CHECK(sup_norm(S0) == 0.0);
    CHECK(sup_norm(O0) == 0.0);
    CHECK(sup_norm(off_diagonal_Theta(p, TwoField::zero(g))) == 0.0);

    const TwoField f = random_pair(g, rng);
    const auto [S, O] = coefficient_Sigma_Omega(p, sigma, f);
    CHECK(sup_norm((S + O) - 2.0 * LQ(p, sigma, f)) < 1e-12);
    CHECK(sup_norm(S.f1 - Sigma1(p, sigma, f.f1)) < 1e-14);
    CHECK(sup_norm(S.f2 - Sigma2(p, sigma, f.f2)) < 1e-14);

    // Theta is the off-diagonal part of L
    const TwoField L = apply_L(p, f);
    const TwoField Ld1 = apply_L(p, TwoField(g, f.f1, Vec(g.n, 0.0)));
    const TwoField Ld2 = apply_L(p, TwoField(g, Vec(g.n, 0.0), f.f2));
    const TwoField th = off_diagonal_Theta(p, f);
    CHECK(sup_norm(th.f1 - Ld2.f1) < 1e-14);
    CHECK(sup_norm(th.f2 - Ld1.f2) < 1e-14);
    CHECK(sup_norm((Ld1.f1 + Ld2.f1) - L.f1) < 1e-13);

    // Sigma_{0,2} is multiplication by 4 sigma
    const Vec s02 = Sigma2({1.45, 0.0}, sigma, f.f2);
    CHECK(sup_norm(s02 - 4.0 * hadamard(sigma.f1, f.f2)) < 1e-14);

    // adjoint pairing
    const Vec u = f.f2, v = random_pair(g, rng).f2;
    CHECK(dot(Sigma2(p, sigma, u), v) == doctest::Approx(dot(u, Sigma2_adjoint(p, sigma, v))).epsilon(1e-12));

    // a non-decaying input gives an output localized with sigma
    const double om = g.wavenumber(60);
    const Vec osc = g.sample([om](double x) { return std::cos(om * x); });
    const Vec out = Sigma1(p, sigma, osc);
    Vec xs, amp;
    for (double x0 = 5.0; x0 <= 27.5; x0 += 2.5) {
        double m = 0.0;
        for (std::size_t j = 0; j < g.n; ++j)
            if (std::abs(g.x(j) - x0) < 1.25) m = std::max(m, std::abs(out[j]));
        xs.push_back(x0);
        amp.push_back(m);
    }
    CHECK(xs.size() == 10);
    CHECK(amp.back() < 1e-3 * amp.front());
    CHECK(fit_line(xs, [&] { Vec l; for (double a : amp) l.push_back(std::log(a)); return l; }()).slope < -0.3);
}

TEST_CASE("rho-form and y-form accelerations agree") {
    std::mt19937 rng(8);
    std::normal_distribution<double> N(0.0, 0.05);
    LatticeState s;
    s.first_index = -20;
    s.mu = 0.07;
    s.y.resize(41);
    s.v.assign(41, 0.0);
    double y = 0.0;
    for (auto& yi : s.y) {
        yi = y;
        y += N(rng);
    }
    const Vec acc = lattice_accelerations(s);
    Vec r1, r2, a1, a2;
    for (std::size_t i = 1; i + 1 < s.y.size(); ++i) {
        if ((s.first_index + static_cast<long>(i)) % 2 != 0) continue;
        const double rr = s.y[i + 1] - s.y[i], rl = s.y[i] - s.y[i - 1];
        r1.push_back(0.5 * (rr + rl));
        r2.push_back(0.5 * (rl - rr));
        a1.push_back(0.5 * (acc[i + 1] - acc[i - 1]));
        a2.push_back(0.5 * (2.0 * acc[i] - acc[i + 1] - acc[i - 1]));
    }
    const auto [b1, b2] = rho_form_accelerations(s.mu, r1, r2);
    for (std::size_t k = 2; k + 2 < r1.size(); ++k) {
        CHECK(b1[k] == doctest::Approx(a1[k]).epsilon(1e-12));
        CHECK(b2[k] == doctest::Approx(a2[k]).epsilon(1e-12));
    }
}
