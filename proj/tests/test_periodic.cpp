#include <doctest.h>

#include "dimerwave/periodic.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace dimerwave;

TEST_CASE("a = 0 is the kernel") {
    const double mu = 0.01, c = 1.5;
    const PeriodicWave w = solve_periodic(mu, c, 0.0);
    const DispersionData d = solve_omega(mu, c);
    CHECK(w.omega_a == d.omega_mu);
    CHECK(w.xi() == 0.0);
    CHECK(w.coeffs1[1] == doctest::Approx(d.upsilon_mu).epsilon(1e-12));
    CHECK(w.coeffs2[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sup_norm(w.psi1()) < 1e-15);
    CHECK(sup_norm(w.psi2()) < 1e-15);
    for (int k = 2; k <= w.n_modes; ++k) {
        CHECK(w.coeffs1[k] == 0.0);
        CHECK(w.coeffs2[k] == 0.0);
    }
    // p(x) = (mu upsilon cos, sin)(omega x)
    for (double x : {0.0, 0.13, 1.7}) {
        const auto p = w.p(x);
        CHECK(p[0] == doctest::Approx(mu * d.upsilon_mu * std::cos(d.omega_mu * x)).epsilon(1e-12));
        CHECK(p[1] == doctest::Approx(std::sin(d.omega_mu * x)).epsilon(1e-12));
    }
}

TEST_CASE("kernel pair") {
    for (double mu : {1e-3, 1e-2, 1e-1}) {
        const KernelPair k = kernel_pair(mu, 1.45);
        CHECK(k.kernel_residual < 1e-10);
        CHECK(k.adjoint_residual < 1e-10);
        CHECK(std::abs(k.upsilon) <= 1.0);
        CHECK(std::abs(k.z) <= 1.0);
        // Gamma nu = 0 at mode 1, and nu* annihilates the range
        const RealMat2 B = mode_block(mu, 1.45, k.omega, 1);
        CHECK(std::abs(B[0][0] * k.upsilon + B[0][1]) < 1e-10);
        CHECK(std::abs(B[1][0] * k.upsilon + B[1][1]) < 1e-10);
        CHECK(std::abs(B[0][0] * k.z + B[1][0]) < 1e-10);
        CHECK(std::abs(B[0][1] * k.z + B[1][1]) < 1e-10);
        for (int m = 2; m <= 40; ++m) {
            const double b = block_neumann_bound(mu, 1.45, k.omega, m);
            CHECK(b <= 3.0 / (2.0 * m * m));
        }
    }
}

TEST_CASE("coercivity of the mode-wise solve is uniform in mu") {
    std::mt19937 rng(11);
    std::normal_distribution<double> N(0.0, 1.0);
    Vec worst;
    for (double mu : {1e-3, 1e-2, 1e-1}) {
        double m = 0.0;
        for (int t = 0; t < 10; ++t) {
            Vec g1(17, 0.0), g2(17, 0.0);
            for (int k = 1; k <= 16; ++k) {
                g1[k] = N(rng) / (k * k);
                g2[k] = N(rng) / (k * k);
            }
            // drop the nu* component at k = 1
            const KernelPair kp = kernel_pair(mu, 1.45);
            const double proj = (kp.z * g1[1] + g2[1]) / (kp.z * kp.z + 1.0);
            g1[1] -= proj * kp.z;
            g2[1] -= proj;
            const auto [p1, p2] = solve_gamma(mu, 1.45, g1, g2);
            double ng = 0.0, np = 0.0;
            for (int k = 1; k <= 16; ++k) {
                ng += g1[k] * g1[k] + g2[k] * g2[k];
                np += (1.0 + k * k) * (1.0 + k * k) * (p1[k] * p1[k] + p2[k] * p2[k]);
            }
            m = std::max(m, std::sqrt(np / ng));
        }
        worst.push_back(m);
    }
    MESSAGE("coercivity constants " << worst[0] << " " << worst[1] << " " << worst[2]);
    CHECK(*std::max_element(worst.begin(), worst.end()) < 3.0 * *std::min_element(worst.begin(), worst.end()));
}

TEST_CASE("a_max/2 at mu = 0.01, c = 1.5: residual on the period grid and on a seven-period box") {
    const AmaxResult am = find_a_max(0.01, 1.5);
    CHECK(am.a_max > 0.0);
    const PeriodicWave w = solve_periodic(0.01, 1.5, 0.5 * am.a_max);
    CHECK(w.residual < 1e-9);
    CHECK(w.tail < 1e-12);
    CHECK(sup_norm(periodic_residual(w, 256)) < 1e-9);
    // G(a p) from lattice_core on a box holding exactly seven periods
    const Grid g(7.0 * std::numbers::pi / w.omega_a, 7 * 64);
    const TwoField h = w.a * w.sample(g);
    const TwoField G = residual_G({1.5, 0.01}, h);
    CHECK(sup_norm(G) < 1e-9);
    CHECK(parity_defect(g, h.f1, Parity::even) < 1e-12);
    CHECK(parity_defect(g, h.f2, Parity::odd) < 1e-12);
}

TEST_CASE("Lipschitz dependence on a") {
    const double mu = 0.01, c = 1.5;
    const double amax = find_a_max(mu, c).a_max;
    std::mt19937 rng(12);
    std::uniform_real_distribution<double> U(0.0, 0.5 * amax);
    Vec ratios;
    for (int t = 0; t < 10; ++t) {
        const double a = U(rng), b = U(rng);
        const PeriodicWave wa = solve_periodic(mu, c, a), wb = solve_periodic(mu, c, b);
        double dc = std::abs(wa.omega_a - wb.omega_a);
        const std::size_t K = std::min(wa.coeffs1.size(), wb.coeffs1.size());
        for (std::size_t k = 1; k < K; ++k)
            dc = std::max({dc, std::abs(wa.coeffs1[k] - wb.coeffs1[k]), std::abs(wa.coeffs2[k] - wb.coeffs2[k])});
        ratios.push_back(dc / std::abs(a - b));
    }
    const double K = *std::max_element(ratios.begin(), ratios.end());
    MESSAGE("Lipschitz constant over 10 pairs: " << K);
    CHECK(K < 1.0);
}

TEST_CASE("coefficients decay, halving a halves the wave") {
    const PeriodicWave w = solve_periodic(0.01, 1.45, 2.0);
    const PeriodicWave h = solve_periodic(0.01, 1.45, 1.0);
    for (int k = 1; k + 2 <= w.n_modes; k += 2) {
        const double ak = std::abs(w.coeffs2[k]) + std::abs(w.coeffs1[k]);
        const double ak2 = std::abs(w.coeffs2[k + 2]) + std::abs(w.coeffs1[k + 2]);
        if (ak2 > 1e-14) CHECK(ak2 < ak);
    }
    CHECK((w.a * w.coeffs2[1]) / (h.a * h.coeffs2[1]) == doctest::Approx(2.0).epsilon(0.05));
    const Grid g = w.period_grid();
    CHECK(std::abs(trapz(g, w.sample(g).f1)) < 1e-14);
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(solve_periodic(0.01, 1.45, 40.0), SolverError);
    PeriodicOptions o;
    o.auto_modes = false;
    o.tail_ratio = 1e-40;
    CHECK_THROWS_AS(solve_periodic(0.01, 1.45, 2.0, o), ResolutionError);
    CHECK_THROWS_AS(solve_periodic(0.0, 1.45, 1.0), InvalidInput);
}
