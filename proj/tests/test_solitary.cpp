#include <doctest.h>

#include "dimerwave/solitary.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>

using namespace dimerwave;

namespace {

const SolitaryWave& base145() {
    static const SolitaryWave w = solve_monatomic(1.45);
    return w;
}

/// Amplitude alpha = sigma(0) and width beta = 2 alpha / int sigma of the sech^2 fit.
std::pair<double, double> sech2_fit(const SolitaryWave& w) {
    const double a = w.profile.values[w.grid().center()];
    return {a, 2.0 * a / trapz(w.grid(), w.profile.values)};
}

}  // namespace

TEST_CASE("speed limits") {
    CHECK_THROWS_AS(solve_monatomic(std::sqrt(2.0)), InvalidInput);
    CHECK_THROWS_AS(solve_monatomic(1.3), InvalidInput);
    CHECK_THROWS_AS(solve_monatomic(1.7), InvalidInput);
}

TEST_CASE("c = 1.45: residual, shape and tail") {
    const SolitaryWave& w = base145();
    const Grid& g = w.grid();
    const Vec& s = w.profile.values;
    CHECK(w.residual < 1e-10);
    CHECK(monatomic_residual(1.45, g, s) < 1e-10);
    CHECK(parity_defect(g, s, Parity::even) < 1e-12);
    for (std::size_t j = g.center(); j + 1 < g.n; ++j) {
        if (std::abs(g.x(j)) > 0.5 * g.L) break;
        CHECK(s[j] > 0.0);
        CHECK(s[j + 1] < s[j]);
    }
    CHECK(w.tail_r2 > 0.99);
    // the tail decays at the root of c^2 b^2 = 2 sinh^2 b, found here independently
    auto f = [](double b) { return 1.45 * 1.45 * b * b - 2.0 * std::sinh(b) * std::sinh(b); };
    boost::math::tools::eps_tolerance<double> tol(50);
    std::uintmax_t it = 100;
    const auto r = boost::math::tools::bisect(f, 0.1, 2.0, tol, it);
    CHECK(w.b_c == doctest::Approx(0.5 * (r.first + r.second)).epsilon(1e-3));
    CHECK(w.b_star() == doctest::Approx(0.5 * w.b_c));
}

TEST_CASE("doubled resolution changes the profile by less than 1e-9") {
    const SolitaryWave& w = base145();
    SolitaryOptions o;
    o.L = w.grid().L;
    o.per_unit = 16;
    o.auto_extend = false;
    const SolitaryWave fine = solve_monatomic(1.45, o);
    CHECK(sup_norm(fine.on_grid(w.grid()).profile.values - w.profile.values) < 1e-9);
}

TEST_CASE("long-wave limit: sech^2 fit approaches the KdV shape like eps^2") {
    // alpha / eps^2 -> 3/4 and beta / eps -> sqrt(3/8)
    Vec e2, da, db;
    for (double c : {1.43, 1.47}) {
        const auto [a, b] = sech2_fit(solve_monatomic(c));
        const double eps2 = c * c - 2.0;
        e2.push_back(eps2);
        da.push_back(std::abs(a / eps2 - 0.75));
        db.push_back(std::abs(b / std::sqrt(eps2) - std::sqrt(3.0 / 8.0)));
    }
    const double sa = std::log(da[1] / da[0]) / std::log(e2[1] / e2[0]);
    const double sb = std::log(db[1] / db[0]) / std::log(e2[1] / e2[0]);
    MESSAGE("amplitude error slope " << sa << ", width error slope " << sb);
    CHECK(sa == doctest::Approx(1.0).epsilon(0.2));
    CHECK(sb == doctest::Approx(1.0).epsilon(0.2));
    CHECK(da[0] / e2[0] < 0.1);
    CHECK(db[0] / e2[0] < 0.5);
}

TEST_CASE("refined core: mu = 0 is the unperturbed wave") {
    const RefinedCore r = refine_core(1.45, 0.0, base145());
    CHECK(sup_norm(r.xi) < 1e-14);
    CHECK(sup_norm(r.sigma.f1 - base145().profile.values) < 1e-14);
}

TEST_CASE("refined core at mu = 0.01: residual identity") {
    const double mu = 0.01, c = 1.45;
    const RefinedCore r = refine_core(c, mu, base145());
    const Grid& g = r.grid();
    CHECK(r.residual_mod < 1e-11);
    const TwoField G = residual_G({c, mu}, r.sigma);
    CHECK(sup_norm(G.f1) < 1e-11);
    const Vec expect = (c * c * mu * mu) * derivative(g, r.xi.f2, 2);
    CHECK(sup_norm(G.f2 - expect) < 1e-10);
    CHECK(parity_defect(g, r.sigma.f1, Parity::even) < 1e-12);
    CHECK(parity_defect(g, r.sigma.f2, Parity::odd) < 1e-12);
    CHECK(sup_norm(r.sigma - (TwoField(g, base145().profile.values, Vec(g.n, 0.0)) + mu * r.xi)) < 1e-14);
}

TEST_CASE("refined core sweep: xi bounded, sigma_{c,mu} - sigma_c linear in mu") {
    Vec xi, ratio;
    for (double mu : {1e-3, 3e-3, 1e-2, 3e-2}) {
        const RefinedCore r = refine_core(1.45, mu, base145());
        const double n = weighted_norm(r.xi.first(), 1, base145().b_star()) + weighted_norm(r.xi.second(), 1, base145().b_star());
        xi.push_back(n);
        ratio.push_back(sup_norm(r.sigma.f1 - base145().profile.values) / mu + sup_norm(r.sigma.f2) / mu);
    }
    const double lo = *std::min_element(xi.begin(), xi.end()), hi = *std::max_element(xi.begin(), xi.end());
    MESSAGE("||xi|| range " << lo << " .. " << hi);
    CHECK(hi < 1.5 * lo);
    CHECK(*std::max_element(ratio.begin(), ratio.end()) < 1.5 * *std::min_element(ratio.begin(), ratio.end()));
}

TEST_CASE("heavy operator and its constant-coefficient inverse") {
    const SolitaryWave& w = base145();
    const Grid& g = w.grid();
    const ModelParams p{1.45, 0.0};
    // zero potential: H is the Fourier multiplier, so the symbol inverse is exact
    const TwoField zero = TwoField::zero(g);
    const Vec f = g.sample([](double x) { return (1.0 - x * x / 2.0) * std::exp(-x * x / 4.0); });
    const Vec Hf = apply_H(p, zero, f);
    CHECK(std::abs(trapz(g, Hf)) < 1e-12);
    CHECK(sup_norm(heavy_symbol_inverse(p, g, Hf) - f) < 1e-9);
}
