#include <doctest.h>

#include "dimerwave/nanopteron.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <numbers>
#include <random>

using namespace dimerwave;

namespace {

const SolitaryWave& base() {
    static const SolitaryWave w = solve_monatomic(1.45);
    return w;
}

// admissible points, one per interval of the c = 1.45 scan
constexpr double mu_top = 0.0647;
constexpr double mu_mid = 0.0087;

const NanopteronSetup& setup_at(double mu) {
    static std::map<double, NanopteronSetup> cache;
    auto it = cache.find(mu);
    if (it == cache.end()) it = cache.emplace(mu, make_setup(mu, base())).first;
    return it->second;
}

const NanopteronSolution& solution_at(double mu) {
    static std::map<double, NanopteronSolution> cache;
    auto it = cache.find(mu);
    if (it == cache.end()) it = cache.emplace(mu, iterate(setup_at(mu))).first;
    return it->second;
}

Vec odd_bump(const Grid& g, double x0, double w) {
    return g.sample([=](double x) { return std::exp(-(x - x0) * (x - x0) / w) - std::exp(-(x + x0) * (x + x0) / w); });
}

}  // namespace

TEST_CASE("invert_H: round trip and mean-zero range") {
    const RefinedCore core = refine_core(1.45, 0.02, base());
    const Grid& g = core.grid();
    const ModelParams p{1.45, 0.02};
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> U(0.5, 2.0);
    for (int t = 0; t < 4; ++t) {
        const double a = U(rng), w = U(rng);
        const Vec f = g.sample([=](double x) { return a * std::exp(-x * x / (w * w)) * (1.0 + 0.3 * std::cos(x)); });
        const Vec Hf = apply_H(p, core.sigma, f);
        CHECK(std::abs(trapz(g, Hf)) < 1e-11 * sup_norm(Hf) * 2.0 * g.L);
        const Vec back = invert_H(p, core.sigma, Hf);
        CHECK(sup_norm(back - f) < 1e-9 * sup_norm(f));
    }
    CHECK_THROWS_AS(invert_H(p, core.sigma, Vec(g.n, 1.0)), InvalidInput);
}

TEST_CASE("invert_H at mu = 0 against a dense least-squares solve, N = 512") {
    SolitaryOptions o;
    o.L = 32.0;
    o.per_unit = 8;
    o.auto_extend = false;
    const SolitaryWave w = solve_monatomic(1.45, o);
    const Grid& g = w.grid();
    REQUIRE(g.n == 512);
    const TwoField sigma(g, w.profile.values, Vec(g.n, 0.0));
    const ModelParams p{1.45, 0.0};
    // even basis e_j + e_{-j}, j = 0 .. n/2; on the full grid H_0 also has the odd kernel sigma_c'.
    // Constants are in the kernel too, so the last row asks for mean zero.
    const std::size_t m = g.n / 2 + 1;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(g.n + 1, m);
    for (std::size_t j = 0; j < m; ++j) {
        Vec e(g.n, 0.0);
        e[j] = 1.0;
        e[g.mirror(j)] = 1.0;
        const Vec col = apply_H(p, sigma, e);
        for (std::size_t i = 0; i < g.n; ++i) M(static_cast<long>(i), static_cast<long>(j)) = col[i];
        M(static_cast<long>(g.n), static_cast<long>(j)) = (j == g.mirror(j)) ? 1.0 : 2.0;
    }
    // mean zero: sqrt(3 pi) - 0.5 sqrt(12 pi) = 0
    const Vec f = g.sample([](double x) { return std::exp(-x * x / 3.0) - 0.5 * std::exp(-x * x / 12.0); });
    const Vec rhs = apply_H(p, sigma, f);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(g.n + 1);
    for (std::size_t i = 0; i < g.n; ++i) b(static_cast<long>(i)) = rhs[i];
    const Eigen::VectorXd x = M.colPivHouseholderQr().solve(b);
    const Vec mine = invert_H(p, sigma, rhs);
    double dev = 0.0;
    for (std::size_t i = 0; i < m; ++i) dev = std::max(dev, std::abs(mine[i] - x(static_cast<long>(i))));
    CHECK(dev < 1e-7);
}

TEST_CASE("projection P_mu") {
    const NanopteronSetup& s = setup_at(mu_top);
    const Grid& g = s.grid();
    const Vec gg = odd_bump(g, 2.0, 1.5);
    const Vec Pg = project_P(s, gg);
    CHECK(std::abs(iota(s.gamma, Pg)) < 1e-9 * sup_norm(gg));
    CHECK(sup_norm(project_P(s, Pg) - Pg) < 1e-10 * sup_norm(gg));
    CHECK(sup_norm(project_P(s, Pg) - Pg) < 1e-12 * sup_norm(gg) + 1e-12);
    CHECK(sup_norm(project_P(s, s.kappa.chi)) < 1e-9 * sup_norm(s.kappa.chi));
}

TEST_CASE("P_mu is a large operator for data overlapping chi") {
    Vec ratio;
    for (double mu : {mu_mid, mu_top}) {
        const NanopteronSetup& s = setup_at(mu);
        // data that overlaps gamma in the core
        const Grid& g = s.grid();
        const Vec gg = hadamard(s.gamma.gamma, g.sample([](double x) { return std::exp(-x * x / 50.0); }));
        ratio.push_back(sup_norm(project_P(s, gg)) / sup_norm(gg));
    }
    MESSAGE("||P g|| / ||g||: " << ratio[0] << " (mu " << mu_mid << "), " << ratio[1] << " (mu " << mu_top << ")");
    CHECK(ratio[0] > 1.0);
    CHECK(ratio[0] > ratio[1]);
    CHECK(ratio[1] > 1.0);
}

TEST_CASE("invert_L recovers a manufactured odd solution") {
    const NanopteronSetup& s = setup_at(mu_top);
    const Grid& g = s.grid();
    const Vec f0 = g.sample([](double x) { return std::abs(x) < 8.0 ? x * std::pow(std::cos(std::numbers::pi * x / 16.0), 10) : 0.0; });
    const Vec rhs = apply_light(s.params, s.gamma.disp, s.core.sigma, f0);
    const LightSolve r = invert_L(s, rhs);
    CHECK(r.range_defect < 1e-8);
    CHECK(sup_norm(r.f - f0) < 1e-7 * sup_norm(f0));
    CHECK(parity_defect(g, r.f, Parity::odd) < 1e-10);
    // data outside the range is refused
    CHECK_THROWS(invert_L(s, s.kappa.chi));
}

TEST_CASE("right-hand side terms at the base point and along the solution") {
    const NanopteronSetup& s = setup_at(mu_top);
    const Grid& g = s.grid();
    const PeriodicWave w0 = solve_periodic(mu_top, 1.45, 0.0);
    const RhsTerms t = assemble_rhs(s, TwoField::zero(g), 0.0, w0);
    for (const Vec* v : {&t.j2, &t.j3, &t.j4, &t.j5, &t.l1, &t.l2, &t.l31, &t.l4, &t.l5}) CHECK(sup_norm(*v) == 0.0);
    const double c = 1.45, mu = mu_top;
    CHECK(sup_norm(t.l0 + (c * c * mu * mu) * derivative(g, s.core.xi.f2, 2)) < 1e-12);
    CHECK(sup_norm(t.l0) > 0.0);

    const NanopteronSolution& sol = solution_at(mu_top);
    const RhsTerms u = assemble_rhs(s, sol.eta, sol.a, sol.wave);
    const double scale = sup_norm(u.l0);
    for (const Vec* v : {&u.j2, &u.j3, &u.j4, &u.j5}) {
        CHECK(parity_defect(g, *v, Parity::even) < 1e-11);
        CHECK(std::abs(trapz(g, *v)) < 1e-11 * scale * 2.0 * g.L);
    }
    for (const Vec* v : {&u.l0, &u.l1, &u.l2, &u.l31, &u.l4, &u.l5}) CHECK(parity_defect(g, *v, Parity::odd) < 1e-11);
    CHECK(std::abs(iota(s.gamma, u.l_sum_reduced() + u.l3 - u.l31)) < 1e-9);
}

TEST_CASE("l31 is quadratic in a") {
    const NanopteronSetup& s = setup_at(mu_top);
    Vec q;
    for (double a : {1e-3, 1e-4, 1e-5}) {
        const PeriodicWave w = solve_periodic(mu_top, 1.45, a);
        q.push_back(sup_norm(assemble_rhs(s, TwoField::zero(s.grid()), a, w).l31) / (a * a));
    }
    MESSAGE("||l31|| / a^2: " << q[0] << " " << q[1] << " " << q[2]);
    CHECK(q[2] < 2.0 * q[0]);
    CHECK(q[0] < 2.0 * q[2]);
}

TEST_CASE("fixed point at mu = 0.0647") {
    const NanopteronSetup& s = setup_at(mu_top);
    const NanopteronSolution& sol = solution_at(mu_top);
    CHECK(sol.residual_full < 1e-8);
    CHECK(sol.solvability < 1e-9);
    CHECK(sol.a_consistency < 1e-10);
    CHECK(std::abs(sol.a) < std::pow(mu_top, 4));
    REQUIRE(sol.history.size() >= 2);
    for (std::size_t i = 1; i < sol.history.size(); ++i) CHECK(sol.history[i].ratio < 1.0);
    CHECK(full_residual(s, sol.eta, sol.a, sol.wave) == doctest::Approx(sol.residual_full));
    const Grid& g = s.grid();
    CHECK(parity_defect(g, sol.eta.f1, Parity::even) < 1e-12);
    CHECK(parity_defect(g, sol.eta.f2, Parity::odd) < 1e-12);
}

TEST_CASE("mu outside the admissible set is refused") {
    CHECK_THROWS_AS(iterate(make_setup(0.03, base())), InvalidInput);
}

TEST_CASE("physical profiles") {
    const NanopteronSetup& s = setup_at(mu_top);
    const NanopteronSolution& sol = solution_at(mu_top);
    const PhysicalProfiles prof = assemble_physical(s, sol);
    const Grid& g = prof.grid;
    CHECK(sup_norm(prof.sigma - s.core.base.profile.values) < 1e-15);
    // T is near the identity, so Phi has amplitude |a| (1 + O(mu))
    const double amp = std::max(sup_norm(prof.phi1), sup_norm(prof.phi2));
    CHECK(amp / std::abs(sol.a) == doctest::Approx(1.0).epsilon(2.0 * mu_top));
    CHECK(rho_form_residual(mu_top, 1.45, g, prof.rho1(), prof.rho2(), 0.5 * g.L) < 1e-7);

    // zero extension keeps the samples and evaluates the ripple everywhere
    const PhysicalProfiles big = assemble_physical(s, sol, 2.0 * g.L);
    CHECK(big.grid.L >= 2.0 * g.L);
    CHECK(sup_norm(big.phi2) == doctest::Approx(sup_norm(prof.phi2)).epsilon(1e-3));
    const Vec d = derivative(g, prof.upsilon1 + prof.sigma);
    CHECK(sup_norm(prof.drho1() - (d + prof.dphi1)) < 1e-14);

    // localized corrections shrink with mu
    const PhysicalProfiles small = assemble_physical(setup_at(mu_mid), solution_at(mu_mid));
    CHECK(sup_norm(small.upsilon1) < sup_norm(prof.upsilon1));
    CHECK(sup_norm(small.phi2) < sup_norm(prof.phi2));
}
