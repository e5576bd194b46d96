#include <doctest.h>

#include "dimerwave/dynamics.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <numbers>

using namespace dimerwave;

namespace {

const SolitaryWave& base() {
    static const SolitaryWave w = solve_monatomic(1.45);
    return w;
}

SimConfig config(double mu, long n, double dt, double t_end) {
    SimConfig cfg;
    cfg.mu = mu;
    cfg.c = 1.45;
    cfg.n_particles = n;
    cfg.first_index = -n / 2;
    cfg.dt = dt;
    cfg.t_end = t_end;
    cfg.sponge_fraction = 0.0;
    return cfg;
}

// (sigma_c, 0): the wave without any mu correction, zero-extended to |x| <= 160
LatticeState unrefined_seed(const SimConfig& cfg, double x0) {
    const Grid g(160.0, static_cast<std::size_t>(320 * base().grid().per_unit()));
    const Vec s = extend_localized(base().grid(), base().profile.values, g);
    const Vec zero(g.n, 0.0);
    return seed_from_profiles(g, s, zero, derivative(g, s), zero, cfg, x0);
}

double state_distance(const LatticeState& a, const LatticeState& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.y.size(); ++i) d = std::max({d, std::abs(a.y[i] - b.y[i]), std::abs(a.v[i] - b.v[i])});
    return d;
}

}  // namespace

TEST_CASE("equilibrium stays fixed") {
    SimConfig cfg = config(0.05, 40, 0.01, 5.0);
    LatticeState s;
    s.first_index = cfg.first_index;
    s.mu = cfg.mu;
    s.y.assign(40, 0.0);
    s.v.assign(40, 0.0);
    const Trajectory tr = run(cfg, s);
    CHECK(sup_norm(tr.final_state.y) == 0.0);
    CHECK(sup_norm(tr.final_state.v) == 0.0);
    CHECK(tr.energy_drift == 0.0);
}

TEST_CASE("light mass between fixed heavy neighbours oscillates with period 2 pi sqrt(mu/2)") {
    // the quadratic terms cancel for this configuration, so the oscillator is exactly linear
    for (double mu : {0.01, 0.1}) {
        LatticeState s;
        s.first_index = -1;
        s.mu = mu;
        s.y = {0.0, 0.05, 0.0};
        s.v = {0.0, 0.0, 0.0};
        const double T = 2.0 * std::numbers::pi * std::sqrt(mu / 2.0);
        const double dt = 1e-3 * std::sqrt(mu);
        Vec crossings;
        double prev = s.y[1];
        double t = 0.0;
        while (crossings.size() < 6) {
            s = step_verlet(s, dt);
            t += dt;
            if (prev > 0.0 && s.y[1] <= 0.0) crossings.push_back(t - dt * s.y[1] / (s.y[1] - prev));
            prev = s.y[1];
        }
        const double measured = (crossings.back() - crossings.front()) / 5.0;
        CHECK(measured == doctest::Approx(T).epsilon(0.01));
        CHECK(s.y[0] == 0.0);
        CHECK(s.y[2] == 0.0);
    }
}

TEST_CASE("energy drift at dt = 1e-3 sqrt(mu) over t = 10") {
    const double mu = 0.05;
    const SimConfig cfg = config(mu, 160, 1e-3 * std::sqrt(mu), 10.0);
    const Trajectory tr = run(cfg, unrefined_seed(cfg, -10.0));
    MESSAGE("relative energy drift " << tr.energy_drift);
    CHECK(tr.energy_drift < 1e-8);
    CHECK(tr.dissipated.back() == 0.0);
}

TEST_CASE("momentum is conserved for a localized disturbance") {
    const double mu = 0.05;
    SimConfig cfg = config(mu, 200, SimConfig::default_dt(mu), 10.0);
    LatticeState s = unrefined_seed(cfg, -10.0);
    // extra kick on a few light sites
    for (std::size_t i = 96; i < 104; i += 2) s.v[i] += 0.01;
    const Trajectory tr = run(cfg, s);
    MESSAGE("momentum drift " << tr.momentum_drift);
    CHECK(tr.momentum_drift < 1e-10);
}

TEST_CASE("time reversal") {
    const double mu = 0.05;
    const SimConfig cfg = config(mu, 120, SimConfig::default_dt(mu), 0.0);
    const LatticeState s0 = unrefined_seed(cfg, 0.0);
    LatticeState s = s0;
    for (int k = 0; k < 4000; ++k) s = step_verlet(s, cfg.dt);
    CHECK(state_distance(s, s0) > 1e-2);
    for (double& v : s.v) v = -v;
    for (int k = 0; k < 4000; ++k) s = step_verlet(s, cfg.dt);
    for (double& v : s.v) v = -v;
    CHECK(state_distance(s, s0) < 1e-8);
}

TEST_CASE("seed round trip and zero profiles") {
    const Grid g(40.0, 640);
    REQUIRE(g.per_unit() == 8);
    const Vec r1 = g.sample([](double x) { return 0.3 / std::cosh(0.4 * x); });
    const Vec r2 = g.sample([](double x) { return 0.02 * std::sin(3.0 * x) * std::exp(-x * x / 50.0); });
    SimConfig cfg = config(0.05, 50, 0.01, 1.0);
    const double x0 = 3.5;
    const LatticeState s = seed_from_profiles(g, r1, r2, derivative(g, r1), derivative(g, r2), cfg, x0);
    const RhoSamples rho = rho_from_state(s);
    REQUIRE(rho.sites.size() > 20);
    const LocalInterpolant P1(g, r1), P2(g, r2);
    for (std::size_t i = 0; i < rho.sites.size(); ++i) {
        const double x = static_cast<double>(rho.sites[i]) - x0;
        CHECK(std::abs(rho.rho1[i] - P1(x)) < 1e-10);
        CHECK(std::abs(rho.rho2[i] - P2(x)) < 1e-10);
    }
    // the leftmost particle is the anchor
    CHECK(s.y[0] == 0.0);
    CHECK(s.v[0] == 0.0);
    CHECK(s.v.back() == 0.0);

    const Vec zero(g.n, 0.0);
    const LatticeState z = seed_from_profiles(g, zero, zero, zero, zero, cfg, x0);
    CHECK(sup_norm(z.y) == 0.0);
    CHECK(sup_norm(z.v) == 0.0);

    cfg.n_particles = 200;
    cfg.first_index = -100;
    CHECK_THROWS_AS(seed_from_profiles(g, r1, r2, r1, r2, cfg, x0), InvalidInput);
    cfg.n_particles = 50;
    cfg.first_index = -25;
    CHECK_THROWS_AS(seed_from_profiles(g, r1, r2, r1, r2, cfg, 0.01), InvalidInput);
}

TEST_CASE("heavy chain seeded with sigma_c travels at speed c") {
    // heavy particle k sits at site 2k + 1; the light site 2k + 2 between k and k + 1 carries sigma_c
    const double c = 1.45, x0 = -20.0, t_end = 20.0, dt = 0.005;
    const Grid& g = base().grid();
    const LocalInterpolant S(g, base().profile.values);
    const LocalInterpolant dS(g, derivative(g, base().profile.values));
    const int K = 60;
    Vec Y(2 * K, 0.0), V(2 * K, 0.0);
    auto light_site = [&](int k) { return 2.0 * (k - K) + 2.0; };
    for (int k = 0; k + 1 < 2 * K; ++k) {
        Y[k + 1] = Y[k] + 2.0 * S(light_site(k) - x0);
        V[k + 1] = V[k] - 2.0 * c * dS(light_site(k) - x0);
    }
    V.back() = 0.0;
    Vec A = heavy_chain_accelerations(Y);
    const auto steps = static_cast<long>(std::llround(t_end / dt));
    for (long n = 0; n < steps; ++n) {
        for (std::size_t i = 0; i < Y.size(); ++i) {
            V[i] += 0.5 * dt * A[i];
            Y[i] += dt * V[i];
        }
        A = heavy_chain_accelerations(Y);
        for (std::size_t i = 0; i < Y.size(); ++i) V[i] += 0.5 * dt * A[i];
    }
    // cross-correlate the final strain with the seed profile
    auto corr = [&](double shift) {
        double acc = 0.0;
        for (int k = 0; k + 1 < 2 * K; ++k) acc += 0.5 * (Y[k + 1] - Y[k]) * S(light_site(k) - x0 - shift);
        return -acc;
    };
    const double shift = boost::math::tools::brent_find_minima(corr, 0.5 * c * t_end, 1.5 * c * t_end, 40).first;
    MESSAGE("displacement " << shift << " vs c t = " << c * t_end);
    CHECK(shift == doctest::Approx(c * t_end).epsilon(0.01));
}

TEST_CASE("rho-form and y-form accelerations agree along a trajectory") {
    const double mu = 0.05;
    SimConfig cfg = config(mu, 120, SimConfig::default_dt(mu), 5.0);
    cfg.stride = 500;
    cfg.snapshots = true;
    const Trajectory tr = run(cfg, unrefined_seed(cfg, -10.0));
    REQUIRE(tr.snapshots.size() >= 3);
    for (const LatticeState& s : tr.snapshots) {
        const Vec acc = lattice_accelerations(s);
        const RhoSamples rho = rho_from_state(s);
        const auto [b1, b2] = rho_form_accelerations(mu, rho.rho1, rho.rho2);
        double dev = 0.0, scale = 0.0;
        for (std::size_t k = 2; k + 2 < rho.sites.size(); ++k) {
            const auto i = static_cast<std::size_t>(rho.sites[k] - s.first_index);
            const double a1 = 0.5 * (acc[i + 1] - acc[i - 1]);
            const double a2 = 0.5 * (2.0 * acc[i] - acc[i + 1] - acc[i - 1]);
            dev = std::max({dev, std::abs(b1[k] - a1), std::abs(b2[k] - a2)});
            scale = std::max({scale, std::abs(a1), std::abs(a2)});
        }
        CHECK(dev < 1e-12 * std::max(scale, 1.0));
    }
}

TEST_CASE("seeded nanopteron: profile error, ripple frequency and less radiation than the unrefined seed") {
    const double mu = 0.0647, c = 1.45;
    const NanopteronSetup s = make_setup(mu, base());
    const NanopteronSolution sol = iterate(s);
    const PhysicalProfiles prof = assemble_physical(s, sol, 240.0);
    SimConfig cfg = config(mu, 400, SimConfig::default_dt(mu), 50.0 / c);
    cfg.first_index = -200;
    cfg.sponge_fraction = 0.05;
    cfg.probes = {-56};
    const double x0 = -30.0;
    const Trajectory tr = run(cfg, seed_from_wave(prof, cfg, x0));
    const NanopteronDiagnostics d = measure_nanopteron(tr, prof, cfg, x0, sol.wave.omega_mu);
    MESSAGE("profile error " << d.profile_error << ", frequency error " << d.frequency_error << ", ripple behind "
                             << d.ripple_behind);
    CHECK(d.profile_error < 1e-3);
    CHECK(d.frequency_error < 0.02);
    CHECK(tr.energy_drift < 1e-8);
    CHECK(d.core_position == doctest::Approx(x0 + c * tr.times.back()));

    const Vec zero(prof.grid.n, 0.0);
    const LatticeState raw =
        seed_from_profiles(prof.grid, prof.sigma, zero, derivative(prof.grid, prof.sigma), zero, cfg, x0);
    const NanopteronDiagnostics u = measure_nanopteron(run(cfg, raw), prof, cfg, x0, sol.wave.omega_mu);
    MESSAGE("unrefined seed: ripple behind " << u.ripple_behind << ", profile error " << u.profile_error);
    CHECK(u.ripple_behind > d.ripple_behind);
    CHECK(u.profile_error > d.profile_error);
}

TEST_CASE("configuration and state errors") {
    const double mu = 0.05;
    SimConfig ok = config(mu, 40, SimConfig::default_dt(mu), 1.0);
    CHECK_NOTHROW(ok.validate());
    SimConfig bad = ok;
    bad.dt = 0.2 * std::sqrt(mu);
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    bad = ok;
    bad.n_particles = 41;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    bad = ok;
    bad.stride = 0;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    bad = ok;
    bad.probes = {1};
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    bad = ok;
    bad.mu = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);

    LatticeState s;
    s.first_index = ok.first_index;
    s.mu = mu;
    s.y.assign(38, 0.0);
    s.v.assign(38, 0.0);
    CHECK_THROWS_AS(run(ok, s), InvalidInput);
    s.y.assign(40, 0.0);
    s.v.assign(40, 0.0);
    s.v[7] = std::nan("");
    CHECK_THROWS_AS(run(ok, s), InvalidInput);
    s.v[7] = 0.0;
    for (std::size_t i = 20; i < 40; ++i) s.y[i] = 20.0;
    CHECK_THROWS_AS(step_verlet(s, ok.dt), SolverError);
}
