#include "dimerwave/dynamics.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

namespace dimerwave {

void SimConfig::validate() const {
    if (n_particles < 8 || n_particles % 2 != 0)
        throw InvalidInput("n_particles must be even and at least 8");
    if (!(mu > 0.0 && mu < 1.0) || !std::isfinite(c)) throw InvalidInput("simulation needs 0 < mu < 1 and finite c");
    if (!(dt > 0.0) || dt > 0.1 * std::sqrt(mu) * (1.0 + 1e-12))
        throw InvalidInput("dt must lie in (0, 0.1 sqrt(mu)], got " + std::to_string(dt));
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw InvalidInput("t_end must be finite and non-negative");
    if (stride < 1) throw InvalidInput("stride must be positive");
    if (sponge_fraction < 0.0 || sponge_fraction >= 0.5 || sponge_rate < 0.0)
        throw InvalidInput("sponge fraction must lie in [0, 0.5) with a non-negative rate");
    for (long p : probes)
        if (p <= first_index || p >= first_index + n_particles - 1 || p % 2 != 0)
            throw InvalidInput("probe " + std::to_string(p) + " is not an interior light site");
}

namespace {

long floor_mod2(long j) { return ((j % 2) + 2) % 2; }

std::size_t sponge_width(const SimConfig& cfg) {
    return static_cast<std::size_t>(std::llround(cfg.sponge_fraction * static_cast<double>(cfg.n_particles)));
}

}  // namespace

LatticeState seed_from_profiles(const Grid& g, const Vec& rho1, const Vec& rho2, const Vec& drho1,
                                const Vec& drho2, const SimConfig& cfg, double x_center) {
    if (cfg.n_particles < 2) throw InvalidInput("need at least two particles");
    const int m = g.per_unit();
    if (m <= 0) throw InvalidInput("profiles must live on a lattice grid");
    const double shift = x_center * m;
    if (std::abs(shift - std::round(shift)) > 1e-9)
        throw InvalidInput("x_center must be a multiple of the profile spacing");
    // Bond i reads the profiles at the light site i (i even) or i + 1 (i odd).
    auto node = [&](long site) -> std::size_t {
        const double idx = (static_cast<double>(site) - x_center + g.L) * m;
        const long k = std::lround(idx);
        if (k < 0 || k >= static_cast<long>(g.n))
            throw InvalidInput("particle range exceeds the profile domain at site " + std::to_string(site));
        return static_cast<std::size_t>(k);
    };
    const std::size_t n = static_cast<std::size_t>(cfg.n_particles);
    LatticeState s;
    s.first_index = cfg.first_index;
    s.mu = cfg.mu;
    s.y.assign(n, 0.0);
    s.v.assign(n, 0.0);
    double y = 0.0, v = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const long bond = cfg.first_index + static_cast<long>(i);
        const bool even = floor_mod2(bond) == 0;
        const std::size_t k = node(even ? bond : bond + 1);
        const double sgn = even ? -1.0 : 1.0;
        y += rho1[k] + sgn * rho2[k];
        v += -cfg.c * (drho1[k] + sgn * drho2[k]);
        s.y[i + 1] = y;
        s.v[i + 1] = v;
    }
    s.v[n - 1] = 0.0;
    return s;
}

LatticeState seed_from_wave(const PhysicalProfiles& prof, const SimConfig& cfg, double x_center) {
    return seed_from_profiles(prof.grid, prof.rho1(), prof.rho2(), prof.drho1(), prof.drho2(), cfg, x_center);
}

Vec strains(const LatticeState& s) {
    Vec r(s.y.size() > 0 ? s.y.size() - 1 : 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = s.y[i + 1] - s.y[i];
    return r;
}

RhoSamples rho_from_state(const LatticeState& s) {
    const Vec r = strains(s);
    RhoSamples out;
    for (std::size_t i = 1; i < r.size(); ++i) {
        const long j = s.first_index + static_cast<long>(i);
        if (floor_mod2(j) != 0) continue;
        out.sites.push_back(j);
        out.rho1.push_back(0.5 * (r[i] + r[i - 1]));
        out.rho2.push_back(0.5 * (r[i - 1] - r[i]));
    }
    return out;
}

double total_energy(const LatticeState& s) {
    double e = 0.0;
    for (std::size_t i = 0; i < s.v.size(); ++i) e += 0.5 * s.mass(i) * s.v[i] * s.v[i];
    for (double r : strains(s)) e += r * r * (0.5 + r / 3.0);
    return e;
}

double total_momentum(const LatticeState& s) {
    double p = 0.0;
    for (std::size_t i = 0; i < s.v.size(); ++i) p += s.mass(i) * s.v[i];
    return p;
}

namespace {

void check_strains(const LatticeState& s, double t) {
    for (std::size_t i = 0; i + 1 < s.y.size(); ++i) {
        const double r = s.y[i + 1] - s.y[i];
        if (!(std::abs(r) <= 10.0))
            throw SolverError("lattice integration unstable: |r| = " + std::to_string(r) + " at t = " +
                                  std::to_string(t),
                              std::abs(r));
    }
}

// Advances s in place; acc holds the accelerations of the current positions on entry and exit.
void verlet_inplace(LatticeState& s, Vec& acc, double dt) {
    const std::size_t n = s.y.size();
    for (std::size_t i = 0; i < n; ++i) {
        s.v[i] += 0.5 * dt * acc[i];
        s.y[i] += dt * s.v[i];
    }
    acc = lattice_accelerations(s);
    for (std::size_t i = 0; i < n; ++i) s.v[i] += 0.5 * dt * acc[i];
}

}  // namespace

LatticeState step_verlet(const LatticeState& s, double dt) {
    LatticeState out = s;
    Vec acc = lattice_accelerations(out);
    verlet_inplace(out, acc, dt);
    check_strains(out, dt);
    return out;
}

Trajectory run(const SimConfig& cfg, const LatticeState& initial) {
    cfg.validate();
    if (initial.y.size() != static_cast<std::size_t>(cfg.n_particles) || initial.v.size() != initial.y.size())
        throw InvalidInput("state size does not match n_particles");
    for (std::size_t i = 0; i < initial.y.size(); ++i)
        if (!std::isfinite(initial.y[i]) || !std::isfinite(initial.v[i])) throw InvalidInput("non-finite initial state");

    const std::size_t n = initial.y.size();
    const std::size_t ns = sponge_width(cfg);
    Vec damp(n, 1.0);
    for (std::size_t d = 0; d < ns; ++d) {
        const double w = static_cast<double>(ns - d) / static_cast<double>(ns);
        const double f = std::exp(-cfg.sponge_rate * w * w * cfg.dt);
        damp[d] = f;
        damp[n - 1 - d] = f;
    }

    Trajectory tr;
    tr.probes = cfg.probes;
    tr.probe_rho2.assign(cfg.probes.size(), Vec{});
    LatticeState s = initial;
    Vec acc = lattice_accelerations(s);
    const double e0 = total_energy(s);
    const double p0 = total_momentum(s);
    double pscale = std::abs(p0);
    for (std::size_t i = 0; i < n; ++i) pscale = std::max(pscale, s.mass(i) * std::abs(s.v[i]));
    pscale = std::max(pscale, 1e-300);
    double dissipated = 0.0;

    auto record = [&](double t) {
        tr.times.push_back(t);
        const double e = total_energy(s);
        const double p = total_momentum(s);
        tr.energy.push_back(e);
        tr.momentum.push_back(p);
        tr.dissipated.push_back(dissipated);
        tr.energy_drift = std::max(tr.energy_drift, std::abs(e + dissipated - e0) / std::max(std::abs(e0), 1e-300));
        tr.momentum_drift = std::max(tr.momentum_drift, std::abs(p - p0) / pscale);
        for (std::size_t q = 0; q < cfg.probes.size(); ++q) {
            const auto i = static_cast<std::size_t>(cfg.probes[q] - s.first_index);
            const double rl = s.y[i] - s.y[i - 1];
            const double rr = s.y[i + 1] - s.y[i];
            tr.probe_rho2[q].push_back(0.5 * (rl - rr));
        }
        if (cfg.snapshots) tr.snapshots.push_back(s);
    };

    const auto steps = static_cast<long>(std::llround(cfg.t_end / cfg.dt));
    record(0.0);
    for (long k = 1; k <= steps; ++k) {
        verlet_inplace(s, acc, cfg.dt);
        if (ns > 0) {
            for (std::size_t i = 0; i < n; ++i) {
                if (damp[i] == 1.0) continue;
                const double v2 = s.v[i] * s.v[i];
                dissipated += 0.5 * s.mass(i) * v2 * (1.0 - damp[i] * damp[i]);
                s.v[i] *= damp[i];
            }
        }
        const double t = static_cast<double>(k) * cfg.dt;
        if (k % cfg.stride == 0 || k == steps) {
            check_strains(s, t);
            record(t);
        }
    }
    tr.steps = steps;
    tr.final_state = s;
    return tr;
}

double dominant_frequency(const Vec& samples, double dt) {
    const std::size_t n = samples.size();
    if (n < 8 || !(dt > 0.0)) throw InvalidInput("frequency estimate needs at least 8 samples");
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= static_cast<double>(n);
    Vec w(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double hann = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n - 1));
        w[k] = hann * (samples[k] - mean);
    }
    const std::size_t pad = 8 * n;
    Vec padded(pad, 0.0);
    std::copy(w.begin(), w.end(), padded.begin());
    const CVec F = rfft(padded);
    std::size_t best = 1;
    for (std::size_t k = 1; k < F.size(); ++k)
        if (std::abs(F[k]) > std::abs(F[best])) best = k;
    const double bin = 2.0 * std::numbers::pi / (static_cast<double>(pad) * dt);
    auto amplitude = [&](double nu) {
        std::complex<double> acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) acc += w[k] * std::polar(1.0, -nu * dt * static_cast<double>(k));
        return -std::abs(acc);
    };
    const double lo = std::max(0.0, (static_cast<double>(best) - 1.0) * bin);
    const double hi = (static_cast<double>(best) + 1.0) * bin;
    return boost::math::tools::brent_find_minima(amplitude, lo, hi, 40).first;
}

NanopteronDiagnostics measure_nanopteron(const Trajectory& traj, const PhysicalProfiles& prof, const SimConfig& cfg,
                                         double x_center, double omega_mu) {
    NanopteronDiagnostics d;
    d.omega_mu = omega_mu;
    const double t_f = traj.times.empty() ? 0.0 : traj.times.back();
    d.core_position = x_center + cfg.c * t_f;

    const RhoSamples rho = rho_from_state(traj.final_state);
    const long ns = static_cast<long>(sponge_width(cfg));
    const long lo = cfg.first_index + ns + 2;
    const long hi = cfg.first_index + cfg.n_particles - 1 - ns - 2;
    const LocalInterpolant P1(prof.grid, prof.rho1());
    const LocalInterpolant P2(prof.grid, prof.rho2());
    const double margin = 6.0;
    for (std::size_t i = 0; i < rho.sites.size(); ++i) {
        const long j = rho.sites[i];
        if (j < lo || j > hi) continue;
        const double x = static_cast<double>(j) - d.core_position;
        if (x > -prof.grid.L + margin && x < prof.grid.L - margin) {
            d.profile_error = std::max(d.profile_error, std::abs(rho.rho1[i] - P1(x)));
            d.profile_error = std::max(d.profile_error, std::abs(rho.rho2[i] - P2(x)));
        }
        if (x > 20.0) d.ripple_ahead = std::max(d.ripple_ahead, std::abs(rho.rho2[i]));
        if (x < -20.0) d.ripple_behind = std::max(d.ripple_behind, std::abs(rho.rho2[i]));
    }

    d.ripple_frequency = std::numeric_limits<double>::quiet_NaN();
    d.frequency_error = std::numeric_limits<double>::infinity();
    if (!traj.probes.empty() && traj.times.size() >= 16) {
        const double probe = static_cast<double>(traj.probes[0]);
        // Longest run of samples with the core more than 20 sites away.
        std::size_t best_start = 0, best_len = 0, start = 0, len = 0;
        for (std::size_t k = 0; k < traj.times.size(); ++k) {
            const double core = x_center + cfg.c * traj.times[k];
            if (std::abs(probe - core) > 20.0) {
                if (len == 0) start = k;
                ++len;
                if (len > best_len) {
                    best_len = len;
                    best_start = start;
                }
            } else {
                len = 0;
            }
        }
        // A final partial stride breaks uniform sampling.
        const std::size_t nt = traj.times.size();
        const double dts = traj.times[1] - traj.times[0];
        if (best_start + best_len == nt && std::abs(traj.times[nt - 1] - traj.times[nt - 2] - dts) > 1e-9 * dts)
            --best_len;
        if (best_len >= 16) {
            const Vec series(traj.probe_rho2[0].begin() + static_cast<long>(best_start),
                             traj.probe_rho2[0].begin() + static_cast<long>(best_start + best_len));
            d.ripple_frequency = dominant_frequency(series, dts) / std::abs(cfg.c);
            d.frequency_error = std::abs(d.ripple_frequency / omega_mu - 1.0);
        }
    }
    return d;
}

Vec heavy_chain_accelerations(const Vec& Y) {
    const std::size_t n = Y.size();
    Vec a(n, 0.0);
    auto F = [](double d) {
        const double r = 0.5 * d;
        return r + r * r;
    };
    for (std::size_t i = 1; i + 1 < n; ++i) a[i] = F(Y[i + 1] - Y[i]) - F(Y[i] - Y[i - 1]);
    return a;
}

}  // namespace dimerwave
