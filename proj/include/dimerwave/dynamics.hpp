#pragma once

#include "dimerwave/lattice.hpp"
#include "dimerwave/nanopteron.hpp"

#include <vector>

namespace dimerwave {

struct SimConfig {
    long n_particles = 0; ///< even
    long first_index = 0; ///< lattice index of the leftmost particle
    double dt = 0.0;
    double t_end = 0.0;
    double mu = 0.0;
    double c = 0.0;
    int stride = 1;                ///< record every stride steps
    double sponge_fraction = 0.05; ///< damped sites at each end, as a fraction of n_particles
    double sponge_rate = 1.0;      ///< damping rate at the outermost site
    std::vector<long> probes;      ///< light sites whose rho2 is recorded
    bool snapshots = false;

    /// dt <= 0.1 sqrt(mu), even particle count, positive stride and t_end.
    void validate() const;
    /// Default step 0.01 sqrt(mu).
    static double default_dt(double mu) { return 0.01 * std::sqrt(mu); }
};

/**
 * Positions and velocities at t = 0 for the traveling profiles rho(j - x_center - c t).
 * Site j is light when even; rho is sampled at light sites, r_j = rho1 - rho2 and
 * r_{j-1} = rho1 + rho2. The leftmost particle sits at y = 0 and both end particles are at rest.
 */
LatticeState seed_from_profiles(const Grid& g, const Vec& rho1, const Vec& rho2, const Vec& drho1,
                                const Vec& drho2, const SimConfig& cfg, double x_center);
LatticeState seed_from_wave(const PhysicalProfiles& prof, const SimConfig& cfg, double x_center);

/// Strains r_j = y_{j+1} - y_j, one fewer than particles.
Vec strains(const LatticeState& s);

/// (rho1, rho2) at the interior light sites, with their lattice indices.
struct RhoSamples {
    std::vector<long> sites;
    Vec rho1, rho2;
};
RhoSamples rho_from_state(const LatticeState& s);

double total_energy(const LatticeState& s);
double total_momentum(const LatticeState& s);

/// One velocity-Verlet step. Throws SolverError when some |r_j| exceeds 10.
LatticeState step_verlet(const LatticeState& s, double dt);

struct Trajectory {
    Vec times;
    Vec energy;
    Vec momentum;
    Vec dissipated; ///< energy removed by the sponge up to each sample
    std::vector<long> probes;
    std::vector<Vec> probe_rho2; ///< one series per probe
    std::vector<LatticeState> snapshots;
    LatticeState final_state;
    double energy_drift = 0.0;   ///< max |E + D - E0| / |E0|
    double momentum_drift = 0.0; ///< max |P - P0| / max(|P0|, sum m |v|)
    long steps = 0;
};

Trajectory run(const SimConfig& cfg, const LatticeState& initial);

struct NanopteronDiagnostics {
    double profile_error = 0.0;   ///< sup over the window of |rho_sim - rho(j - c t)|
    double ripple_ahead = 0.0;    ///< sup |rho2| more than 20 sites ahead of the core
    double ripple_behind = 0.0;   ///< same, behind the core
    double ripple_frequency = 0.0; ///< dominant spatial frequency of the probe signal
    double omega_mu = 0.0;
    double frequency_error = 0.0; ///< |ripple_frequency / omega_mu - 1|
    double core_position = 0.0;
};

/**
 * Compare the final state with the profiles translated by c t_end, and read the ripple frequency
 * off the first probe once the core is more than 20 sites away from it.
 */
NanopteronDiagnostics measure_nanopteron(const Trajectory& traj, const PhysicalProfiles& prof, const SimConfig& cfg,
                                         double x_center, double omega_mu);

/**
 * Dominant angular frequency of a uniformly sampled signal: periodogram peak refined by
 * maximizing the windowed Fourier amplitude.
 */
double dominant_frequency(const Vec& samples, double dt);

/**
 * Heavy particles alone, each pair joined through a massless light particle: unit masses,
 * force F(d/2) for neighbour distance d, fixed ends.
 */
Vec heavy_chain_accelerations(const Vec& Y);

}  // namespace dimerwave
