#pragma once

#include "gslaser/params.hpp"
#include "gslaser/rate_solver.hpp"
#include "gslaser/sde.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace gslaser {

struct EnsembleConfig {
    int n_traj = 50000;
    uint64_t master_seed = 1;
    double dt = 1.0e-14; // integration step [s]
    NoiseFlags flags;
    int n_threads = 0; // 0 = GSLASER_THREADS env var, else hardware concurrency
    int warmup_max_periods = 200;
    double warmup_tol = 1e-6;
    int histogram_bins = 201;
};

struct EnsembleStats {
    double sigma_phi = 0.0;       // sample standard deviation of phi(T_p) [rad]
    double mean_phi = 0.0;        // [rad], diagnostics only
    double stderr_sigma = 0.0;    // sigma/sqrt(2(n-1)) [rad]
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    std::vector<uint64_t> histogram; // bins spanning mean +- 5 sigma; edges clamp
    double hist_lo = 0.0;
    double hist_hi = 0.0;
    bool passes_2pi = false; // sigma_phi > 2 pi
    int n_traj = 0;
};

/// Worker count: cfg value if > 0, else GSLASER_THREADS, else hardware.
int resolve_thread_count(const EnsembleConfig& cfg);

/// Terminal phases of cfg.n_traj independent trajectories over one period,
/// trajectory i seeded by (cfg.master_seed, i). Output is index-ordered and
/// bit-identical for any worker count.
std::vector<double> sample_terminal_phases(const ReferenceTrajectory& ref,
                                           const LaserParams& p, const DerivedParams& d,
                                           const PumpWaveform& w, const EnsembleConfig& cfg);

/// Aggregates statistics with a fixed, index-ordered reduction.
EnsembleStats ensemble_stats(std::span<const double> phases, const EnsembleConfig& cfg);

/// Settles the deterministic limit cycle, fans out the ensemble, aggregates.
EnsembleStats run_ensemble(const LaserParams& p, const DerivedParams& d,
                           const PumpWaveform& w, const EnsembleConfig& cfg);

/// Same, reusing an already-settled reference trajectory.
EnsembleStats run_ensemble(const ReferenceTrajectory& ref, const LaserParams& p,
                           const DerivedParams& d, const PumpWaveform& w,
                           const EnsembleConfig& cfg);

struct GaussianityStats {
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double ks_distance = 0.0; // Kolmogorov-Smirnov distance vs the fitted normal
    bool degenerate = false;  // all samples identical (zero variance)
};

/// Moment statistics plus KS distance against the fitted normal. Needs >= 100
/// samples.
GaussianityStats gaussianity(std::span<const double> samples);

/// True iff sigma_phi > 2 pi (strict). With the interferometric phase
/// difference identified with the one-period phase incursion, this is the
/// condition under which the interference phase is effectively uniform.
bool randomness_criterion(const EnsembleStats& stats);

} // namespace gslaser
