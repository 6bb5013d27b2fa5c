#include "gslaser/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace gslaser {

int resolve_thread_count(const EnsembleConfig& cfg) {
    if (cfg.n_threads > 0) {
        return cfg.n_threads;
    }
    if (const char* env = std::getenv("GSLASER_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) {
            return n;
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

std::vector<double> sample_terminal_phases(const ReferenceTrajectory& ref,
                                           const LaserParams& p, const DerivedParams& d,
                                           const PumpWaveform& w, const EnsembleConfig& cfg) {
    if (cfg.n_traj < 2) {
        throw ConfigError("ensemble: n_traj must be >= 2");
    }
    if (!ref.converged) {
        throw NumericalError("ensemble: reference trajectory is not converged");
    }
    const StepPlan plan = make_step_plan(ref, p, w);
    std::vector<double> phases(static_cast<std::size_t>(cfg.n_traj));

    const int workers = std::min(resolve_thread_count(cfg), cfg.n_traj);
    auto run_block = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            phases[i] = simulate_phase(plan, p, d, cfg.flags, cfg.master_seed, i);
        }
    };
    if (workers <= 1) {
        run_block(0, phases.size());
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        const auto w_count = static_cast<std::size_t>(workers);
        const std::size_t chunk = (phases.size() + w_count - 1) / w_count;
        for (int t = 0; t < workers; ++t) {
            const std::size_t lo = static_cast<std::size_t>(t) * chunk;
            const std::size_t hi = std::min(phases.size(), lo + chunk);
            if (lo >= hi) {
                break;
            }
            pool.emplace_back(run_block, lo, hi);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    return phases;
}

EnsembleStats ensemble_stats(std::span<const double> phases, const EnsembleConfig& cfg) {
    const auto n = phases.size();
    if (n < 2) {
        throw ConfigError("ensemble_stats: need at least 2 samples");
    }

    // Index-ordered sums: the reduction order never depends on worker count.
    // Shifting by the first sample conditions the central moments (phi has a
    // large common deterministic part) and makes an all-identical ensemble
    // produce exactly zero variance.
    const double shift = phases[0];
    double sum = 0.0;
    for (double x : phases) {
        sum += x - shift;
    }
    const double mean = sum / static_cast<double>(n);

    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (double x : phases) {
        const double r = (x - shift) - mean;
        const double r2 = r * r;
        m2 += r2;
        m3 += r2 * r;
        m4 += r2 * r2;
    }

    EnsembleStats st;
    st.n_traj = static_cast<int>(n);
    st.mean_phi = shift + mean;
    const double var = m2 / static_cast<double>(n - 1);
    st.sigma_phi = std::sqrt(var);
    st.stderr_sigma = st.sigma_phi / std::sqrt(2.0 * static_cast<double>(n - 1));
    if (m2 > 0.0) {
        const double v = m2 / static_cast<double>(n); // population variance
        st.skewness = (m3 / static_cast<double>(n)) / std::pow(v, 1.5);
        st.excess_kurtosis = (m4 / static_cast<double>(n)) / (v * v) - 3.0;
    } else if (cfg.flags.field_noise || cfg.flags.carrier_shot_noise) {
        throw NumericalError("ensemble: degenerate ensemble, all samples identical with "
                             "noise enabled");
    }
    st.passes_2pi = st.sigma_phi > kTwoPi;

    const int bins = std::max(1, cfg.histogram_bins);
    st.histogram.assign(static_cast<std::size_t>(bins), 0);
    st.hist_lo = st.mean_phi - 5.0 * st.sigma_phi;
    st.hist_hi = st.mean_phi + 5.0 * st.sigma_phi;
    const double width = st.hist_hi - st.hist_lo;
    for (double x : phases) {
        std::size_t b = 0;
        if (width > 0.0) {
            const double u = (x - st.hist_lo) / width;
            const auto idx = static_cast<long long>(std::floor(u * bins));
            b = static_cast<std::size_t>(std::clamp<long long>(idx, 0, bins - 1));
        }
        ++st.histogram[b];
    }
    return st;
}

EnsembleStats run_ensemble(const ReferenceTrajectory& ref, const LaserParams& p,
                           const DerivedParams& d, const PumpWaveform& w,
                           const EnsembleConfig& cfg) {
    const std::vector<double> phases = sample_terminal_phases(ref, p, d, w, cfg);
    return ensemble_stats(phases, cfg);
}

EnsembleStats run_ensemble(const LaserParams& p, const DerivedParams& d,
                           const PumpWaveform& w, const EnsembleConfig& cfg) {
    const ReferenceTrajectory ref =
        settle_periodic(p, d, w, cfg.dt, cfg.warmup_max_periods, cfg.warmup_tol);
    return run_ensemble(ref, p, d, w, cfg);
}

GaussianityStats gaussianity(std::span<const double> samples) {
    if (samples.size() < 100) {
        throw ConfigError("gaussianity: need at least 100 samples");
    }
    const auto n = samples.size();
    const double shift = samples[0];
    double sum = 0.0;
    for (double x : samples) {
        sum += x - shift;
    }
    const double mean = sum / static_cast<double>(n);
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (double x : samples) {
        const double r = (x - shift) - mean;
        const double r2 = r * r;
        m2 += r2;
        m3 += r2 * r;
        m4 += r2 * r2;
    }
    GaussianityStats g;
    if (m2 <= 0.0) {
        g.degenerate = true;
        g.ks_distance = 1.0;
        return g;
    }
    const double v = m2 / static_cast<double>(n);
    g.skewness = (m3 / static_cast<double>(n)) / std::pow(v, 1.5);
    g.excess_kurtosis = (m4 / static_cast<double>(n)) / (v * v) - 3.0;

    // KS distance against N(mean, sd) fitted to the sample.
    const double full_mean = shift + mean;
    const double sd = std::sqrt(m2 / static_cast<double>(n - 1));
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    double dist = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = (sorted[i] - full_mean) / sd;
        const double cdf = 0.5 * std::erfc(-z / std::sqrt(2.0));
        const double hi = static_cast<double>(i + 1) / static_cast<double>(n) - cdf;
        const double lo = cdf - static_cast<double>(i) / static_cast<double>(n);
        dist = std::max({dist, hi, lo});
    }
    g.ks_distance = dist;
    return g;
}

bool randomness_criterion(const EnsembleStats& stats) {
    return stats.sigma_phi > kTwoPi;
}

} // namespace gslaser
