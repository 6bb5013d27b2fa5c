#include "gslaser/rate_solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace gslaser {

FieldState det_step(const FieldState& s, const LaserParams& p, const DerivedParams& d,
                    double I, double dt) {
    if (!(dt > 0.0)) {
        throw NumericalError("det_step: dt must be > 0");
    }
    return clamp_physical(drift_update(s, p, d, I, dt));
}

namespace {

/// Grid size for one period; requires dt to divide T_p to 1e-9 relative.
std::size_t period_step_count(double T_p, double dt) {
    const double ratio = T_p / dt;
    const auto count = static_cast<std::size_t>(std::llround(ratio));
    if (count < 2 || std::abs(static_cast<double>(count) * dt - T_p) > 1e-9 * T_p) {
        std::ostringstream msg;
        msg << "integration step " << dt << " s does not divide the period " << T_p << " s";
        throw ConfigError(msg.str());
    }
    return count;
}

} // namespace

ReferenceTrajectory settle_periodic(const LaserParams& p, const DerivedParams& d,
                                    const PumpWaveform& w, double dt, int max_periods,
                                    double tol) {
    validate(w);
    if (!(dt > 0.0) || dt > p.tau_ph / 10.0) {
        throw ConfigError("settle_periodic: dt must be in (0, tau_ph/10]");
    }
    const double T_p = w.period();
    const std::size_t steps = period_step_count(T_p, dt);
    const double dt_grid = T_p / static_cast<double>(steps); // snap to an exact cover

    // Pump current per grid index, identical for every period.
    std::vector<double> current(steps);
    for (std::size_t n = 0; n < steps; ++n) {
        current[n] = pump_current(w, static_cast<double>(n) * dt_grid);
    }

    ReferenceTrajectory ref;
    ref.dt = dt_grid;
    ref.samples.resize(steps);

    std::vector<FieldState> prev(steps);
    FieldState s; // cold start (0, 0, 0)

    for (int period = 0; period < max_periods; ++period) {
        std::swap(prev, ref.samples);
        double q_max = 0.0;
        for (std::size_t n = 0; n < steps; ++n) {
            ref.samples[n] = s;
            q_max = std::max(q_max, s.Q);
            s = det_step(s, p, d, current[n], dt_grid);
        }
        ref.period_end = s;
        ref.warmup_periods = period;

        if (period == 0) {
            continue;
        }
        double dn_max = 0.0;
        double dq_max = 0.0;
        for (std::size_t n = 0; n < steps; ++n) {
            dn_max = std::max(dn_max, std::abs(ref.samples[n].N - prev[n].N));
            dq_max = std::max(dq_max, std::abs(ref.samples[n].Q - prev[n].Q));
        }
        const double q_scale = std::max(q_max, std::numeric_limits<double>::min());
        if (dn_max / p.N_th < tol && dq_max / q_scale < tol) {
            ref.converged = true;
            break;
        }
    }

    if (!ref.converged) {
        // Re-base phi to 0 at the period start for the error payload.
        const double phi0 = ref.samples.front().phi;
        for (auto& sample : ref.samples) {
            sample.phi -= phi0;
        }
        ref.period_end.phi -= phi0;
        std::ostringstream msg;
        msg << "settle_periodic: no limit-cycle convergence after " << max_periods
            << " periods (tol " << tol << ")";
        throw NoConvergenceError(msg.str(), std::move(ref));
    }

    // One more pass with phi restarted at exactly 0, so the stored phases are
    // bit-identical to what re-integration from the period start produces.
    FieldState cur{s.N, s.Q, 0.0};
    for (std::size_t n = 0; n < steps; ++n) {
        ref.samples[n] = cur;
        cur = det_step(cur, p, d, current[n], dt_grid);
    }
    ref.period_end = cur;
    return ref;
}

int count_significant_maxima(std::span<const FieldState> samples, double prominence_fraction) {
    const std::size_t n = samples.size();
    if (n < 3) {
        return 0;
    }
    auto q = [&](std::size_t i) { return samples[i % n].Q; };

    // Local maxima on the circular signal.
    std::vector<std::size_t> peaks;
    double global_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        global_max = std::max(global_max, q(i));
        if (q(i) > q((i + n - 1) % n) && q(i) >= q(i + 1)) {
            peaks.push_back(i);
        }
    }
    if (global_max <= 0.0 || peaks.empty()) {
        return 0;
    }

    const double threshold = prominence_fraction * global_max;
    int significant = 0;
    for (std::size_t peak : peaks) {
        const double h = q(peak);
        // Walk outward to the nearest strictly higher sample on each side,
        // tracking the lowest valley; the key saddle is the higher of the two
        // valley floors. A side with no higher terrain contributes -inf.
        double key_saddle = -std::numeric_limits<double>::infinity();
        bool bounded = false;
        for (int dir : {-1, +1}) {
            double valley = h;
            for (std::size_t step = 1; step < n; ++step) {
                const auto offset = static_cast<long long>(dir) * static_cast<long long>(step);
                const auto j = static_cast<std::size_t>(
                    (static_cast<long long>(peak) + static_cast<long long>(n) + offset) %
                    static_cast<long long>(n));
                const double v = samples[j].Q;
                if (v > h) {
                    key_saddle = std::max(key_saddle, valley);
                    bounded = true;
                    break;
                }
                valley = std::min(valley, v);
            }
        }
        const double prominence = bounded ? h - key_saddle : h;
        if (prominence >= threshold) {
            ++significant;
        }
    }
    return significant;
}

bool is_stable_pulsation(const ReferenceTrajectory& ref, const PulsationCriteria& crit) {
    if (!ref.converged || ref.samples.empty()) {
        return false;
    }
    double peak = 0.0;
    double sum = 0.0;
    for (const auto& s : ref.samples) {
        peak = std::max(peak, s.Q);
        sum += s.Q;
    }
    const double mean = sum / static_cast<double>(ref.samples.size());
    if (!(peak > 0.0) || !(mean > 0.0) || peak < crit.peak_to_mean_min * mean) {
        return false;
    }
    return count_significant_maxima(ref.samples, crit.prominence_fraction) == 1;
}

double find_min_bias(const LaserParams& p, const DerivedParams& d, double I_p, double f_p,
                     double dt, std::span<const double> I_b_grid,
                     const PulsationCriteria& crit, int max_periods, double tol,
                     double duty) {
    if (I_b_grid.empty()) {
        throw ConfigError("find_min_bias: empty bias grid");
    }
    for (std::size_t i = 1; i < I_b_grid.size(); ++i) {
        if (!(I_b_grid[i] > I_b_grid[i - 1])) {
            throw ConfigError("find_min_bias: bias grid must be strictly ascending");
        }
    }
    for (double I_b : I_b_grid) {
        PumpWaveform w{I_b, I_p, f_p, duty};
        try {
            const ReferenceTrajectory ref = settle_periodic(p, d, w, dt, max_periods, tol);
            if (is_stable_pulsation(ref, crit)) {
                return I_b;
            }
        } catch (const NoConvergenceError&) {
            // not stable at this bias; keep scanning
        }
    }
    throw NumericalError("find_min_bias: no grid point gives stable pulsation");
}

} // namespace gslaser
