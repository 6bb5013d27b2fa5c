#pragma once

#include "gslaser/params.hpp"

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace gslaser {

/// Instantaneous laser state. phi is the unwrapped optical phase.
struct FieldState {
    double N = 0.0;   // carrier number
    double Q = 0.0;   // normalized field intensity (photon-count equivalent)
    double phi = 0.0; // optical phase [rad]
};

/**
 * One deterministic limit-cycle period sampled on the integration grid:
 * samples[n] is the state at t = n*dt for n = 0 .. size()-1, starting at
 * the pump rising edge, with phi re-based to 0 at the period start.
 * period_end is the state at t = T_p (the first sample of the next period).
 */
struct ReferenceTrajectory {
    double dt = 0.0;
    std::vector<FieldState> samples;
    FieldState period_end;
    bool converged = false;
    int warmup_periods = 0;

    std::size_t size() const { return samples.size(); }
};

/// Thrown when settle_periodic runs out of periods; carries the last period.
class NoConvergenceError : public NumericalError {
public:
    NoConvergenceError(const std::string& msg, ReferenceTrajectory last)
        : NumericalError(msg), last_period(std::move(last)) {}

    ReferenceTrajectory last_period;
};

/**
 * Unclamped forward-Euler drift update shared by the deterministic and
 * stochastic steppers. Linear gain G_L = (N - N_tr)/(N_th - N_tr); the
 * intensity and carrier equations use the saturated gain G = G_L(1 - chi_Q Q)
 * while the phase equation uses G_L.
 */
inline FieldState drift_update(const FieldState& s, const LaserParams& p,
                               const DerivedParams& d, double I, double dt) {
    const double g_lin = (s.N - p.N_tr) / (p.N_th - p.N_tr);
    const double g_sat = g_lin * (1.0 - d.chi_Q * s.Q);
    FieldState out;
    out.Q = s.Q + (g_sat - 1.0) * (s.Q / p.tau_ph) * dt + p.C_sp * (s.N / p.tau_e) * dt;
    out.phi = s.phi + 0.5 * (p.alpha / p.tau_ph) * (g_lin - 1.0) * dt;
    out.N = s.N + (I / kElementaryCharge) * dt - (s.N / p.tau_e) * dt
            - s.Q * g_sat / (p.Gamma * p.tau_ph) * dt;
    return out;
}

inline FieldState clamp_physical(FieldState s) {
    s.N = std::max(0.0, s.N);
    s.Q = std::max(0.0, s.Q);
    return s;
}

/// One noiseless forward-Euler step, clamped to N >= 0, Q >= 0.
FieldState det_step(const FieldState& s, const LaserParams& p, const DerivedParams& d,
                    double I, double dt);

/**
 * Integrates the deterministic equations from a cold start (0, 0, 0) period
 * by period until two consecutive periods agree: max_t |N_k - N_{k-1}|/N_th
 * and max_t |Q_k - Q_{k-1}|/max(Q_k) both below tol. Throws
 * NoConvergenceError (with the last period attached) after max_periods.
 */
ReferenceTrajectory settle_periodic(const LaserParams& p, const DerivedParams& d,
                                    const PumpWaveform& w, double dt,
                                    int max_periods = 200, double tol = 1e-6);

/**
 * Stable-pulsation predicate knobs. A period counts as stable pulsation when
 * the settle converged, the peak intensity is at least peak_to_mean_min times
 * the period mean, and exactly one intensity maximum has topographic
 * prominence of at least prominence_fraction times the global peak (ripples
 * riding on a pulse or plateau do not count as extra pulses).
 */
struct PulsationCriteria {
    double peak_to_mean_min = 10.0;
    double prominence_fraction = 0.5;
};

/// Number of intensity maxima per period with significant prominence.
int count_significant_maxima(std::span<const FieldState> samples, double prominence_fraction);

bool is_stable_pulsation(const ReferenceTrajectory& ref, const PulsationCriteria& crit = {});

/**
 * Smallest I_b on the ascending grid whose converged limit cycle is a stable
 * pulsation. Grid points where the settle fails to converge are treated as
 * unstable. Throws NumericalError when no grid point qualifies.
 */
double find_min_bias(const LaserParams& p, const DerivedParams& d, double I_p, double f_p,
                     double dt, std::span<const double> I_b_grid,
                     const PulsationCriteria& crit = {}, int max_periods = 200,
                     double tol = 1e-6, double duty = 0.5);

} // namespace gslaser
