#pragma once

#include "gslaser/curve.hpp"
#include "gslaser/params.hpp"

#include <span>

namespace gslaser {

/// Small-signal oscillation parameters at a constant drive above threshold.
struct OscillationParams {
    double omega_r; // relaxation angular frequency [rad/s]
    double gamma_d; // damping rate [1/s]
    double delta;   // phase offset with cos(delta) = omega_r/sqrt(omega_r^2+gamma_d^2)
};

/// omega_r = sqrt((I - I_th)/(I_th - I_tr) / (tau_ph tau_e)). Requires I >= I_th.
double relaxation_frequency(const LaserParams& p, const DerivedParams& d, double I);

/**
 * Relaxation-oscillation damping rate at the above-threshold steady state
 * N = N_th, Q = (I - I_th) Gamma tau_ph / e:
 *   gamma_d = (1/2)(1/tau_e + dG/dN Q/tau_ph + C_sp N/(tau_e Q) - dG/dQ Q/tau_ph)
 * with dG/dN = 1/(N_th - N_tr) and dG/dQ = -chi_Q. Requires I > I_th.
 */
double damping_rate(const LaserParams& p, const DerivedParams& d, double I);

OscillationParams oscillation_params(const LaserParams& p, const DerivedParams& d, double I);

/**
 * Steady-state phase-diffusion variance above threshold:
 *   <dphi^2>(t) = (C_sp N / (2 Q tau_e)) { (1 + a^2) t
 *       - a^2 [exp(-gamma_d t) cos(omega_r t - 3 delta) - cos(3 delta)]
 *             / (2 gamma_d cos(delta)) }.
 * Valid only for I > I_th; a guard refuses anything at or below threshold.
 */
double henry_variance(const LaserParams& p, const DerivedParams& d, double I, double t);

/// sigma_phi(I_b) = sqrt(henry_variance at I = I_b + I_p) at fixed t, over the
/// given bias grid. Every I_b + I_p must be above threshold.
SweepCurve henry_sigma_curve(const LaserParams& p, const DerivedParams& d, double I_p,
                             double t, std::span<const double> I_b_grid);

} // namespace gslaser
