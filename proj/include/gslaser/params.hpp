#pragma once

#include "gslaser/errors.hpp"

namespace gslaser {

// CODATA exact values.
inline constexpr double kElementaryCharge = 1.602176634e-19; // [C]
inline constexpr double kHbar = 1.054571817e-34;             // [J s]
inline constexpr double kTwoPi = 6.283185307179586476925287;

/**
 * Single-mode laser parameters. Defaults are the device this code was
 * written around (a 193.548 THz DFB diode); see README for the full table.
 *
 * N_tr/N_th are dimensionless carrier counts; the linear gain is
 * G_L = (N - N_tr)/(N_th - N_tr).
 */
struct LaserParams {
    double tau_ph = 1.0e-12;  // photon lifetime [s]
    double tau_e = 1.0e-9;    // electron lifetime [s]
    double eps = 0.3;         // differential quantum output
    double N_tr = 6.0e7;      // transparency carrier number
    double N_th = 6.5e7;      // threshold carrier number
    double C_sp = 1.0e-5;     // spontaneous-emission coupling factor
    double Gamma = 0.12;      // confinement factor
    double alpha = 6.0;       // linewidth enhancement factor
    double nu0 = 193.548e12;  // central lasing frequency omega0/2pi [Hz]
    double chi = 20.0;        // gain compression factor [1/W]
};

/// Quantities computed once from LaserParams and reused everywhere.
struct DerivedParams {
    double I_th;         // threshold current N_th e / tau_e [A]
    double I_tr;         // transparency current N_tr e / tau_e [A]
    double hbar_omega0;  // photon energy [J]
    double c_P;          // photons-to-watts factor eps*hbar*omega0/(2 Gamma tau_ph) [W]
    double chi_Q;        // dimensionless gain compression chi * c_P
};

/**
 * Square-wave pump drive I(t) = I_b + I_p(t). The pulse-on phase starts at
 * t = 0 and lasts duty*T_p of each period T_p = 1/f_p.
 */
struct PumpWaveform {
    double I_b = 5.0e-3;  // bias current [A]
    double I_p = 12.0e-3; // peak-to-peak modulation current [A]
    double f_p = 2.5e9;   // pulse repetition rate [Hz]
    double duty = 0.5;    // fraction of the period with the pulse on

    double period() const { return 1.0 / f_p; }
};

/// Throws ConfigError naming the offending field.
void validate(const LaserParams& p);
void validate(const PumpWaveform& w);

/// Computes DerivedParams; validates first.
DerivedParams derive(const LaserParams& p);

/// I(t) of the square wave, exactly T_p-periodic. Requires t >= 0.
double pump_current(const PumpWaveform& w, double t);

/// Output power P = Q * c_P. Requires Q >= 0.
double photons_to_watts(double Q, const DerivedParams& d);

} // namespace gslaser
