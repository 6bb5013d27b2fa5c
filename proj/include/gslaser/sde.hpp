#pragma once

#include "gslaser/params.hpp"
#include "gslaser/rate_solver.hpp"
#include "gslaser/rng.hpp"

#include <cstdint>
#include <vector>

namespace gslaser {

struct NoiseFlags {
    bool field_noise = true;        // zeta^A / zeta^B terms in the Q, phi and N rows
    bool carrier_shot_noise = true; // zeta^C term in the N row
};

/// Langevin diffusion coefficients at a reference point (N_ref, Q_ref).
struct DiffusionCoeffs {
    double D_QQ;     // [1/s]
    double D_phiphi; // [rad^2/s]
    double D_NN;     // [1/s]
    double D_Qphi;   // always 0
    double D_NQ;     // = -D_QQ
    double D_Nphi;   // always 0
};

/// Below this reference intensity the 1/sqrt(Q_ref) phase-noise amplitude is
/// no longer trustworthy; steps refuse to run rather than flooring silently.
inline constexpr double kQRefFloor = 1e-12;

/// The deterministic reference intensity dropped below kQRefFloor: there is
/// no field left whose phase could be tracked (deeply reverse-biased drive).
class ReferenceUnderflowError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/**
 * Diffusion coefficients with the spontaneous rate R_sp = N_ref/tau_e:
 *   D_QQ = C_sp R_sp Q_ref,  D_phiphi = C_sp R_sp / (4 Q_ref),
 *   D_NN = R_sp + D_QQ,      D_NQ = -D_QQ,  D_Qphi = D_Nphi = 0.
 * Requires Q_ref > 0, N_ref >= 0.
 */
DiffusionCoeffs diffusion(double N_ref, double Q_ref, const LaserParams& p);

/**
 * Per-grid-point constants of the stochastic step: the injected charge and
 * the three noise amplitudes (already scaled by sqrt(dt)) plus the rotation
 * set by the reference phase.
 */
struct StepCoeffs {
    double I = 0.0;         // pump current at this grid point [A]
    double amp_field = 0.0; // 2 sqrt(C_sp N_ref Q_ref / (2 tau_e)) sqrt(dt)
    double amp_phase = 0.0; // sqrt(C_sp N_ref / (2 tau_e Q_ref)) sqrt(dt)
    double amp_shot = 0.0;  // sqrt(2 N_ref / tau_e) sqrt(dt)
    double cos_ref = 1.0;
    double sin_ref = 0.0;
};

/// Throws NumericalError("reference-underflow ...") when Q_ref < kQRefFloor.
StepCoeffs step_coeffs(double N_ref, double Q_ref, double phi_ref, double I,
                       const LaserParams& p, double dt);

/// Drift (same arithmetic as det_step) plus the Langevin increments, clamped.
FieldState apply_em_step(const FieldState& s, const StepCoeffs& c, const LaserParams& p,
                         const DerivedParams& d, double dt, const NormalTriple& z,
                         const NoiseFlags& flags);

/**
 * One Euler-Maruyama step. With both flags false, or with z = (0,0,0), the
 * result is bit-identical to det_step.
 */
FieldState em_step(const FieldState& s, double N_ref, double Q_ref, double phi_ref,
                   const LaserParams& p, const DerivedParams& d, double I, double dt,
                   const NormalTriple& z, const NoiseFlags& flags);

/**
 * Precomputed stepping schedule for one period: reference-derived noise
 * amplitudes and pump samples per grid point. Building the plan once and
 * reusing it across an ensemble keeps every trajectory on the identical
 * arithmetic path as em_step.
 */
struct StepPlan {
    double dt = 0.0;
    FieldState start;
    std::vector<StepCoeffs> steps;
};

StepPlan make_step_plan(const ReferenceTrajectory& ref, const LaserParams& p,
                        const PumpWaveform& w);

/// Terminal phase phi(T_p) of one stochastic trajectory over the plan grid,
/// using the stream keyed by (master_seed, traj_index).
double simulate_phase(const StepPlan& plan, const LaserParams& p, const DerivedParams& d,
                      const NoiseFlags& flags, uint64_t master_seed, uint64_t traj_index);

/// Convenience overload that builds the plan on the fly.
double simulate_phase(const ReferenceTrajectory& ref, const LaserParams& p,
                      const DerivedParams& d, const PumpWaveform& w, const NoiseFlags& flags,
                      uint64_t master_seed, uint64_t traj_index = 0);

} // namespace gslaser
