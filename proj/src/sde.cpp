#include "gslaser/sde.hpp"

#include <cmath>
#include <sstream>

namespace gslaser {

DiffusionCoeffs diffusion(double N_ref, double Q_ref, const LaserParams& p) {
    if (!(Q_ref > 0.0)) {
        throw NumericalError("diffusion: Q_ref must be > 0");
    }
    if (!(N_ref >= 0.0)) {
        throw NumericalError("diffusion: N_ref must be >= 0");
    }
    const double r_sp = N_ref / p.tau_e;
    DiffusionCoeffs c;
    c.D_QQ = p.C_sp * r_sp * Q_ref;
    c.D_phiphi = p.C_sp * r_sp / (4.0 * Q_ref);
    c.D_NN = r_sp + c.D_QQ;
    c.D_Qphi = 0.0;
    c.D_NQ = -c.D_QQ;
    c.D_Nphi = 0.0;
    return c;
}

StepCoeffs step_coeffs(double N_ref, double Q_ref, double phi_ref, double I,
                       const LaserParams& p, double dt) {
    if (!(dt > 0.0)) {
        throw NumericalError("step_coeffs: dt must be > 0");
    }
    if (!(Q_ref >= kQRefFloor)) {
        std::ostringstream msg;
        msg << "reference-underflow: Q_ref = " << Q_ref << " below floor " << kQRefFloor;
        throw ReferenceUnderflowError(msg.str());
    }
    const double sqrt_dt = std::sqrt(dt);
    StepCoeffs c;
    c.I = I;
    c.amp_field = 2.0 * std::sqrt(p.C_sp * N_ref * Q_ref / (2.0 * p.tau_e)) * sqrt_dt;
    c.amp_phase = std::sqrt(p.C_sp * N_ref / (2.0 * p.tau_e * Q_ref)) * sqrt_dt;
    c.amp_shot = std::sqrt(2.0 * N_ref / p.tau_e) * sqrt_dt;
    c.cos_ref = std::cos(phi_ref);
    c.sin_ref = std::sin(phi_ref);
    return c;
}

FieldState apply_em_step(const FieldState& s, const StepCoeffs& c, const LaserParams& p,
                         const DerivedParams& d, double dt, const NormalTriple& z,
                         const NoiseFlags& flags) {
    FieldState out = drift_update(s, p, d, c.I, dt);
    double f_q = 0.0;
    double f_phi = 0.0;
    double f_n = 0.0;
    if (flags.field_noise) {
        const double xi_q = z.a * c.cos_ref + z.b * c.sin_ref;
        const double xi_phi = z.b * c.cos_ref - z.a * c.sin_ref;
        f_q = c.amp_field * xi_q;
        f_phi = c.amp_phase * xi_phi;
        f_n = -f_q;
    }
    if (flags.carrier_shot_noise) {
        f_n += c.amp_shot * z.c;
    }
    out.Q += f_q;
    out.phi += f_phi;
    out.N += f_n;
    return clamp_physical(out);
}

FieldState em_step(const FieldState& s, double N_ref, double Q_ref, double phi_ref,
                   const LaserParams& p, const DerivedParams& d, double I, double dt,
                   const NormalTriple& z, const NoiseFlags& flags) {
    return apply_em_step(s, step_coeffs(N_ref, Q_ref, phi_ref, I, p, dt), p, d, dt, z, flags);
}

StepPlan make_step_plan(const ReferenceTrajectory& ref, const LaserParams& p,
                        const PumpWaveform& w) {
    if (ref.samples.empty()) {
        throw NumericalError("make_step_plan: empty reference trajectory");
    }
    StepPlan plan;
    plan.dt = ref.dt;
    plan.start = ref.samples.front();
    plan.steps.reserve(ref.size());
    for (std::size_t n = 0; n < ref.size(); ++n) {
        const FieldState& r = ref.samples[n];
        const double t = static_cast<double>(n) * ref.dt;
        plan.steps.push_back(step_coeffs(r.N, r.Q, r.phi, pump_current(w, t), p, ref.dt));
    }
    return plan;
}

double simulate_phase(const StepPlan& plan, const LaserParams& p, const DerivedParams& d,
                      const NoiseFlags& flags, uint64_t master_seed, uint64_t traj_index) {
    GaussianStream stream(master_seed, traj_index);
    FieldState s = plan.start;
    for (const StepCoeffs& c : plan.steps) {
        s = apply_em_step(s, c, p, d, plan.dt, stream.triple(), flags);
    }
    return s.phi;
}

double simulate_phase(const ReferenceTrajectory& ref, const LaserParams& p,
                      const DerivedParams& d, const PumpWaveform& w, const NoiseFlags& flags,
                      uint64_t master_seed, uint64_t traj_index) {
    if (!ref.converged) {
        throw NumericalError("simulate_phase: reference trajectory is not converged");
    }
    return simulate_phase(make_step_plan(ref, p, w), p, d, flags, master_seed, traj_index);
}

} // namespace gslaser
