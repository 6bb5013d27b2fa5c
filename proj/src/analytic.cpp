#include "gslaser/analytic.hpp"

#include <cmath>
#include <sstream>

namespace gslaser {

namespace {

void require_above_threshold(double I, const DerivedParams& d, const char* op, bool strict) {
    const bool ok = strict ? (I > d.I_th) : (I >= d.I_th);
    if (!ok) {
        std::ostringstream msg;
        msg << op << ": pump current " << I * 1e3 << " mA is below threshold ("
            << d.I_th * 1e3 << " mA); the steady-state model does not apply there";
        throw NumericalError(msg.str());
    }
}

double steady_state_intensity(const LaserParams& p, const DerivedParams& d, double I) {
    return (I - d.I_th) * p.Gamma * p.tau_ph / kElementaryCharge;
}

} // namespace

double relaxation_frequency(const LaserParams& p, const DerivedParams& d, double I) {
    require_above_threshold(I, d, "relaxation_frequency", false);
    return std::sqrt((I - d.I_th) / (d.I_th - d.I_tr) / (p.tau_ph * p.tau_e));
}

double damping_rate(const LaserParams& p, const DerivedParams& d, double I) {
    require_above_threshold(I, d, "damping_rate", true);
    const double Q = steady_state_intensity(p, d, I);
    const double N = p.N_th;
    const double dG_dN = 1.0 / (p.N_th - p.N_tr);
    const double dG_dQ = -d.chi_Q;
    return 0.5 * (1.0 / p.tau_e + dG_dN * Q / p.tau_ph + p.C_sp * N / (p.tau_e * Q)
                  - dG_dQ * Q / p.tau_ph);
}

OscillationParams oscillation_params(const LaserParams& p, const DerivedParams& d, double I) {
    OscillationParams o;
    o.omega_r = relaxation_frequency(p, d, I);
    o.gamma_d = damping_rate(p, d, I);
    o.delta = std::acos(o.omega_r / std::sqrt(o.omega_r * o.omega_r + o.gamma_d * o.gamma_d));
    return o;
}

double henry_variance(const LaserParams& p, const DerivedParams& d, double I, double t) {
    require_above_threshold(I, d, "henry_variance", true);
    if (!(t >= 0.0)) {
        throw NumericalError("henry_variance: t must be >= 0");
    }
    const OscillationParams o = oscillation_params(p, d, I);
    const double Q = steady_state_intensity(p, d, I);
    const double prefactor = p.C_sp * p.N_th / (2.0 * Q * p.tau_e);
    const double a2 = p.alpha * p.alpha;
    const double osc = a2
                       * (std::exp(-o.gamma_d * t) * std::cos(o.omega_r * t - 3.0 * o.delta)
                          - std::cos(3.0 * o.delta))
                       / (2.0 * o.gamma_d * std::cos(o.delta));
    return prefactor * ((1.0 + a2) * t - osc);
}

SweepCurve henry_sigma_curve(const LaserParams& p, const DerivedParams& d, double I_p,
                             double t, std::span<const double> I_b_grid) {
    SweepCurve curve;
    curve.label = CurveLabel{0.0, I_p, p.chi};
    curve.points.reserve(I_b_grid.size());
    for (double I_b : I_b_grid) {
        const double I = I_b + I_p;
        if (!(I > d.I_th)) {
            std::ostringstream msg;
            msg << "henry_sigma_curve: grid point I_b = " << I_b * 1e3
                << " mA puts I_b + I_p at or below threshold";
            throw NumericalError(msg.str());
        }
        SweepPoint pt;
        pt.I_b = I_b;
        pt.sigma_phi = std::sqrt(henry_variance(p, d, I, t));
        pt.stderr_ = 0.0;
        pt.passes_2pi = pt.sigma_phi > kTwoPi;
        curve.points.push_back(pt);
    }
    return curve;
}

} // namespace gslaser
