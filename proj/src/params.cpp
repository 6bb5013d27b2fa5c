#include "gslaser/params.hpp"

#include <cmath>
#include <string>

namespace gslaser {

namespace {

void check_positive(double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ConfigError(std::string("invalid parameter: ") + field + " must be > 0");
    }
}

} // namespace

void validate(const LaserParams& p) {
    check_positive(p.tau_ph, "tau_ph");
    check_positive(p.tau_e, "tau_e");
    check_positive(p.N_tr, "N_tr");
    check_positive(p.N_th, "N_th");
    check_positive(p.nu0, "nu0");
    if (!(p.N_th > p.N_tr)) {
        throw ConfigError("invalid parameter: N_th must exceed N_tr");
    }
    if (!(p.eps > 0.0 && p.eps <= 1.0)) {
        throw ConfigError("invalid parameter: eps must be in (0, 1]");
    }
    if (!(p.Gamma > 0.0 && p.Gamma <= 1.0)) {
        throw ConfigError("invalid parameter: Gamma must be in (0, 1]");
    }
    if (!(p.C_sp >= 0.0 && p.C_sp <= 1.0)) {
        throw ConfigError("invalid parameter: C_sp must be in [0, 1]");
    }
    if (!(p.chi >= 0.0) || !std::isfinite(p.chi)) {
        throw ConfigError("invalid parameter: chi must be >= 0");
    }
    if (!std::isfinite(p.alpha)) {
        throw ConfigError("invalid parameter: alpha must be finite");
    }
}

void validate(const PumpWaveform& w) {
    if (!(w.f_p > 0.0) || !std::isfinite(w.f_p)) {
        throw ConfigError("invalid parameter: f_p must be > 0");
    }
    if (!(w.duty > 0.0 && w.duty < 1.0)) {
        throw ConfigError("invalid parameter: duty must be in (0, 1)");
    }
    if (!(w.I_p >= 0.0) || !std::isfinite(w.I_p)) {
        throw ConfigError("invalid parameter: I_p must be >= 0");
    }
    if (!std::isfinite(w.I_b)) {
        throw ConfigError("invalid parameter: I_b must be finite");
    }
}

DerivedParams derive(const LaserParams& p) {
    validate(p);
    DerivedParams d;
    d.I_th = p.N_th * kElementaryCharge / p.tau_e;
    d.I_tr = p.N_tr * kElementaryCharge / p.tau_e;
    d.hbar_omega0 = kHbar * kTwoPi * p.nu0;
    d.c_P = p.eps * d.hbar_omega0 / (2.0 * p.Gamma * p.tau_ph);
    d.chi_Q = p.chi * d.c_P;
    return d;
}

double pump_current(const PumpWaveform& w, double t) {
    const double T_p = w.period();
    const double frac = std::fmod(t, T_p) / T_p;
    return (frac < w.duty) ? w.I_b + w.I_p : w.I_b;
}

double photons_to_watts(double Q, const DerivedParams& d) {
    if (!(Q >= 0.0)) {
        throw NumericalError("photons_to_watts: Q must be >= 0");
    }
    return Q * d.c_P;
}

} // namespace gslaser
