#pragma once

#include <vector>

namespace gslaser {

/// One (I_b, sigma_phi) sample of a bias sweep.
struct SweepPoint {
    double I_b = 0.0;       // [A]
    double sigma_phi = 0.0; // [rad]
    double stderr_ = 0.0;   // [rad]; 0 for analytic curves
    bool passes_2pi = false;
};

/// Curve identity: one (f_p, I_p, chi) configuration.
struct CurveLabel {
    double f_p = 0.0; // [Hz]; 0 for analytic curves (no repetition rate)
    double I_p = 0.0; // [A]
    double chi = 0.0; // [1/W]
};

struct SweepCurve {
    CurveLabel label;
    std::vector<SweepPoint> points; // ordered by I_b ascending
};

} // namespace gslaser
