#pragma once

#include "gslaser/config.hpp"
#include "gslaser/curve.hpp"
#include "gslaser/montecarlo.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace gslaser {

/// One bias-current sweep campaign: every (I_p, chi) pair becomes a curve.
struct SweepSpec {
    LaserParams params;            // chi is overridden per curve by chi_list
    double f_p = 2.5e9;            // [Hz]
    double duty = 0.5;
    std::vector<double> I_p_list;  // [A]
    std::vector<double> chi_list;  // [1/W]
    IbRange I_b_range;
    EnsembleConfig ensemble;
    PulsationCriteria pulsation;
};

struct SweepResult {
    std::vector<SweepCurve> curves;
    std::vector<std::string> skip_log; // one line per skipped grid point
};

void validate(const SweepSpec& spec);

/**
 * For every (I_p, chi, I_b): settle the deterministic limit cycle, run the
 * ensemble, record sigma_phi +- stderr and the 2pi flag. Grid points that are
 * not stable pulsation are skipped and logged, never emitted as zeros.
 * Curves come back in declaration order (I_p outer, chi inner). Throws when
 * an entire curve has no stable grid point.
 */
SweepResult run_sweep(const SweepSpec& spec, std::ostream* progress = nullptr);

/// CSV with header f_p_Hz,I_p_A,chi_per_W,I_b_A,sigma_phi_rad,stderr_rad,passes_2pi
/// one row per point, 9 significant digits, newline-terminated.
std::string curves_to_csv(std::span<const SweepCurve> curves);
void emit_csv(std::span<const SweepCurve> curves, const std::string& path);

/// Inverse of curves_to_csv; consecutive rows with the same label form a curve.
std::vector<SweepCurve> parse_csv_text(const std::string& text);
std::vector<SweepCurve> parse_csv(const std::string& path);

/**
 * Self-contained SVG line plot: one polyline per curve, a dashed horizontal
 * rule at reference_level, a dashed vertical rule at the threshold current,
 * axes in mA and rad.
 */
std::string curves_to_svg(std::span<const SweepCurve> curves, double reference_level,
                          double threshold_current);
void emit_svg(std::span<const SweepCurve> curves, const std::string& path,
              double reference_level, double threshold_current);

} // namespace gslaser
