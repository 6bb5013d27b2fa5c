#pragma once

#include "gslaser/montecarlo.hpp"
#include "gslaser/params.hpp"
#include "gslaser/rate_solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gslaser {

/// Bias grid in SI units, resolved from the config.
struct IbRange {
    bool auto_range = true; // span [find_min_bias, I_th) when set
    double min = 0.0;       // [A], explicit mode
    double max = 0.0;       // [A], explicit mode
    double step = 0.25e-3;  // [A]
};

/**
 * The key-value config file, stored verbatim in the file's units so that
 * parse -> serialize -> parse is an exact identity. Defaults reproduce the
 * reference device; an empty file is a valid configuration. Conversions to
 * SI happen in the accessors. Schema is documented in the README.
 */
struct FileConfig {
    // laser
    double tau_ph_ps = 1.0;
    double tau_e_ns = 1.0;
    double eps = 0.3;
    double N_tr = 6.0e7;
    double N_th = 6.5e7;
    double C_sp = 1.0e-5;
    double Gamma = 0.12;
    double alpha = 6.0;
    double nu0_THz = 193.548;
    std::vector<double> chi_per_W{20.0};

    // drive
    double f_p_GHz = 2.5;
    std::vector<double> I_p_mA{12.0};
    double duty = 0.5;
    double I_b_mA = 5.0; // single-point subcommands
    bool I_b_auto = true;
    double I_b_min_mA = 0.0;
    double I_b_max_mA = 0.0;
    double I_b_step_mA = 0.25;

    // ensemble
    long long n_traj = 50000;
    uint64_t master_seed = 1;
    double dt_fs = 10.0;
    bool field_noise = true;
    bool carrier_noise = true;
    int threads = 0;
    int warmup_max_periods = 200;
    double warmup_tol = 1e-6;
    int histogram_bins = 201;

    // stability predicate
    double peak_to_mean_min = 10.0;
    double prominence_fraction = 0.5;

    // analytic subcommand
    double t_ps = 400.0;

    // outputs
    std::string output_csv;
    std::string output_svg;
    std::string output_log;
    std::string output_histogram;

    bool operator==(const FileConfig&) const = default;

    LaserParams laser() const;                 // chi = chi_per_W.front()
    LaserParams laser_with_chi(double chi) const;
    PumpWaveform waveform() const;             // I_b_mA + I_p_mA.front()
    PumpWaveform waveform_with(double I_b_amps, double I_p_amps) const;
    EnsembleConfig ensemble() const;
    PulsationCriteria pulsation() const;
    IbRange ib_range() const;
    double t_analytic() const { return t_ps * 1e-12; }
};

/// Parses `key = value` lines ('#' comments, blank lines ignored). Unknown
/// keys and malformed values raise ConfigError.
FileConfig parse_config_text(const std::string& text);

/// Reads and parses a config file; a missing file raises ConfigError.
FileConfig load_config(const std::string& path);

/// Canonical serialization; parse(serialize(c)) == c exactly.
std::string serialize_config(const FileConfig& c);

} // namespace gslaser
