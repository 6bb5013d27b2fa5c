// gslaser: gain-switched laser phase-diffusion simulator CLI.
//
// Subcommands: sweep, ensemble, trace, analytic. Each takes a key-value
// config file plus overrides; see README for the schema. Exit codes:
// 0 success, 1 config error, 2 numerical failure, 3 io error.

#include "CLI11.hpp"

#include "gslaser/analytic.hpp"
#include "gslaser/config.hpp"
#include "gslaser/montecarlo.hpp"
#include "gslaser/sweep.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

struct Overrides {
    std::optional<uint64_t> seed;
    std::optional<double> dt_fs;
    std::optional<long long> trajectories;
    std::optional<std::string> output;
    std::optional<int> threads;
    bool no_carrier_noise = false;
    bool no_field_noise = false;
};

void add_common_options(CLI::App* cmd, std::string& config_path, Overrides& ov) {
    cmd->add_option("config", config_path, "key-value config file")->required();
    cmd->add_option("--seed", ov.seed, "master seed for the trajectory streams");
    cmd->add_option("--dt", ov.dt_fs, "integration step [fs]");
    cmd->add_option("--trajectories", ov.trajectories, "trajectories per ensemble");
    cmd->add_option("--output", ov.output, "primary output path ('-' = stdout)");
    cmd->add_option("--threads", ov.threads, "worker thread count (0 = auto)");
    cmd->add_flag("--no-carrier-noise", ov.no_carrier_noise, "disable the carrier shot-noise term");
    cmd->add_flag("--no-field-noise", ov.no_field_noise, "disable the spontaneous-emission field noise");
}

gslaser::FileConfig load_with_overrides(const std::string& path, const Overrides& ov) {
    gslaser::FileConfig cfg = gslaser::load_config(path);
    if (ov.seed) {
        cfg.master_seed = *ov.seed;
    }
    if (ov.dt_fs) {
        cfg.dt_fs = *ov.dt_fs;
    }
    if (ov.trajectories) {
        cfg.n_traj = *ov.trajectories;
    }
    if (ov.threads) {
        cfg.threads = *ov.threads;
    }
    if (ov.output) {
        cfg.output_csv = *ov.output;
    }
    if (ov.no_carrier_noise) {
        cfg.carrier_noise = false;
    }
    if (ov.no_field_noise) {
        cfg.field_noise = false;
    }
    return cfg;
}

void write_text(const std::string& path, const std::string& body) {
    if (path.empty() || path == "-") {
        std::cout << body;
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw gslaser::IoError("cannot open '" + path + "' for writing");
    }
    f << body;
    if (!f.good()) {
        throw gslaser::IoError("write to '" + path + "' failed");
    }
}

std::string num9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

int run_sweep_cmd(const gslaser::FileConfig& cfg) {
    gslaser::SweepSpec spec;
    spec.params = cfg.laser();
    spec.f_p = cfg.f_p_GHz * 1e9;
    spec.duty = cfg.duty;
    spec.I_p_list = cfg.I_p_mA;
    for (auto& v : spec.I_p_list) {
        v *= 1e-3;
    }
    spec.chi_list = cfg.chi_per_W;
    spec.I_b_range = cfg.ib_range();
    spec.ensemble = cfg.ensemble();
    spec.pulsation = cfg.pulsation();

    const gslaser::SweepResult result = gslaser::run_sweep(spec, &std::cerr);
    write_text(cfg.output_csv, gslaser::curves_to_csv(result.curves));
    if (!cfg.output_svg.empty()) {
        const auto d = gslaser::derive(spec.params);
        gslaser::emit_svg(result.curves, cfg.output_svg, gslaser::kTwoPi, d.I_th);
    }
    if (!result.skip_log.empty()) {
        std::ostringstream log;
        for (const auto& line : result.skip_log) {
            log << line << "\n";
        }
        if (cfg.output_log.empty()) {
            std::cerr << log.str();
        } else {
            write_text(cfg.output_log, log.str());
        }
    }
    return 0;
}

int run_ensemble_cmd(const gslaser::FileConfig& cfg) {
    const gslaser::LaserParams p = cfg.laser();
    const gslaser::DerivedParams d = gslaser::derive(p);
    const gslaser::PumpWaveform w = cfg.waveform();
    const gslaser::EnsembleStats stats = gslaser::run_ensemble(p, d, w, cfg.ensemble());

    std::ostringstream out;
    out << "f_p_Hz,I_p_A,chi_per_W,I_b_A,n_traj,sigma_phi_rad,mean_phi_rad,stderr_rad,"
           "skewness,excess_kurtosis,passes_2pi\n";
    out << num9(w.f_p) << ',' << num9(w.I_p) << ',' << num9(p.chi) << ',' << num9(w.I_b) << ','
        << stats.n_traj << ',' << num9(stats.sigma_phi) << ',' << num9(stats.mean_phi) << ','
        << num9(stats.stderr_sigma) << ',' << num9(stats.skewness) << ','
        << num9(stats.excess_kurtosis) << ',' << (stats.passes_2pi ? '1' : '0') << '\n';
    write_text(cfg.output_csv, out.str());

    if (!cfg.output_histogram.empty()) {
        std::ostringstream hist;
        hist << "bin_lo_rad,bin_hi_rad,count\n";
        const auto bins = stats.histogram.size();
        const double width = (stats.hist_hi - stats.hist_lo) / static_cast<double>(bins);
        for (std::size_t i = 0; i < bins; ++i) {
            hist << num9(stats.hist_lo + width * static_cast<double>(i)) << ','
                 << num9(stats.hist_lo + width * static_cast<double>(i + 1)) << ','
                 << stats.histogram[i] << '\n';
        }
        write_text(cfg.output_histogram, hist.str());
    }
    return 0;
}

int run_trace_cmd(const gslaser::FileConfig& cfg) {
    const gslaser::LaserParams p = cfg.laser();
    const gslaser::DerivedParams d = gslaser::derive(p);
    const gslaser::PumpWaveform w = cfg.waveform();
    const gslaser::EnsembleConfig ens = cfg.ensemble();
    const gslaser::ReferenceTrajectory ref =
        gslaser::settle_periodic(p, d, w, ens.dt, ens.warmup_max_periods, ens.warmup_tol);

    std::ostringstream out;
    out << "t_s,N,Q,phi_rad,P_W\n";
    for (std::size_t n = 0; n < ref.size(); ++n) {
        const auto& s = ref.samples[n];
        out << num9(static_cast<double>(n) * ref.dt) << ',' << num9(s.N) << ',' << num9(s.Q)
            << ',' << num9(s.phi) << ',' << num9(gslaser::photons_to_watts(s.Q, d)) << '\n';
    }
    write_text(cfg.output_csv, out.str());
    return 0;
}

std::vector<double> analytic_grid(const gslaser::IbRange& range, double I_th, double I_p) {
    std::vector<double> grid;
    if (range.auto_range) {
        // Everything above threshold: I_b + I_p > I_th, up to I_th itself.
        for (double v = I_th - I_p + range.step; v < I_th - 1e-12 * range.step;
             v += range.step) {
            grid.push_back(v);
        }
    } else {
        for (double v = range.min; v <= range.max + 0.5 * range.step; v += range.step) {
            grid.push_back(v);
        }
    }
    return grid;
}

int run_analytic_cmd(const gslaser::FileConfig& cfg) {
    const double I_p = cfg.I_p_mA.front() * 1e-3;
    std::vector<gslaser::SweepCurve> curves;
    std::ostringstream out;
    out << "I_b_mA,sigma_phi_rad\n";
    for (double chi : cfg.chi_per_W) {
        const gslaser::LaserParams p = cfg.laser_with_chi(chi);
        const gslaser::DerivedParams d = gslaser::derive(p);
        const std::vector<double> grid = analytic_grid(cfg.ib_range(), d.I_th, I_p);
        curves.push_back(gslaser::henry_sigma_curve(p, d, I_p, cfg.t_analytic(), grid));
        out << "# chi_per_W = " << num9(chi) << "\n";
        for (const auto& pt : curves.back().points) {
            out << num9(pt.I_b * 1e3) << ',' << num9(pt.sigma_phi) << '\n';
        }
    }
    write_text(cfg.output_csv, out.str());

    if (!cfg.output_svg.empty()) {
        const auto d0 = gslaser::derive(cfg.laser());
        gslaser::emit_svg(curves, cfg.output_svg, gslaser::kTwoPi, d0.I_th);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gain-switched laser phase-diffusion simulator"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides ov;
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "bias-current sweep: sigma_phi(I_b) curve families");
    CLI::App* ensemble_cmd =
        app.add_subcommand("ensemble", "single operating point ensemble statistics");
    CLI::App* trace_cmd =
        app.add_subcommand("trace", "deterministic limit-cycle trajectory CSV");
    CLI::App* analytic_cmd =
        app.add_subcommand("analytic", "closed-form above-threshold sigma_phi(I_b) curve");
    for (CLI::App* cmd : {sweep_cmd, ensemble_cmd, trace_cmd, analytic_cmd}) {
        add_common_options(cmd, config_path, ov);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const gslaser::FileConfig cfg = load_with_overrides(config_path, ov);
        if (sweep_cmd->parsed()) {
            return run_sweep_cmd(cfg);
        }
        if (ensemble_cmd->parsed()) {
            return run_ensemble_cmd(cfg);
        }
        if (trace_cmd->parsed()) {
            return run_trace_cmd(cfg);
        }
        return run_analytic_cmd(cfg);
    } catch (const gslaser::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
