#include "gslaser/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace gslaser {

namespace {

constexpr const char* kCsvHeader =
    "f_p_Hz,I_p_A,chi_per_W,I_b_A,sigma_phi_rad,stderr_rad,passes_2pi";

std::string num9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::vector<double> arange(double lo, double hi_exclusive, double step) {
    std::vector<double> grid;
    for (int k = 0;; ++k) {
        const double v = lo + static_cast<double>(k) * step;
        if (v >= hi_exclusive - 1e-12 * step) {
            break;
        }
        grid.push_back(v);
    }
    return grid;
}

std::string curve_tag(double f_p, double I_p, double chi) {
    std::ostringstream os;
    os << "f_p=" << f_p * 1e-9 << " GHz, I_p=" << I_p * 1e3 << " mA, chi=" << chi << " /W";
    return os.str();
}

} // namespace

void validate(const SweepSpec& spec) {
    validate(spec.params);
    if (spec.I_p_list.empty()) {
        throw ConfigError("sweep: I_p list must not be empty");
    }
    if (spec.chi_list.empty()) {
        throw ConfigError("sweep: chi list must not be empty");
    }
    if (!(spec.f_p > 0.0)) {
        throw ConfigError("sweep: f_p must be > 0");
    }
    if (!(spec.I_b_range.step > 0.0)) {
        throw ConfigError("sweep: I_b step must be > 0");
    }
    if (!spec.I_b_range.auto_range && !(spec.I_b_range.max >= spec.I_b_range.min)) {
        throw ConfigError("sweep: I_b range max must be >= min");
    }
    if (spec.ensemble.n_traj < 2) {
        throw ConfigError("sweep: n_traj must be >= 2");
    }
}

SweepResult run_sweep(const SweepSpec& spec, std::ostream* progress) {
    validate(spec);
    SweepResult result;

    for (double I_p : spec.I_p_list) {
        for (double chi : spec.chi_list) {
            LaserParams params = spec.params;
            params.chi = chi;
            const DerivedParams d = derive(params);

            std::vector<double> grid;
            if (spec.I_b_range.auto_range) {
                const double step = spec.I_b_range.step;
                const std::vector<double> scan = arange(-I_p + step, d.I_th, step);
                const double lower = find_min_bias(params, d, I_p, spec.f_p,
                                                   spec.ensemble.dt, scan, spec.pulsation,
                                                   spec.ensemble.warmup_max_periods,
                                                   spec.ensemble.warmup_tol, spec.duty);
                grid = arange(lower, d.I_th, step);
            } else {
                grid = arange(spec.I_b_range.min,
                              spec.I_b_range.max + 0.5 * spec.I_b_range.step,
                              spec.I_b_range.step);
            }

            SweepCurve curve;
            curve.label = CurveLabel{spec.f_p, I_p, chi};
            for (double I_b : grid) {
                const PumpWaveform w{I_b, I_p, spec.f_p, spec.duty};
                ReferenceTrajectory ref;
                try {
                    ref = settle_periodic(params, d, w, spec.ensemble.dt,
                                          spec.ensemble.warmup_max_periods,
                                          spec.ensemble.warmup_tol);
                } catch (const NoConvergenceError&) {
                    result.skip_log.push_back(curve_tag(spec.f_p, I_p, chi) + ", I_b=" +
                                              num9(I_b * 1e3) +
                                              " mA: skipped, no limit-cycle convergence");
                    continue;
                }
                if (!is_stable_pulsation(ref, spec.pulsation)) {
                    result.skip_log.push_back(curve_tag(spec.f_p, I_p, chi) + ", I_b=" +
                                              num9(I_b * 1e3) +
                                              " mA: skipped, not stable pulsation");
                    continue;
                }
                EnsembleStats stats;
                try {
                    stats = run_ensemble(ref, params, d, w, spec.ensemble);
                } catch (const ReferenceUnderflowError&) {
                    result.skip_log.push_back(
                        curve_tag(spec.f_p, I_p, chi) + ", I_b=" + num9(I_b * 1e3) +
                        " mA: skipped, reference intensity underflow (no usable field)");
                    continue;
                }
                SweepPoint pt;
                pt.I_b = I_b;
                pt.sigma_phi = stats.sigma_phi;
                pt.stderr_ = stats.stderr_sigma;
                pt.passes_2pi = stats.passes_2pi;
                curve.points.push_back(pt);
                if (progress != nullptr) {
                    *progress << curve_tag(spec.f_p, I_p, chi) << ", I_b=" << I_b * 1e3
                              << " mA: sigma_phi=" << stats.sigma_phi << " rad\n";
                }
            }
            if (curve.points.empty()) {
                throw NumericalError("sweep: no stable grid point for curve " +
                                     curve_tag(spec.f_p, I_p, chi));
            }
            result.curves.push_back(std::move(curve));
        }
    }
    return result;
}

std::string curves_to_csv(std::span<const SweepCurve> curves) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const SweepCurve& c : curves) {
        for (const SweepPoint& pt : c.points) {
            out += num9(c.label.f_p);
            out += ',';
            out += num9(c.label.I_p);
            out += ',';
            out += num9(c.label.chi);
            out += ',';
            out += num9(pt.I_b);
            out += ',';
            out += num9(pt.sigma_phi);
            out += ',';
            out += num9(pt.stderr_);
            out += ',';
            out += pt.passes_2pi ? '1' : '0';
            out += '\n';
        }
    }
    return out;
}

void emit_csv(std::span<const SweepCurve> curves, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("emit_csv: cannot open '" + path + "' for writing");
    }
    f << curves_to_csv(curves);
    if (!f.good()) {
        throw IoError("emit_csv: write to '" + path + "' failed");
    }
}

std::vector<SweepCurve> parse_csv_text(const std::string& text) {
    std::stringstream lines(text);
    std::string line;
    if (!std::getline(lines, line) || line != kCsvHeader) {
        throw IoError("parse_csv: missing or unexpected header");
    }
    std::vector<SweepCurve> curves;
    int lineno = 1;
    while (std::getline(lines, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::stringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) {
            fields.push_back(field);
        }
        if (fields.size() != 7) {
            throw IoError("parse_csv: line " + std::to_string(lineno) + " has " +
                          std::to_string(fields.size()) + " fields, expected 7");
        }
        auto to_double = [&](const std::string& s) {
            try {
                std::size_t pos = 0;
                const double v = std::stod(s, &pos);
                if (pos != s.size()) {
                    throw std::invalid_argument(s);
                }
                return v;
            } catch (const std::exception&) {
                throw IoError("parse_csv: bad number '" + s + "' on line " +
                              std::to_string(lineno));
            }
        };
        const CurveLabel label{to_double(fields[0]), to_double(fields[1]), to_double(fields[2])};
        SweepPoint pt;
        pt.I_b = to_double(fields[3]);
        pt.sigma_phi = to_double(fields[4]);
        pt.stderr_ = to_double(fields[5]);
        pt.passes_2pi = fields[6] == "1";
        if (curves.empty() || curves.back().label.f_p != label.f_p ||
            curves.back().label.I_p != label.I_p || curves.back().label.chi != label.chi) {
            curves.push_back(SweepCurve{label, {}});
        }
        curves.back().points.push_back(pt);
    }
    return curves;
}

std::vector<SweepCurve> parse_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("parse_csv: cannot open '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_csv_text(ss.str());
}

namespace {

// Round a raw interval to a 1/2/5 x 10^k tick spacing.
double nice_step(double range, int target_ticks) {
    const double raw = range / std::max(1, target_ticks);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    double nice = 10.0;
    if (frac <= 1.0) {
        nice = 1.0;
    } else if (frac <= 2.0) {
        nice = 2.0;
    } else if (frac <= 5.0) {
        nice = 5.0;
    }
    return nice * mag;
}

std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

} // namespace

std::string curves_to_svg(std::span<const SweepCurve> curves, double reference_level,
                          double threshold_current) {
    bool any_points = false;
    for (const auto& c : curves) {
        any_points |= !c.points.empty();
    }
    if (curves.empty() || !any_points) {
        throw ConfigError("emit_svg: no curve points to plot");
    }

    // Data ranges in plot units (mA, rad); the reference level and the
    // threshold rule are always inside the frame.
    double x_lo = threshold_current * 1e3;
    double x_hi = threshold_current * 1e3;
    double y_lo = reference_level;
    double y_hi = reference_level;
    for (const auto& c : curves) {
        for (const auto& pt : c.points) {
            const double x = pt.I_b * 1e3;
            x_lo = std::min(x_lo, x);
            x_hi = std::max(x_hi, x);
            y_lo = std::min(y_lo, pt.sigma_phi);
            y_hi = std::max(y_hi, pt.sigma_phi);
        }
    }
    if (x_hi - x_lo <= 0.0) {
        x_lo -= 0.5;
        x_hi += 0.5;
    }
    if (y_hi - y_lo <= 0.0) {
        y_lo -= 0.5;
        y_hi += 0.5;
    }
    const double x_pad = 0.03 * (x_hi - x_lo);
    const double y_pad = 0.06 * (y_hi - y_lo);
    x_lo -= x_pad;
    x_hi += x_pad;
    y_lo -= y_pad;
    y_hi += y_pad;

    const double width = 880.0;
    const double height = 560.0;
    const double ml = 78.0;
    const double mr = 220.0;
    const double mt = 28.0;
    const double mb = 64.0;
    const double pw = width - ml - mr;
    const double ph = height - mt - mb;
    auto sx = [&](double x_ma) { return ml + (x_ma - x_lo) / (x_hi - x_lo) * pw; };
    auto sy = [&](double y_rad) { return mt + (y_hi - y_rad) / (y_hi - y_lo) * ph; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

    // axes frame
    svg << "<rect x=\"" << coord(ml) << "\" y=\"" << coord(mt) << "\" width=\"" << coord(pw)
        << "\" height=\"" << coord(ph)
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

    // ticks and grid labels
    const double x_step = nice_step(x_hi - x_lo, 6);
    for (double x = std::ceil(x_lo / x_step) * x_step; x <= x_hi + 1e-9 * x_step; x += x_step) {
        const double px = sx(x);
        svg << "<line x1=\"" << coord(px) << "\" y1=\"" << coord(mt + ph) << "\" x2=\""
            << coord(px) << "\" y2=\"" << coord(mt + ph + 6) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << coord(px) << "\" y=\"" << coord(mt + ph + 22)
            << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">"
            << tick_label(x) << "</text>\n";
    }
    const double y_step = nice_step(y_hi - y_lo, 6);
    for (double y = std::ceil(y_lo / y_step) * y_step; y <= y_hi + 1e-9 * y_step; y += y_step) {
        const double py = sy(y);
        svg << "<line x1=\"" << coord(ml - 6) << "\" y1=\"" << coord(py) << "\" x2=\""
            << coord(ml) << "\" y2=\"" << coord(py) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << coord(ml - 10) << "\" y=\"" << coord(py + 4)
            << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"end\">"
            << tick_label(y) << "</text>\n";
    }

    // axis labels
    svg << "<text x=\"" << coord(ml + pw / 2) << "\" y=\"" << coord(height - 18)
        << "\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">bias current "
           "I_b (mA)</text>\n";
    svg << "<text x=\"20\" y=\"" << coord(mt + ph / 2)
        << "\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 20 "
        << coord(mt + ph / 2) << ")\">sigma_phi (rad)</text>\n";

    // the two dashed rules: sigma reference level and threshold current
    svg << "<line x1=\"" << coord(ml) << "\" y1=\"" << coord(sy(reference_level)) << "\" x2=\""
        << coord(ml + pw) << "\" y2=\"" << coord(sy(reference_level))
        << "\" stroke=\"#444444\" stroke-width=\"1\" stroke-dasharray=\"7,5\"/>\n";
    svg << "<line x1=\"" << coord(sx(threshold_current * 1e3)) << "\" y1=\"" << coord(mt)
        << "\" x2=\"" << coord(sx(threshold_current * 1e3)) << "\" y2=\"" << coord(mt + ph)
        << "\" stroke=\"#444444\" stroke-width=\"1\" stroke-dasharray=\"7,5\"/>\n";

    // curves + legend
    std::size_t color_idx = 0;
    double legend_y = mt + 14.0;
    for (const auto& c : curves) {
        if (c.points.empty()) {
            continue;
        }
        const char* color = kPalette[color_idx % (sizeof(kPalette) / sizeof(kPalette[0]))];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
        for (const auto& pt : c.points) {
            svg << coord(sx(pt.I_b * 1e3)) << "," << coord(sy(pt.sigma_phi)) << " ";
        }
        svg << "\"/>\n";

        const double lx = ml + pw + 12.0;
        svg << "<line x1=\"" << coord(lx) << "\" y1=\"" << coord(legend_y - 4) << "\" x2=\""
            << coord(lx + 24) << "\" y2=\"" << coord(legend_y - 4) << "\" stroke=\"" << color
            << "\" stroke-width=\"1.8\"/>\n";
        std::ostringstream label;
        if (c.label.f_p > 0.0) {
            label << "f_p=" << c.label.f_p * 1e-9 << " GHz, ";
        }
        label << "I_p=" << c.label.I_p * 1e3 << " mA, chi=" << c.label.chi << " /W";
        svg << "<text x=\"" << coord(lx + 30) << "\" y=\"" << coord(legend_y)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << label.str() << "</text>\n";
        legend_y += 18.0;
        ++color_idx;
    }

    svg << "</svg>\n";
    return svg.str();
}

void emit_svg(std::span<const SweepCurve> curves, const std::string& path,
              double reference_level, double threshold_current) {
    const std::string body = curves_to_svg(curves, reference_level, threshold_current);
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("emit_svg: cannot open '" + path + "' for writing");
    }
    f << body;
    if (!f.good()) {
        throw IoError("emit_svg: write to '" + path + "' failed");
    }
}

} // namespace gslaser
