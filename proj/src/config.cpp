#include "gslaser/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace gslaser {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size() || !std::isfinite(v)) {
            throw std::invalid_argument(value);
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for '" + key + "': " + value);
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) {
            throw std::invalid_argument(value);
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer value for '" + key + "': " + value);
    }
}

uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) {
            throw std::invalid_argument(value);
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: bad unsigned value for '" + key + "': " + value);
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") {
        return true;
    }
    if (value == "false" || value == "0" || value == "no" || value == "off") {
        return false;
    }
    throw ConfigError("config: bad boolean value for '" + key + "': " + value);
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(parse_double(key, item));
        }
    }
    if (out.empty()) {
        throw ConfigError("config: empty list for '" + key + "'");
    }
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += fmt(v[i]);
    }
    return out;
}

} // namespace

LaserParams FileConfig::laser() const {
    return laser_with_chi(chi_per_W.front());
}

LaserParams FileConfig::laser_with_chi(double chi) const {
    LaserParams p;
    p.tau_ph = tau_ph_ps * 1e-12;
    p.tau_e = tau_e_ns * 1e-9;
    p.eps = eps;
    p.N_tr = N_tr;
    p.N_th = N_th;
    p.C_sp = C_sp;
    p.Gamma = Gamma;
    p.alpha = alpha;
    p.nu0 = nu0_THz * 1e12;
    p.chi = chi;
    return p;
}

PumpWaveform FileConfig::waveform() const {
    return waveform_with(I_b_mA * 1e-3, I_p_mA.front() * 1e-3);
}

PumpWaveform FileConfig::waveform_with(double I_b_amps, double I_p_amps) const {
    PumpWaveform w;
    w.I_b = I_b_amps;
    w.I_p = I_p_amps;
    w.f_p = f_p_GHz * 1e9;
    w.duty = duty;
    return w;
}

EnsembleConfig FileConfig::ensemble() const {
    EnsembleConfig cfg;
    cfg.n_traj = static_cast<int>(n_traj);
    cfg.master_seed = master_seed;
    cfg.dt = dt_fs * 1e-15;
    cfg.flags.field_noise = field_noise;
    cfg.flags.carrier_shot_noise = carrier_noise;
    cfg.n_threads = threads;
    cfg.warmup_max_periods = warmup_max_periods;
    cfg.warmup_tol = warmup_tol;
    cfg.histogram_bins = histogram_bins;
    return cfg;
}

PulsationCriteria FileConfig::pulsation() const {
    return PulsationCriteria{peak_to_mean_min, prominence_fraction};
}

IbRange FileConfig::ib_range() const {
    IbRange r;
    r.auto_range = I_b_auto;
    r.min = I_b_min_mA * 1e-3;
    r.max = I_b_max_mA * 1e-3;
    r.step = I_b_step_mA * 1e-3;
    return r;
}

FileConfig parse_config_text(const std::string& text) {
    FileConfig c;
    using Setter = std::function<void(FileConfig&, const std::string&, const std::string&)>;
    static const std::map<std::string, Setter> setters = {
        {"tau_ph_ps", [](FileConfig& f, auto& k, auto& v) { f.tau_ph_ps = parse_double(k, v); }},
        {"tau_e_ns", [](FileConfig& f, auto& k, auto& v) { f.tau_e_ns = parse_double(k, v); }},
        {"eps", [](FileConfig& f, auto& k, auto& v) { f.eps = parse_double(k, v); }},
        {"N_tr", [](FileConfig& f, auto& k, auto& v) { f.N_tr = parse_double(k, v); }},
        {"N_th", [](FileConfig& f, auto& k, auto& v) { f.N_th = parse_double(k, v); }},
        {"C_sp", [](FileConfig& f, auto& k, auto& v) { f.C_sp = parse_double(k, v); }},
        {"Gamma", [](FileConfig& f, auto& k, auto& v) { f.Gamma = parse_double(k, v); }},
        {"alpha", [](FileConfig& f, auto& k, auto& v) { f.alpha = parse_double(k, v); }},
        {"nu0_THz", [](FileConfig& f, auto& k, auto& v) { f.nu0_THz = parse_double(k, v); }},
        {"chi_per_W", [](FileConfig& f, auto& k, auto& v) { f.chi_per_W = parse_list(k, v); }},
        {"f_p_GHz", [](FileConfig& f, auto& k, auto& v) { f.f_p_GHz = parse_double(k, v); }},
        {"I_p_mA", [](FileConfig& f, auto& k, auto& v) { f.I_p_mA = parse_list(k, v); }},
        {"duty", [](FileConfig& f, auto& k, auto& v) { f.duty = parse_double(k, v); }},
        {"I_b_mA", [](FileConfig& f, auto& k, auto& v) { f.I_b_mA = parse_double(k, v); }},
        {"I_b_range_mA",
         [](FileConfig& f, auto& k, auto& v) {
             if (v == "auto") {
                 f.I_b_auto = true;
                 return;
             }
             std::stringstream ss(v);
             std::string part;
             std::vector<double> vals;
             while (std::getline(ss, part, ':')) {
                 vals.push_back(parse_double(k, trim(part)));
             }
             if (vals.size() != 3) {
                 throw ConfigError("config: I_b_range_mA expects 'auto' or min:max:step");
             }
             f.I_b_auto = false;
             f.I_b_min_mA = vals[0];
             f.I_b_max_mA = vals[1];
             f.I_b_step_mA = vals[2];
         }},
        {"I_b_step_mA",
         [](FileConfig& f, auto& k, auto& v) { f.I_b_step_mA = parse_double(k, v); }},
        {"n_traj", [](FileConfig& f, auto& k, auto& v) { f.n_traj = parse_int(k, v); }},
        {"master_seed", [](FileConfig& f, auto& k, auto& v) { f.master_seed = parse_u64(k, v); }},
        {"dt_fs", [](FileConfig& f, auto& k, auto& v) { f.dt_fs = parse_double(k, v); }},
        {"field_noise", [](FileConfig& f, auto& k, auto& v) { f.field_noise = parse_bool(k, v); }},
        {"carrier_noise",
         [](FileConfig& f, auto& k, auto& v) { f.carrier_noise = parse_bool(k, v); }},
        {"threads",
         [](FileConfig& f, auto& k, auto& v) { f.threads = static_cast<int>(parse_int(k, v)); }},
        {"warmup_max_periods",
         [](FileConfig& f, auto& k, auto& v) {
             f.warmup_max_periods = static_cast<int>(parse_int(k, v));
         }},
        {"warmup_tol", [](FileConfig& f, auto& k, auto& v) { f.warmup_tol = parse_double(k, v); }},
        {"histogram_bins",
         [](FileConfig& f, auto& k, auto& v) {
             f.histogram_bins = static_cast<int>(parse_int(k, v));
         }},
        {"peak_to_mean_min",
         [](FileConfig& f, auto& k, auto& v) { f.peak_to_mean_min = parse_double(k, v); }},
        {"prominence_fraction",
         [](FileConfig& f, auto& k, auto& v) { f.prominence_fraction = parse_double(k, v); }},
        {"t_ps", [](FileConfig& f, auto& k, auto& v) { f.t_ps = parse_double(k, v); }},
        {"output_csv", [](FileConfig& f, auto&, auto& v) { f.output_csv = v; }},
        {"output_svg", [](FileConfig& f, auto&, auto& v) { f.output_svg = v; }},
        {"output_log", [](FileConfig& f, auto&, auto& v) { f.output_log = v; }},
        {"output_histogram", [](FileConfig& f, auto&, auto& v) { f.output_histogram = v; }},
    };

    std::stringstream lines(text);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: line " + std::to_string(lineno) +
                              " is not 'key = value': " + line);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) {
            throw ConfigError("config: unknown key '" + key + "' on line " +
                              std::to_string(lineno));
        }
        it->second(c, key, value);
    }
    return c;
}

FileConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string serialize_config(const FileConfig& c) {
    std::ostringstream out;
    out << "# laser\n";
    out << "tau_ph_ps = " << fmt(c.tau_ph_ps) << "\n";
    out << "tau_e_ns = " << fmt(c.tau_e_ns) << "\n";
    out << "eps = " << fmt(c.eps) << "\n";
    out << "N_tr = " << fmt(c.N_tr) << "\n";
    out << "N_th = " << fmt(c.N_th) << "\n";
    out << "C_sp = " << fmt(c.C_sp) << "\n";
    out << "Gamma = " << fmt(c.Gamma) << "\n";
    out << "alpha = " << fmt(c.alpha) << "\n";
    out << "nu0_THz = " << fmt(c.nu0_THz) << "\n";
    out << "chi_per_W = " << fmt_list(c.chi_per_W) << "\n";
    out << "# drive\n";
    out << "f_p_GHz = " << fmt(c.f_p_GHz) << "\n";
    out << "I_p_mA = " << fmt_list(c.I_p_mA) << "\n";
    out << "duty = " << fmt(c.duty) << "\n";
    out << "I_b_mA = " << fmt(c.I_b_mA) << "\n";
    if (c.I_b_auto) {
        out << "I_b_range_mA = auto\n";
    } else {
        out << "I_b_range_mA = " << fmt(c.I_b_min_mA) << ":" << fmt(c.I_b_max_mA) << ":"
            << fmt(c.I_b_step_mA) << "\n";
    }
    out << "I_b_step_mA = " << fmt(c.I_b_step_mA) << "\n";
    out << "# ensemble\n";
    out << "n_traj = " << c.n_traj << "\n";
    out << "master_seed = " << c.master_seed << "\n";
    out << "dt_fs = " << fmt(c.dt_fs) << "\n";
    out << "field_noise = " << (c.field_noise ? "true" : "false") << "\n";
    out << "carrier_noise = " << (c.carrier_noise ? "true" : "false") << "\n";
    out << "threads = " << c.threads << "\n";
    out << "warmup_max_periods = " << c.warmup_max_periods << "\n";
    out << "warmup_tol = " << fmt(c.warmup_tol) << "\n";
    out << "histogram_bins = " << c.histogram_bins << "\n";
    out << "# stability predicate\n";
    out << "peak_to_mean_min = " << fmt(c.peak_to_mean_min) << "\n";
    out << "prominence_fraction = " << fmt(c.prominence_fraction) << "\n";
    out << "# analytic\n";
    out << "t_ps = " << fmt(c.t_ps) << "\n";
    out << "# outputs\n";
    if (!c.output_csv.empty()) {
        out << "output_csv = " << c.output_csv << "\n";
    }
    if (!c.output_svg.empty()) {
        out << "output_svg = " << c.output_svg << "\n";
    }
    if (!c.output_log.empty()) {
        out << "output_log = " << c.output_log << "\n";
    }
    if (!c.output_histogram.empty()) {
        out << "output_histogram = " << c.output_histogram << "\n";
    }
    return out.str();
}

} // namespace gslaser
