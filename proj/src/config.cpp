#include "coldsplit/config.hpp"

#include <cerrno>
#include <climits>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "coldsplit/errors.hpp"

namespace coldsplit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Shortest decimal form that parses back to the same double.
std::string fmt_double(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return buf;
}

struct Parser {
    explicit Parser(const std::string& o) : origin(o) {}

    const std::string& origin;
    int line_no = 0;
    std::string section;
    ScenarioConfig cfg;
    std::map<int, SegmentConfig> fw_segments, bw_segments;
    std::set<std::string> seen;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError(origin + ":" + std::to_string(line_no) + ": " + msg);
    }

    double num(const std::string& key, const std::string& v) const {
        errno = 0;
        char* end = nullptr;
        const double x = std::strtod(v.c_str(), &end);
        if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE || !std::isfinite(x))
            fail("invalid number '" + v + "' for key '" + key + "'");
        return x;
    }

    int integer(const std::string& key, const std::string& v) const {
        errno = 0;
        char* end = nullptr;
        const long x = std::strtol(v.c_str(), &end, 10);
        if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE ||
            x < INT_MIN || x > INT_MAX)
            fail("invalid integer '" + v + "' for key '" + key + "'");
        return static_cast<int>(x);
    }

    bool boolean(const std::string& key, const std::string& v) const {
        if (v == "on" || v == "true" || v == "1") return true;
        if (v == "off" || v == "false" || v == "0") return false;
        fail("invalid boolean '" + v + "' for key '" + key + "' (use on/off)");
    }

    std::optional<double> opt_num(const std::string& key, const std::string& v) const {
        if (v == "auto") return std::nullopt;
        return num(key, v);
    }

    void enter_section(const std::string& name) {
        static const std::set<std::string> plain = {
            "medium", "probe", "grid", "control.fw", "control.bw", "analysis", "output"};
        if (plain.count(name) || parse_segment_section(name, nullptr)) {
            section = name;
            return;
        }
        fail("unknown section [" + name + "]");
    }

    // Matches control.(fw|bw).segment.<index>; fills *out when non-null.
    bool parse_segment_section(const std::string& name,
                               std::pair<bool, int>* out) const {
        const std::string pre_fw = "control.fw.segment.";
        const std::string pre_bw = "control.bw.segment.";
        bool is_fw;
        std::string idx;
        if (name.rfind(pre_fw, 0) == 0) {
            is_fw = true;
            idx = name.substr(pre_fw.size());
        } else if (name.rfind(pre_bw, 0) == 0) {
            is_fw = false;
            idx = name.substr(pre_bw.size());
        } else {
            return false;
        }
        if (idx.empty() || idx.find_first_not_of("0123456789") != std::string::npos)
            return false;
        if (out) *out = {is_fw, std::atoi(idx.c_str())};
        return true;
    }

    void key_value(const std::string& key, const std::string& value) {
        if (section.empty()) fail("key '" + key + "' outside any [section]");
        if (!seen.insert(section + "/" + key).second)
            fail("duplicate key '" + key + "' in [" + section + "]");

        std::pair<bool, int> seg;
        if (parse_segment_section(section, &seg)) {
            SegmentConfig& s = (seg.first ? fw_segments : bw_segments)[seg.second];
            if (key == "start_us") s.start_us = num(key, value);
            else if (key == "end_us") s.end_us = num(key, value);
            else if (key == "rabi_mhz") s.rabi_mhz = num(key, value);
            else if (key == "phase_rad") s.phase_rad = num(key, value);
            else if (key == "ramp_us") s.ramp_us = num(key, value);
            else fail("unknown key '" + key + "' in [" + section + "]");
            return;
        }
        if (section == "medium") {
            auto& m = cfg.medium;
            if (key == "od") m.od = num(key, value);
            else if (key == "gamma_mhz") m.gamma_mhz = num(key, value);
            else if (key == "gamma_gs_khz") m.gamma_gs_khz = num(key, value);
            else if (key == "length_mm") m.length_mm = num(key, value);
            else fail("unknown key '" + key + "' in [medium]");
        } else if (section == "probe") {
            auto& p = cfg.probe;
            if (key == "peak") p.peak = num(key, value);
            else if (key == "center_us") p.center_us = num(key, value);
            else if (key == "fwhm_us") p.fwhm_us = num(key, value);
            else fail("unknown key '" + key + "' in [probe]");
        } else if (section == "grid") {
            auto& g = cfg.grid;
            if (key == "nz") g.nz = integer(key, value);
            else if (key == "nt") g.nt = integer(key, value);
            else if (key == "t_end_us") g.t_end_us = num(key, value);
            else fail("unknown key '" + key + "' in [grid]");
        } else if (section == "control.fw" || section == "control.bw") {
            auto& c = (section == "control.fw") ? cfg.fw : cfg.bw;
            if (key == "detuning_mhz") c.detuning_mhz = num(key, value);
            else fail("unknown key '" + key + "' in [" + section + "]");
        } else if (section == "analysis") {
            auto& a = cfg.analysis;
            if (key == "mode") {
                if (value != "storage" && value != "spectrum")
                    fail("mode must be 'storage' or 'spectrum', got '" + value + "'");
                a.mode = value;
            } else if (key == "fringe") a.fringe = boolean(key, value);
            else if (key == "fringe_settings") a.fringe_settings = integer(key, value);
            else if (key == "delta_phi_rad") a.delta_phi_rad = num(key, value);
            else if (key == "beat") a.beat = boolean(key, value);
            else if (key == "window_start_us") a.window_start_us = opt_num(key, value);
            else if (key == "window_end_us") a.window_end_us = opt_num(key, value);
            else if (key == "spectrum_rabi_mhz") a.spectrum_rabi_mhz = num(key, value);
            else if (key == "spectrum_span_mhz") a.spectrum_span_mhz = num(key, value);
            else if (key == "spectrum_points") a.spectrum_points = integer(key, value);
            else fail("unknown key '" + key + "' in [analysis]");
        } else if (section == "output") {
            auto& o = cfg.output;
            if (key == "dir") o.dir = value;
            else if (key == "plots") o.plots = boolean(key, value);
            else if (key == "field_map") o.field_map = boolean(key, value);
            else if (key == "spin_map") o.spin_map = boolean(key, value);
            else if (key == "map_stride") o.map_stride = integer(key, value);
            else if (key == "convergence_check") o.convergence_check = boolean(key, value);
            else fail("unknown key '" + key + "' in [output]");
        } else {
            fail("unknown section [" + section + "]");
        }
    }

    void finalize_segments(const std::map<int, SegmentConfig>& src,
                           std::vector<SegmentConfig>& dst, const char* which) {
        int expect = 0;
        for (const auto& [idx, seg] : src) {
            if (idx != expect)
                throw ConfigError(origin + ": control." + which +
                                  ".segment indices must start at 0 and be contiguous");
            dst.push_back(seg);
            ++expect;
        }
    }
};

} // namespace

ScenarioConfig parse_config(const std::string& text, const std::string& origin) {
    Parser p(origin);
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        ++p.line_no;
        std::string line = raw;
        // Comments: leading '#' or '#' preceded by whitespace.
        if (const auto t = trim(line); !t.empty() && t[0] == '#') continue;
        for (std::size_t i = 0; i < line.size(); ++i)
            if (line[i] == '#' && i > 0 && (line[i - 1] == ' ' || line[i - 1] == '\t')) {
                line.resize(i);
                break;
            }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') p.fail("malformed section header '" + line + "'");
            p.enter_section(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) p.fail("expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) p.fail("empty key");
        p.key_value(key, value);
    }
    p.finalize_segments(p.fw_segments, p.cfg.fw.segments, "fw");
    p.finalize_segments(p.bw_segments, p.cfg.bw.segments, "bw");
    return p.cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

namespace {

void emit_segments(std::ostream& out, const char* which,
                   const std::vector<SegmentConfig>& segs) {
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const auto& s = segs[i];
        out << "\n[control." << which << ".segment." << i << "]\n"
            << "start_us = " << fmt_double(s.start_us) << "\n"
            << "end_us = " << fmt_double(s.end_us) << "\n"
            << "rabi_mhz = " << fmt_double(s.rabi_mhz) << "\n"
            << "phase_rad = " << fmt_double(s.phase_rad) << "\n"
            << "ramp_us = " << fmt_double(s.ramp_us) << "\n";
    }
}

std::string opt_str(const std::optional<double>& v) {
    return v ? fmt_double(*v) : "auto";
}

const char* onoff(bool b) { return b ? "on" : "off"; }

} // namespace

std::string serialize_config(const ScenarioConfig& cfg) {
    std::ostringstream out;
    out << "[medium]\n"
        << "od = " << fmt_double(cfg.medium.od) << "\n"
        << "gamma_mhz = " << fmt_double(cfg.medium.gamma_mhz) << "\n"
        << "gamma_gs_khz = " << fmt_double(cfg.medium.gamma_gs_khz) << "\n"
        << "length_mm = " << fmt_double(cfg.medium.length_mm) << "\n"
        << "\n[probe]\n"
        << "peak = " << fmt_double(cfg.probe.peak) << "\n"
        << "center_us = " << fmt_double(cfg.probe.center_us) << "\n"
        << "fwhm_us = " << fmt_double(cfg.probe.fwhm_us) << "\n"
        << "\n[grid]\n"
        << "nz = " << cfg.grid.nz << "\n"
        << "nt = " << cfg.grid.nt << "\n"
        << "t_end_us = " << fmt_double(cfg.grid.t_end_us) << "\n"
        << "\n[control.fw]\n"
        << "detuning_mhz = " << fmt_double(cfg.fw.detuning_mhz) << "\n";
    emit_segments(out, "fw", cfg.fw.segments);
    out << "\n[control.bw]\n"
        << "detuning_mhz = " << fmt_double(cfg.bw.detuning_mhz) << "\n";
    emit_segments(out, "bw", cfg.bw.segments);
    out << "\n[analysis]\n"
        << "mode = " << cfg.analysis.mode << "\n"
        << "fringe = " << onoff(cfg.analysis.fringe) << "\n"
        << "fringe_settings = " << cfg.analysis.fringe_settings << "\n"
        << "delta_phi_rad = " << fmt_double(cfg.analysis.delta_phi_rad) << "\n"
        << "beat = " << onoff(cfg.analysis.beat) << "\n"
        << "window_start_us = " << opt_str(cfg.analysis.window_start_us) << "\n"
        << "window_end_us = " << opt_str(cfg.analysis.window_end_us) << "\n"
        << "spectrum_rabi_mhz = " << fmt_double(cfg.analysis.spectrum_rabi_mhz) << "\n"
        << "spectrum_span_mhz = " << fmt_double(cfg.analysis.spectrum_span_mhz) << "\n"
        << "spectrum_points = " << cfg.analysis.spectrum_points << "\n"
        << "\n[output]\n"
        << "dir = " << cfg.output.dir << "\n"
        << "plots = " << onoff(cfg.output.plots) << "\n"
        << "field_map = " << onoff(cfg.output.field_map) << "\n"
        << "spin_map = " << onoff(cfg.output.spin_map) << "\n"
        << "map_stride = " << cfg.output.map_stride << "\n"
        << "convergence_check = " << onoff(cfg.output.convergence_check) << "\n";
    return out.str();
}

namespace {

template <typename F>
auto rewrap(const char* what, F&& f) {
    try {
        return f();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string(what) + ": " + e.what());
    }
}

} // namespace

MediumParams build_medium(const ScenarioConfig& cfg) {
    MediumParams m{cfg.medium.od, kTwoPi * 1e6 * cfg.medium.gamma_mhz,
                   kTwoPi * 1e3 * cfg.medium.gamma_gs_khz, 1e-3 * cfg.medium.length_mm};
    rewrap("medium", [&] { m.validate(); return 0; });
    return m;
}

ProbePulse build_probe(const ScenarioConfig& cfg) {
    ProbePulse p{cfg.probe.peak, 1e-6 * cfg.probe.center_us, 1e-6 * cfg.probe.fwhm_us};
    rewrap("probe", [&] { p.validate(); return 0; });
    return p;
}

Grid build_grid(const ScenarioConfig& cfg) {
    return Grid{cfg.grid.nz, cfg.grid.nt, 1e-6 * cfg.grid.t_end_us};
}

ControlSchedule build_control(const ControlConfig& cc) {
    ControlSchedule sched;
    sched.detuning = kTwoPi * 1e6 * cc.detuning_mhz;
    for (const auto& s : cc.segments)
        sched.segments.push_back({1e-6 * s.start_us, 1e-6 * s.end_us,
                                  kTwoPi * 1e6 * s.rabi_mhz, s.phase_rad,
                                  1e-6 * s.ramp_us});
    rewrap("control", [&] { sched.validate(); return 0; });
    return sched;
}

void validate_config(const ScenarioConfig& cfg) {
    build_medium(cfg);
    build_probe(cfg);
    build_control(cfg.fw);
    build_control(cfg.bw);
    if (cfg.grid.nz < 2 || cfg.grid.nt < 2 || !(cfg.grid.t_end_us > 0.0))
        throw ConfigError("grid: nz and nt must be >= 2 and t_end_us > 0");
    if (cfg.analysis.mode != "storage" && cfg.analysis.mode != "spectrum")
        throw ConfigError("analysis: mode must be 'storage' or 'spectrum', got '" + cfg.analysis.mode + "'");
    if (cfg.analysis.fringe_settings < 3)
        throw ConfigError("analysis: fringe_settings must be >= 3");
    if (cfg.analysis.spectrum_points < 2 || !(cfg.analysis.spectrum_span_mhz > 0.0))
        throw ConfigError("analysis: spectrum_points >= 2 and spectrum_span_mhz > 0 required");
    if (cfg.analysis.spectrum_rabi_mhz < 0.0)
        throw ConfigError("analysis: spectrum_rabi_mhz must be >= 0");
    if (cfg.output.map_stride < 1)
        throw ConfigError("output: map_stride must be >= 1");
    if (cfg.analysis.window_start_us && cfg.analysis.window_end_us &&
        !(*cfg.analysis.window_start_us < *cfg.analysis.window_end_us))
        throw ConfigError("analysis: window_start_us must be < window_end_us");
}

namespace {

struct ParamRef {
    double* d = nullptr;
    int* i = nullptr;
    std::optional<double>* od = nullptr;
};

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : path) {
        if (c == '.') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

ParamRef resolve(ScenarioConfig& cfg, const std::string& path) {
    const auto parts = split_path(path);
    auto fail = [&]() -> ParamRef {
        throw ConfigError("unknown or non-scalar parameter path: " + path);
    };
    if (parts.size() == 2) {
        const auto& s = parts[0];
        const auto& k = parts[1];
        if (s == "medium") {
            if (k == "od") return {&cfg.medium.od};
            if (k == "gamma_mhz") return {&cfg.medium.gamma_mhz};
            if (k == "gamma_gs_khz") return {&cfg.medium.gamma_gs_khz};
            if (k == "length_mm") return {&cfg.medium.length_mm};
        } else if (s == "probe") {
            if (k == "peak") return {&cfg.probe.peak};
            if (k == "center_us") return {&cfg.probe.center_us};
            if (k == "fwhm_us") return {&cfg.probe.fwhm_us};
        } else if (s == "grid") {
            if (k == "nz") return {nullptr, &cfg.grid.nz};
            if (k == "nt") return {nullptr, &cfg.grid.nt};
            if (k == "t_end_us") return {&cfg.grid.t_end_us};
        } else if (s == "analysis") {
            if (k == "fringe_settings") return {nullptr, &cfg.analysis.fringe_settings};
            if (k == "delta_phi_rad") return {&cfg.analysis.delta_phi_rad};
            if (k == "window_start_us") return {nullptr, nullptr, &cfg.analysis.window_start_us};
            if (k == "window_end_us") return {nullptr, nullptr, &cfg.analysis.window_end_us};
            if (k == "spectrum_rabi_mhz") return {&cfg.analysis.spectrum_rabi_mhz};
            if (k == "spectrum_span_mhz") return {&cfg.analysis.spectrum_span_mhz};
            if (k == "spectrum_points") return {nullptr, &cfg.analysis.spectrum_points};
        } else if (s == "output") {
            if (k == "map_stride") return {nullptr, &cfg.output.map_stride};
        }
        return fail();
    }
    if (parts.size() == 3 && parts[0] == "control" && parts[2] == "detuning_mhz") {
        if (parts[1] == "fw") return {&cfg.fw.detuning_mhz};
        if (parts[1] == "bw") return {&cfg.bw.detuning_mhz};
        return fail();
    }
    if (parts.size() == 5 && parts[0] == "control" && parts[2] == "segment") {
        ControlConfig* cc = nullptr;
        if (parts[1] == "fw") cc = &cfg.fw;
        else if (parts[1] == "bw") cc = &cfg.bw;
        else return fail();
        const std::string& idx = parts[3];
        if (idx.empty() || idx.find_first_not_of("0123456789") != std::string::npos)
            return fail();
        const std::size_t n = std::strtoul(idx.c_str(), nullptr, 10);
        if (n >= cc->segments.size())
            throw ConfigError("segment index out of range in parameter path: " + path);
        SegmentConfig& seg = cc->segments[n];
        const auto& k = parts[4];
        if (k == "start_us") return {&seg.start_us};
        if (k == "end_us") return {&seg.end_us};
        if (k == "rabi_mhz") return {&seg.rabi_mhz};
        if (k == "phase_rad") return {&seg.phase_rad};
        if (k == "ramp_us") return {&seg.ramp_us};
        return fail();
    }
    return fail();
}

} // namespace

double get_param(const ScenarioConfig& cfg, const std::string& path) {
    ParamRef r = resolve(const_cast<ScenarioConfig&>(cfg), path);
    if (r.d) return *r.d;
    if (r.i) return static_cast<double>(*r.i);
    if (r.od) {
        if (!r.od->has_value())
            throw ConfigError("parameter '" + path + "' is 'auto', not a scalar");
        return **r.od;
    }
    throw ConfigError("unknown parameter path: " + path);
}

void set_param(ScenarioConfig& cfg, const std::string& path, double value) {
    ParamRef r = resolve(cfg, path);
    if (r.d) {
        *r.d = value;
        return;
    }
    if (r.i) {
        const double rounded = std::nearbyint(value);
        if (std::abs(value - rounded) > 1e-9 || rounded < INT_MIN || rounded > INT_MAX)
            throw ConfigError("parameter '" + path + "' takes an integer, got " +
                              fmt_double(value));
        *r.i = static_cast<int>(rounded);
        return;
    }
    if (r.od) {
        *r.od = value;
        return;
    }
    throw ConfigError("unknown parameter path: " + path);
}

namespace {

ScenarioConfig storage_base(double od, double probe_center_us) {
    ScenarioConfig cfg;
    cfg.medium.od = od;
    cfg.probe.center_us = probe_center_us;
    return cfg;
}

void add_seg(ControlConfig& c, double start_us, double end_us, double rabi_mhz,
             double phase_rad = 0.0, double ramp_us = 0.1) {
    c.segments.push_back({start_us, end_us, rabi_mhz, phase_rad, ramp_us});
}

} // namespace

std::vector<Preset> list_presets() {
    return {
        {"fig2a", "store at od=21, forward-only retrieval (100:0 split)"},
        {"fig2b", "store at od=21, retrieve with both controls (near 50:50)"},
        {"fig2c", "store at od=21, backward-only retrieval (0:100 split)"},
        {"fig3", "od=100 storage with counter-propagating retrieval and space-time maps"},
        {"fig4a", "equal-split retrieval, combiner fringe scan at delta = 0"},
        {"fig4b", "detuned backward control, beat note at period 2*pi/delta"},
        {"eit-spectrum", "two-level and EIT transmission spectra of the medium"},
    };
}

bool is_preset(const std::string& name) {
    for (const auto& p : list_presets())
        if (p.name == name) return true;
    return false;
}

ScenarioConfig preset_config(const std::string& name) {
    if (name == "fig2a") {
        ScenarioConfig cfg = storage_base(21.0, 1.3);
        add_seg(cfg.fw, 0.0, 2.05, 5.8);
        add_seg(cfg.fw, 3.98, 8.0, 5.7);
        return cfg;
    }
    if (name == "fig2b") {
        ScenarioConfig cfg = storage_base(21.0, 1.3);
        add_seg(cfg.fw, 0.0, 2.05, 5.8);
        add_seg(cfg.fw, 3.98, 8.0, 5.7);
        add_seg(cfg.bw, 3.98, 8.0, 6.6);
        return cfg;
    }
    if (name == "fig2c") {
        ScenarioConfig cfg = storage_base(21.0, 1.3);
        add_seg(cfg.fw, 0.0, 2.05, 5.8);
        add_seg(cfg.bw, 3.98, 8.0, 7.7);
        return cfg;
    }
    if (name == "fig3") {
        ScenarioConfig cfg = storage_base(100.0, 1.52);
        cfg.grid.nt = 10001;
        cfg.grid.t_end_us = 10.0;
        add_seg(cfg.fw, 0.0, 2.4, 7.6);
        add_seg(cfg.fw, 4.4, 10.0, 7.6);
        add_seg(cfg.bw, 4.4, 10.0, 7.6);
        cfg.output.field_map = true;
        cfg.output.spin_map = true;
        cfg.output.map_stride = 10;
        return cfg;
    }
    if (name == "fig4a") {
        ScenarioConfig cfg = storage_base(100.0, 1.52);
        cfg.grid.nt = 10001;
        cfg.grid.t_end_us = 10.0;
        add_seg(cfg.fw, 0.0, 2.4, 7.6);
        add_seg(cfg.fw, 4.4, 10.0, 7.6);
        add_seg(cfg.bw, 4.4, 10.0, 7.6);
        cfg.analysis.fringe = true;
        return cfg;
    }
    if (name == "fig4b") {
        ScenarioConfig cfg = storage_base(100.0, 1.52);
        cfg.grid.nt = 12001;
        cfg.grid.t_end_us = 12.0;
        add_seg(cfg.fw, 0.0, 2.4, 7.6);
        add_seg(cfg.fw, 4.4, 12.0, 4.0);
        add_seg(cfg.bw, 4.4, 12.0, 4.0);
        cfg.bw.detuning_mhz = 1.0;
        cfg.analysis.beat = true;
        return cfg;
    }
    if (name == "eit-spectrum") {
        ScenarioConfig cfg;
        cfg.analysis.mode = "spectrum";
        return cfg;
    }
    throw ConfigError("unknown preset: " + name);
}

} // namespace coldsplit
