#include "coldsplit/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "coldsplit/errors.hpp"
#include "coldsplit/svg.hpp"

namespace coldsplit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

struct LedgerFractions {
    double leaked, fw, bw, eff;
};

LedgerFractions fractions(const EnergyLedger& l) {
    const double in = l.input > 0.0 ? l.input : 1.0;
    return {l.leaked / in, l.retrieved_fw / in, l.retrieved_bw / in,
            (l.retrieved_fw + l.retrieved_bw) / in};
}

void run_spectrum(ScenarioOutcome& out, const ScenarioConfig& cfg) {
    const MediumParams medium = build_medium(cfg);
    const double omega_c = kTwoPi * 1e6 * cfg.analysis.spectrum_rabi_mhz;
    const double span = kTwoPi * 1e6 * cfg.analysis.spectrum_span_mhz;
    const int n = cfg.analysis.spectrum_points;
    out.spec_delta.resize(n);
    out.spec_two_level.resize(n);
    out.spec_eit.resize(n);
    for (int i = 0; i < n; ++i) {
        const double d = -span + 2.0 * span * i / (n - 1);
        out.spec_delta[i] = d;
        out.spec_two_level[i] = two_level_transmission(d, medium);
        out.spec_eit[i] = eit_transmission(d, omega_c, medium);
    }
}

SimResult run_storage(const ScenarioConfig& cfg, bool with_maps) {
    const MediumParams medium = build_medium(cfg);
    const ControlSchedule fw = build_control(cfg.fw);
    const ControlSchedule bw = build_control(cfg.bw);
    const ProbePulse probe = build_probe(cfg);
    const Grid grid = build_grid(cfg);
    SolverOptions opt;
    opt.record_field_map = with_maps && cfg.output.field_map;
    opt.record_spin_map = with_maps && cfg.output.spin_map;
    opt.map_time_stride = cfg.output.map_stride;
    return run(medium, fw, bw, probe, grid, opt);
}

// Integration window for fringe/beat analysis, in seconds, or nothing if
// it cannot be resolved (auto bounds need a retrieval stage).
std::optional<std::pair<double, double>> analysis_window(const ScenarioConfig& cfg,
                                                         const SimResult& sim) {
    double t0, t1;
    if (cfg.analysis.window_start_us) {
        t0 = 1e-6 * *cfg.analysis.window_start_us;
    } else if (sim.retrieval_start) {
        t0 = *sim.retrieval_start;
    } else {
        return std::nullopt;
    }
    t1 = cfg.analysis.window_end_us ? 1e-6 * *cfg.analysis.window_end_us
                                    : 1e-6 * cfg.grid.t_end_us;
    if (!(t0 < t1)) return std::nullopt;
    return std::make_pair(t0, t1);
}

void refine_check(ScenarioOutcome& out, const ScenarioConfig& cfg) {
    ScenarioConfig fine = cfg;
    fine.grid.nz = 2 * cfg.grid.nz - 1;
    fine.grid.nt = 2 * cfg.grid.nt - 1;
    const SimResult ref = run_storage(fine, false);
    const LedgerFractions a = fractions(out.sim->ledger);
    const LedgerFractions b = fractions(ref.ledger);
    // Fractions of input energy; sub-1%-of-input quantities are compared on
    // an absolute 0.01 scale so a vanishing channel cannot dominate.
    auto rel = [](double c, double r) { return std::abs(c - r) / std::max(std::abs(r), 0.01); };
    const double d = std::max({rel(a.leaked, b.leaked), rel(a.fw, b.fw), rel(a.bw, b.bw),
                               rel(a.eff, b.eff)});
    out.convergence_max_delta = d;
    out.convergence_pass = d < 0.01;
}

} // namespace

ScenarioOutcome compute_scenario(const std::string& name, const ScenarioConfig& cfg) {
    validate_config(cfg);
    ScenarioOutcome out;
    out.name = name;
    out.config = cfg;
    if (cfg.analysis.mode == "spectrum") {
        run_spectrum(out, cfg);
        return out;
    }

    out.sim = run_storage(cfg, true);
    const SimResult& sim = *out.sim;

    if (sim.storage_interval && sim.ledger.input > 0.0)
        out.efficiency = storage_efficiency(sim);
    if (sim.ledger.retrieved_fw + sim.ledger.retrieved_bw > 0.0)
        out.ratio = splitting_ratio(sim);

    const double delta = kTwoPi * 1e6 * cfg.bw.detuning_mhz;
    const auto window = analysis_window(cfg, sim);
    if (cfg.analysis.fringe && window) {
        out.fringe = fringe_scan(sim.time, sim.fw_field, sim.bw_field, delta,
                                 window->first, window->second,
                                 cfg.analysis.fringe_settings);
        try {
            out.fringe_fit = fit_fringe(out.fringe);
        } catch (const std::invalid_argument&) {
            // degenerate fringe (e.g. empty outputs); leave the fit unset
        }
    }
    out.beat_requested = cfg.analysis.beat;
    if (cfg.analysis.beat && window) {
        out.combined = combine(sim.time, sim.fw_field, sim.bw_field,
                               cfg.analysis.delta_phi_rad, delta);
        std::vector<double> wt, wv;
        for (std::size_t i = 0; i < sim.time.size(); ++i)
            if (sim.time[i] >= window->first && sim.time[i] <= window->second) {
                wt.push_back(sim.time[i]);
                wv.push_back(out.combined->port_plus[i]);
            }
        try {
            out.beat_period_s = beat_period(wt, wv);
        } catch (const std::invalid_argument&) {
            // no oscillation (e.g. delta = 0); reported as none
        }
    }
    if (cfg.output.convergence_check) refine_check(out, cfg);
    return out;
}

std::string trace_csv(const SimResult& sim) {
    std::string s = "t_us,fw_intensity,bw_intensity,fw_phase,bw_phase,control_fw,control_bw\n";
    const auto fw_i = sim.fw_out();
    const auto bw_i = sim.bw_out();
    const auto fw_p = sim.fw_phase();
    const auto bw_p = sim.bw_phase();
    for (std::size_t i = 0; i < sim.time.size(); ++i) {
        s += g9(1e6 * sim.time[i]);
        s += ',';
        s += g9(fw_i[i]);
        s += ',';
        s += g9(bw_i[i]);
        s += ',';
        s += g9(fw_p[i]);
        s += ',';
        s += g9(bw_p[i]);
        s += ',';
        s += g9(sim.control_fw[i] / (kTwoPi * 1e6));  // MHz
        s += ',';
        s += g9(sim.control_bw[i] / (kTwoPi * 1e6));
        s += '\n';
    }
    return s;
}

namespace {

std::string spectrum_csv(const ScenarioOutcome& out) {
    std::string s = "delta_mhz,two_level_transmission,eit_transmission\n";
    for (std::size_t i = 0; i < out.spec_delta.size(); ++i) {
        s += g9(out.spec_delta[i] / (kTwoPi * 1e6));
        s += ',';
        s += g9(out.spec_two_level[i]);
        s += ',';
        s += g9(out.spec_eit[i]);
        s += '\n';
    }
    return s;
}

std::string fringe_csv(const std::vector<FringePoint>& fringe) {
    std::string s = "delta_phi_rad,integrated_intensity\n";
    for (const auto& p : fringe) {
        s += g9(p.phase);
        s += ',';
        s += g9(p.intensity);
        s += '\n';
    }
    return s;
}

std::string combined_csv(const CombinedTrace& c) {
    std::string s = "t_us,port_plus,port_minus\n";
    for (std::size_t i = 0; i < c.time.size(); ++i) {
        s += g9(1e6 * c.time[i]);
        s += ',';
        s += g9(c.port_plus[i]);
        s += ',';
        s += g9(c.port_minus[i]);
        s += '\n';
    }
    return s;
}

// Wide format: header row is t_us followed by the z positions in mm; each
// data row is one time sample.
std::string map_csv(const SpacetimeMap& map) {
    std::string s = "t_us";
    for (double z : map.z) {
        s += ',';
        s += g9(1e3 * z);
    }
    s += '\n';
    for (std::size_t it = 0; it < map.t.size(); ++it) {
        s += g9(1e6 * map.t[it]);
        for (std::size_t iz = 0; iz < map.z.size(); ++iz) {
            s += ',';
            s += g9(map.at(it, iz));
        }
        s += '\n';
    }
    return s;
}

void write_file(const std::filesystem::path& p, const std::string& content,
                std::vector<std::string>& written) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ConfigError("cannot write output file: " + p.string());
    f << content;
    written.push_back(p.string());
}

// Heatmap inputs: x = t in us, y = z in mm, values with x fastest.
void scaled_units(const SpacetimeMap& map, std::vector<double>& t_us,
                  std::vector<double>& z_mm, std::vector<double>& transposed) {
    t_us.resize(map.t.size());
    for (std::size_t i = 0; i < map.t.size(); ++i) t_us[i] = 1e6 * map.t[i];
    z_mm.resize(map.z.size());
    for (std::size_t i = 0; i < map.z.size(); ++i) z_mm[i] = 1e3 * map.z[i];
    transposed.resize(map.t.size() * map.z.size());
    for (std::size_t iz = 0; iz < map.z.size(); ++iz)
        for (std::size_t it = 0; it < map.t.size(); ++it)
            transposed[iz * map.t.size() + it] = map.at(it, iz);
}

} // namespace

std::string summary_text(const ScenarioOutcome& out) {
    std::ostringstream s;
    s << "name = " << out.name << "\n";
    s << "mode = " << out.config.analysis.mode << "\n";
    if (out.config.analysis.mode == "spectrum") {
        const MediumParams medium = build_medium(out.config);
        const double omega_c = kTwoPi * 1e6 * out.config.analysis.spectrum_rabi_mhz;
        s << "two_level_transmission_resonance = " << g9(two_level_transmission(0.0, medium))
          << "\n";
        s << "eit_transmission_resonance = " << g9(eit_transmission(0.0, omega_c, medium))
          << "\n";
        if (omega_c > 0.0)
            s << "group_delay_us = " << g9(1e6 * group_delay(omega_c, medium)) << "\n";
    }
    if (out.sim) {
        const SimResult& sim = *out.sim;
        const EnergyLedger& l = sim.ledger;
        s << "input = " << g9(l.input) << "\n";
        s << "leaked = " << g9(l.leaked) << "\n";
        s << "retrieved_fw = " << g9(l.retrieved_fw) << "\n";
        s << "retrieved_bw = " << g9(l.retrieved_bw) << "\n";
        s << "dissipated = " << g9(l.dissipated) << "\n";
        if (l.input > 0.0) {
            const double closure =
                std::abs(l.input - l.leaked - l.retrieved_fw - l.retrieved_bw - l.dissipated) /
                l.input;
            s << "ledger_closure_rel = " << g9(closure) << "\n";
            s << "leaked_frac = " << g9(l.leaked / l.input) << "\n";
        }
        if (sim.storage_interval) {
            s << "storage_start_us = " << g9(1e6 * sim.storage_interval->first) << "\n";
            s << "storage_end_us = " << g9(1e6 * sim.storage_interval->second) << "\n";
        }
        if (sim.retrieval_start)
            s << "retrieval_start_us = " << g9(1e6 * *sim.retrieval_start) << "\n";
        if (out.efficiency) s << "efficiency = " << g9(*out.efficiency) << "\n";
        if (out.ratio) {
            s << "r_fw = " << g9(out.ratio->fw) << "\n";
            s << "r_bw = " << g9(out.ratio->bw) << "\n";
        }
        if (out.fringe_fit) {
            s << "visibility = " << g9(out.fringe_fit->visibility) << "\n";
            s << "fringe_offset = " << g9(out.fringe_fit->offset) << "\n";
            s << "fringe_amplitude = " << g9(out.fringe_fit->amplitude) << "\n";
            s << "fringe_phase_rad = " << g9(out.fringe_fit->phase) << "\n";
        }
        if (out.beat_requested)
            s << "beat_period_us = "
              << (out.beat_period_s ? g9(1e6 * *out.beat_period_s) : std::string("none"))
              << "\n";
        if (out.convergence_max_delta) {
            s << "convergence_max_delta = " << g9(*out.convergence_max_delta) << "\n";
            s << "convergence = " << (*out.convergence_pass ? "pass" : "fail") << "\n";
        } else {
            s << "convergence = unchecked\n";
        }
    }
    s << "\n--- resolved config ---\n" << serialize_config(out.config);
    return s.str();
}

std::vector<std::string> emit_scenario(const ScenarioOutcome& out, const std::string& out_root) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::path(out_root) / out.name;
    fs::create_directories(dir);
    std::vector<std::string> written;

    // Data tables first; plots afterwards so they can never gate the data.
    if (out.config.analysis.mode == "spectrum") {
        write_file(dir / "spectrum.csv", spectrum_csv(out), written);
    } else if (out.sim) {
        write_file(dir / "trace.csv", trace_csv(*out.sim), written);
        if (!out.fringe.empty()) write_file(dir / "fringe.csv", fringe_csv(out.fringe), written);
        if (out.combined) write_file(dir / "combined.csv", combined_csv(*out.combined), written);
        if (out.sim->field_map)
            write_file(dir / "field_map.csv", map_csv(*out.sim->field_map), written);
        if (out.sim->spin_map)
            write_file(dir / "spin_map.csv", map_csv(*out.sim->spin_map), written);
    }
    write_file(dir / "summary.txt", summary_text(out), written);

    if (!out.config.output.plots) return written;

    if (out.config.analysis.mode == "spectrum") {
        std::vector<double> delta_mhz(out.spec_delta.size());
        for (std::size_t i = 0; i < out.spec_delta.size(); ++i)
            delta_mhz[i] = out.spec_delta[i] / (kTwoPi * 1e6);
        write_file(dir / "spectrum.svg",
                   line_chart_svg("transmission spectra", "detuning (MHz)", "transmission",
                                  delta_mhz,
                                  {{"two-level", "#b40426", out.spec_two_level},
                                   {"EIT", "#3b4cc0", out.spec_eit}}),
                   written);
    } else if (out.sim) {
        const SimResult& sim = *out.sim;
        std::vector<double> t_us(sim.time.size());
        for (std::size_t i = 0; i < sim.time.size(); ++i) t_us[i] = 1e6 * sim.time[i];
        std::vector<double> cf(sim.control_fw.size()), cb(sim.control_bw.size());
        double top = 0.0;
        const auto fw_i = sim.fw_out();
        const auto bw_i = sim.bw_out();
        for (double v : fw_i) top = std::max(top, v);
        for (double v : bw_i) top = std::max(top, v);
        double ctop = 0.0;
        for (double v : sim.control_fw) ctop = std::max(ctop, v);
        for (double v : sim.control_bw) ctop = std::max(ctop, v);
        const double cs = ctop > 0.0 ? (top > 0.0 ? top : 1.0) / ctop : 1.0;
        for (std::size_t i = 0; i < cf.size(); ++i) cf[i] = cs * sim.control_fw[i];
        for (std::size_t i = 0; i < cb.size(); ++i) cb[i] = cs * sim.control_bw[i];
        write_file(dir / "trace.svg",
                   line_chart_svg("exit-face intensities", "t (us)", "intensity (input peak = 1)",
                                  t_us,
                                  {{"FW output", "#3b4cc0", fw_i},
                                   {"BW output", "#2ca02c", bw_i},
                                   {"FW control (scaled)", "#d62728", cf},
                                   {"BW control (scaled)", "#ff9e4a", cb}}),
                   written);
        if (!out.fringe.empty()) {
            std::vector<double> px, py;
            for (const auto& p : out.fringe) {
                px.push_back(p.phase);
                py.push_back(p.intensity);
            }
            write_file(dir / "fringe.svg",
                       line_chart_svg("combiner fringe", "delta_phi (rad)",
                                      "integrated intensity", px, {{"fringe", "#3b4cc0", py}}),
                       written);
        }
        if (out.combined) {
            std::vector<double> ct(out.combined->time.size());
            for (std::size_t i = 0; i < ct.size(); ++i) ct[i] = 1e6 * out.combined->time[i];
            write_file(dir / "combined.svg",
                       line_chart_svg("combined output", "t (us)", "intensity", ct,
                                      {{"port+", "#3b4cc0", out.combined->port_plus},
                                       {"port-", "#b40426", out.combined->port_minus}}),
                       written);
        }
        if (sim.field_map) {
            std::vector<double> tu, zm, v;
            scaled_units(*sim.field_map, tu, zm, v);
            write_file(dir / "field_map.svg",
                       heatmap_svg("|e_f|^2 + |e_b|^2", "t (us)", "z (mm)", tu, zm, v), written);
        }
        if (sim.spin_map) {
            std::vector<double> tu, zm, v;
            scaled_units(*sim.spin_map, tu, zm, v);
            write_file(dir / "spin_map.svg",
                       heatmap_svg("|s|^2", "t (us)", "z (mm)", tu, zm, v), written);
        }
    }
    return written;
}

SweepTable sweep(const ScenarioConfig& base, const std::string& param,
                 const std::vector<double>& values) {
    SweepTable table;
    table.param = param;
    if (!values.empty()) {
        // Surface bad paths before spending time on runs.
        ScenarioConfig probe_cfg = base;
        set_param(probe_cfg, param, values.front());
    }
    for (double v : values) {
        ScenarioConfig cfg = base;
        set_param(cfg, param, v);
        validate_config(cfg);
        const SimResult sim = run_storage(cfg, false);
        SweepRow row;
        row.value = v;
        if (sim.storage_interval && sim.ledger.input > 0.0)
            row.efficiency = storage_efficiency(sim);
        if (sim.ledger.retrieved_fw + sim.ledger.retrieved_bw > 0.0)
            row.ratio = splitting_ratio(sim);
        row.leaked_frac = sim.ledger.input > 0.0 ? sim.ledger.leaked / sim.ledger.input : 0.0;
        table.rows.push_back(row);
    }
    return table;
}

std::string sweep_csv(const SweepTable& table) {
    std::string s = "value,efficiency,r_fw,r_bw,leaked_frac\n";
    for (const auto& r : table.rows) {
        s += g9(r.value);
        s += ',';
        s += r.efficiency ? g9(*r.efficiency) : std::string();
        s += ',';
        s += r.ratio ? g9(r.ratio->fw) : std::string();
        s += ',';
        s += r.ratio ? g9(r.ratio->bw) : std::string();
        s += ',';
        s += g9(r.leaked_frac);
        s += '\n';
    }
    return s;
}

std::vector<std::string> emit_sweep(const SweepTable& table, const std::string& out_root,
                                    const std::string& name) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::path(out_root) / name;
    fs::create_directories(dir);
    std::vector<std::string> written;
    std::string head = "# param = " + table.param + "\n";
    write_file(dir / "sweep.csv", head + sweep_csv(table), written);
    return written;
}

} // namespace coldsplit
