#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coldsplit/medium.hpp"
#include "coldsplit/schedule.hpp"
#include "coldsplit/solver.hpp"

namespace coldsplit {

// Scenario configuration, mirroring the config-file schema field for field.
// Values are stored in the file's units (MHz, kHz, mm, us — the unit is part
// of the key name) and converted to SI only by the build_* functions, so a
// parse -> serialize -> parse round trip is lossless.

struct MediumConfig {
    double od = 21.0;
    double gamma_mhz = 5.8;      // full Gamma / 2pi
    double gamma_gs_khz = 3.8;   // gamma_gs / 2pi
    double length_mm = 10.0;
    bool operator==(const MediumConfig&) const = default;
};

struct ProbeConfig {
    double peak = 1.0;  // envelope units; presets keep 1 so traces are
                        // normalized to input peak intensity 1
    double center_us = 1.3;
    double fwhm_us = 1.0;
    bool operator==(const ProbeConfig&) const = default;
};

struct GridConfig {
    int nz = 256;
    int nt = 8001;
    double t_end_us = 8.0;
    bool operator==(const GridConfig&) const = default;
};

struct SegmentConfig {
    double start_us = 0.0;
    double end_us = 0.0;
    double rabi_mhz = 0.0;  // full Rabi / 2pi
    double phase_rad = 0.0;
    double ramp_us = 0.1;   // smoothstep edge; 0 = instant
    bool operator==(const SegmentConfig&) const = default;
};

struct ControlConfig {
    double detuning_mhz = 0.0;
    std::vector<SegmentConfig> segments;
    bool operator==(const ControlConfig&) const = default;
};

struct AnalysisConfig {
    std::string mode = "storage";  // storage | spectrum
    bool fringe = false;
    int fringe_settings = 12;
    double delta_phi_rad = 0.0;  // combiner phase for the beat trace
    bool beat = false;
    // Integration window for fringe/beat; absent = from retrieval start to
    // the end of the run ("auto" in the file).
    std::optional<double> window_start_us, window_end_us;
    double spectrum_rabi_mhz = 5.8;
    double spectrum_span_mhz = 15.0;
    int spectrum_points = 1201;
    bool operator==(const AnalysisConfig&) const = default;
};

struct OutputConfig {
    std::string dir = "out";
    bool plots = true;
    bool field_map = false;
    bool spin_map = false;
    int map_stride = 8;
    bool convergence_check = false;
    bool operator==(const OutputConfig&) const = default;
};

struct ScenarioConfig {
    MediumConfig medium;
    ProbeConfig probe;
    GridConfig grid;
    ControlConfig fw, bw;
    AnalysisConfig analysis;
    OutputConfig output;
    bool operator==(const ScenarioConfig&) const = default;
};

// Parse the key/value text format. `origin` names the source in
// diagnostics; errors carry "origin:line: message" and throw ConfigError.
ScenarioConfig parse_config(const std::string& text, const std::string& origin = "config");
ScenarioConfig load_config(const std::string& path);
std::string serialize_config(const ScenarioConfig& cfg);

// SI-unit domain objects. Validation failures surface as ConfigError.
MediumParams build_medium(const ScenarioConfig& cfg);
ProbePulse build_probe(const ScenarioConfig& cfg);
Grid build_grid(const ScenarioConfig& cfg);
ControlSchedule build_control(const ControlConfig& cc);
// Builds everything and runs the domain validators (grid stability check
// excluded — that stays with the solver).
void validate_config(const ScenarioConfig& cfg);

// Scalar parameter access by dotted path (e.g. "medium.od",
// "control.bw.segment.1.rabi_mhz", "grid.nz"). Unknown or non-scalar paths
// throw ConfigError.
double get_param(const ScenarioConfig& cfg, const std::string& path);
void set_param(ScenarioConfig& cfg, const std::string& path, double value);

// Built-in scenarios.
struct Preset {
    std::string name;
    std::string summary;
};
std::vector<Preset> list_presets();
bool is_preset(const std::string& name);
ScenarioConfig preset_config(const std::string& name);  // throws ConfigError

} // namespace coldsplit
