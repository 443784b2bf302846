#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coldsplit/analysis.hpp"
#include "coldsplit/config.hpp"

namespace coldsplit {

// Everything a scenario run produces, before any file is written.
struct ScenarioOutcome {
    std::string name;
    ScenarioConfig config;  // exact resolved config used
    std::optional<SimResult> sim;
    std::optional<double> efficiency;
    std::optional<SplitRatio> ratio;
    std::vector<FringePoint> fringe;
    std::optional<FringeFit> fringe_fit;
    std::optional<CombinedTrace> combined;
    std::optional<double> beat_period_s;
    bool beat_requested = false;
    // spectrum mode
    std::vector<double> spec_delta;  // rad/s
    std::vector<double> spec_two_level, spec_eit;
    // refinement check (doubled grid) when requested
    std::optional<double> convergence_max_delta;
    std::optional<bool> convergence_pass;
};

// Run the scenario described by cfg (storage or spectrum mode). Throws
// ConfigError / NumericError; never touches the filesystem.
ScenarioOutcome compute_scenario(const std::string& name, const ScenarioConfig& cfg);

// Write data tables (and plots when enabled — plots never gate data) under
// out_root/<name>/. Returns the paths written.
std::vector<std::string> emit_scenario(const ScenarioOutcome& out, const std::string& out_root);

// Data-table renderers, deterministic for fixed inputs.
std::string trace_csv(const SimResult& sim);
std::string summary_text(const ScenarioOutcome& out);

struct SweepRow {
    double value = 0.0;
    std::optional<double> efficiency;
    std::optional<SplitRatio> ratio;
    double leaked_frac = 0.0;
};

struct SweepTable {
    std::string param;
    std::vector<SweepRow> rows;
};

// One run per value of the dotted parameter path, base config otherwise
// unchanged. Ordered like `values`; empty `values` gives an empty table.
SweepTable sweep(const ScenarioConfig& base, const std::string& param,
                 const std::vector<double>& values);
std::string sweep_csv(const SweepTable& table);
std::vector<std::string> emit_sweep(const SweepTable& table, const std::string& out_root,
                                    const std::string& name);

} // namespace coldsplit
