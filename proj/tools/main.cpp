#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coldsplit/errors.hpp"
#include "coldsplit/scenario.hpp"

namespace {

using namespace coldsplit;

// Presets run by name; anything else is a config file path.
ScenarioConfig resolve_config(const std::string& arg, std::string& name) {
    if (is_preset(arg)) {
        name = arg;
        return preset_config(arg);
    }
    if (!std::filesystem::exists(arg))
        throw ConfigError("unknown preset or missing config file: " + arg);
    name = std::filesystem::path(arg).stem().string();
    return load_config(arg);
}

std::string output_root(const ScenarioConfig& cfg, const std::string& cli_out) {
    if (!cli_out.empty()) return cli_out;
    if (const char* env = std::getenv("COLDSPLIT_OUT_ROOT"); env && *env) return env;
    return cfg.output.dir;
}

std::vector<double> parse_values(const std::vector<std::string>& raw) {
    std::vector<double> out;
    for (const auto& chunk : raw) {
        std::size_t pos = 0;
        while (pos <= chunk.size()) {
            const auto comma = chunk.find(',', pos);
            const std::string tok = chunk.substr(
                pos, comma == std::string::npos ? std::string::npos : comma - pos);
            if (!tok.empty()) {
                char* end = nullptr;
                const double v = std::strtod(tok.c_str(), &end);
                if (end != tok.c_str() + tok.size())
                    throw ConfigError("invalid sweep value: " + tok);
                out.push_back(v);
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    return out;
}

int run_main(int argc, char** argv) {
    CLI::App app{"EIT light-storage beam-splitter simulator"};
    app.require_subcommand(1);

    std::string run_target, run_out;
    bool run_no_plots = false;
    auto* cmd_run = app.add_subcommand("run", "run a preset or config file");
    cmd_run->add_option("scenario", run_target, "preset name or config path")->required();
    cmd_run->add_option("--out", run_out, "output root directory (overrides config)");
    cmd_run->add_flag("--no-plots", run_no_plots, "emit data tables only");

    std::string sweep_target, sweep_param, sweep_out;
    std::vector<std::string> sweep_values;
    auto* cmd_sweep = app.add_subcommand("sweep", "run one scenario per parameter value");
    cmd_sweep->add_option("scenario", sweep_target, "preset name or config path")->required();
    cmd_sweep->add_option("--param", sweep_param, "dotted parameter path")->required();
    cmd_sweep->add_option("--values", sweep_values, "comma-separated values")
        ->required()
        ->expected(-1);
    cmd_sweep->add_option("--out", sweep_out, "output root directory (overrides config)");

    auto* cmd_list = app.add_subcommand("list-presets", "list built-in scenarios");

    std::string validate_target;
    auto* cmd_validate = app.add_subcommand("validate", "check a config file");
    cmd_validate->add_option("config", validate_target, "config path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage problems are config errors
    }

    if (cmd_list->parsed()) {
        for (const auto& p : list_presets())
            std::cout << p.name << "  " << p.summary << "\n";
        return 0;
    }
    if (cmd_validate->parsed()) {
        std::string name;
        const ScenarioConfig cfg = resolve_config(validate_target, name);
        validate_config(cfg);
        if (cfg.analysis.mode == "storage")
            build_grid(cfg).validate(build_medium(cfg), build_control(cfg.fw),
                                     build_control(cfg.bw));
        std::cout << "ok: " << validate_target << "\n";
        return 0;
    }
    if (cmd_run->parsed()) {
        std::string name;
        ScenarioConfig cfg = resolve_config(run_target, name);
        if (run_no_plots) cfg.output.plots = false;
        const ScenarioOutcome out = compute_scenario(name, cfg);
        const auto files = emit_scenario(out, output_root(cfg, run_out));
        for (const auto& f : files) std::cout << f << "\n";
        return 0;
    }
    if (cmd_sweep->parsed()) {
        std::string name;
        const ScenarioConfig cfg = resolve_config(sweep_target, name);
        const SweepTable table = sweep(cfg, sweep_param, parse_values(sweep_values));
        const auto files = emit_sweep(table, output_root(cfg, sweep_out), name + "-sweep");
        for (const auto& f : files) std::cout << f << "\n";
        return 0;
    }
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_main(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 2;
    }
}
