#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "coldsplit/config.hpp"
#include "coldsplit/errors.hpp"
#include "coldsplit/scenario.hpp"

using namespace coldsplit;
namespace fs = std::filesystem;

namespace {

constexpr double TWO_PI = 2.0 * M_PI;

std::size_t resonance_index(const ScenarioOutcome& out) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < out.spec_delta.size(); ++i)
        if (std::abs(out.spec_delta[i]) < std::abs(out.spec_delta[best])) best = i;
    return best;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("coldsplit-test-" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("spectrum preset hits the line-shape oracles") {
    const auto out = compute_scenario("eit-spectrum", preset_config("eit-spectrum"));
    REQUIRE(out.spec_delta.size() == 1201);
    REQUIRE(out.spec_two_level.size() == out.spec_delta.size());
    REQUIRE(out.spec_eit.size() == out.spec_delta.size());
    CHECK_FALSE(out.sim.has_value());

    const auto i0 = resonance_index(out);
    CHECK(out.spec_delta[i0] == 0.0);
    CHECK(out.spec_two_level[i0] == doctest::Approx(std::exp(-21.0)).epsilon(1e-9));
    CHECK(out.spec_eit[i0] == doctest::Approx(0.9728929421332360).epsilon(1e-9));
    // span covers +-15 MHz
    CHECK(out.spec_delta.front() == doctest::Approx(-TWO_PI * 15e6).epsilon(1e-12));
    CHECK(out.spec_delta.back() == doctest::Approx(TWO_PI * 15e6).epsilon(1e-12));
}

TEST_CASE("paired-control preset lands close to an even split") {
    const auto out = compute_scenario("fig2b", preset_config("fig2b"));
    REQUIRE(out.ratio.has_value());
    CHECK(out.ratio->fw > 0.45);
    CHECK(out.ratio->fw < 0.55);
    REQUIRE(out.efficiency.has_value());
    CHECK(*out.efficiency > 0.05);
    CHECK(*out.efficiency < 0.5);
    REQUIRE(out.sim.has_value());
    // dark interval matches the programmed gap
    REQUIRE(out.sim->storage_interval.has_value());
    CHECK(out.sim->storage_interval->first == doctest::Approx(2.05e-6).epsilon(1e-12));
    CHECK(out.sim->storage_interval->second == doctest::Approx(3.98e-6).epsilon(1e-12));
}

TEST_CASE("scenario outputs are deterministic byte for byte") {
    const auto a = compute_scenario("fig2a", preset_config("fig2a"));
    const auto b = compute_scenario("fig2a", preset_config("fig2a"));
    CHECK(trace_csv(*a.sim) == trace_csv(*b.sim));
    CHECK(summary_text(a) == summary_text(b));
}

TEST_CASE("stored spin wave stays put during the dark interval") {
    const auto out = compute_scenario("fig3", preset_config("fig3"));
    REQUIRE(out.sim.has_value());
    REQUIRE(out.sim->spin_map.has_value());
    const auto& sm = *out.sim->spin_map;
    const double length = 0.01;

    double first_centroid = -1.0, prev_total = -1.0;
    for (std::size_t it = 0; it < sm.t.size(); ++it) {
        if (sm.t[it] < 2.6e-6 || sm.t[it] > 4.3e-6) continue;
        double tot = 0.0, mom = 0.0;
        for (std::size_t iz = 0; iz < sm.z.size(); ++iz) {
            tot += sm.at(it, iz);
            mom += sm.z[iz] * sm.at(it, iz);
        }
        const double cen = mom / tot;
        if (first_centroid < 0.0) {
            first_centroid = cen;
        } else {
            CHECK(std::abs(cen - first_centroid) < 0.01 * length);
            CHECK(tot < prev_total);  // only gamma_gs decay acts
        }
        prev_total = tot;
    }
    CHECK(first_centroid > 0.0);
}

TEST_CASE("sweep rows reproduce individual runs in order") {
    const auto base = preset_config("fig2a");
    const std::vector<double> centers{1.2, 1.3};
    const auto table = sweep(base, "probe.center_us", centers);
    CHECK(table.param == "probe.center_us");
    REQUIRE(table.rows.size() == 2);
    for (std::size_t i = 0; i < centers.size(); ++i) {
        auto cfg = base;
        set_param(cfg, "probe.center_us", centers[i]);
        const auto solo = compute_scenario("solo", cfg);
        CHECK(table.rows[i].value == centers[i]);
        REQUIRE(table.rows[i].efficiency.has_value());
        CHECK(*table.rows[i].efficiency == doctest::Approx(*solo.efficiency).epsilon(1e-12));
    }

    CHECK_THROWS_AS(sweep(base, "probe.nonsense", {1.0}), ConfigError);

    const auto empty = sweep(base, "probe.center_us", {});
    CHECK(empty.rows.empty());
    CHECK(sweep_csv(empty) == "value,efficiency,r_fw,r_bw,leaked_frac\n");
}

TEST_CASE("emit_scenario writes the data tables") {
    TempDir tmp;
    const auto out = compute_scenario("fig2a", preset_config("fig2a"));
    const auto written = emit_scenario(out, tmp.path.string());
    CHECK_FALSE(written.empty());
    CHECK(fs::exists(tmp.path / "fig2a" / "trace.csv"));
    CHECK(fs::exists(tmp.path / "fig2a" / "summary.txt"));

    const auto trace = slurp(tmp.path / "fig2a" / "trace.csv");
    CHECK(trace.rfind("t_us,fw_intensity,bw_intensity,fw_phase,bw_phase,control_fw,control_bw\n",
                      0) == 0);
    const auto summary = slurp(tmp.path / "fig2a" / "summary.txt");
    CHECK(summary.find("efficiency = ") != std::string::npos);
    CHECK(summary.find("r_fw = ") != std::string::npos);
    CHECK(summary.find("ledger_closure_rel = ") != std::string::npos);
    CHECK(summary.find("--- resolved config ---") != std::string::npos);

    const auto spec = compute_scenario("eit-spectrum", preset_config("eit-spectrum"));
    emit_scenario(spec, tmp.path.string());
    const auto spectrum = slurp(tmp.path / "eit-spectrum" / "spectrum.csv");
    CHECK(spectrum.rfind("delta_mhz,two_level_transmission,eit_transmission\n", 0) == 0);
}

TEST_CASE("fringe and beat plumbing through the scenario layer") {
    // detuned backward control: the combined trace beats at 2pi/delta
    auto cfg = preset_config("fig4b");
    const auto out = compute_scenario("fig4b", cfg);
    CHECK(out.beat_requested);
    REQUIRE(out.beat_period_s.has_value());
    CHECK(*out.beat_period_s == doctest::Approx(1e-6).epsilon(1e-2));
    REQUIRE(out.combined.has_value());
    CHECK(out.combined->time.size() == out.sim->time.size());
    // time axis is the simulation clock, not a default-constructed zero fill
    CHECK(out.combined->time.back() == doctest::Approx(12e-6).epsilon(1e-12));

    // an explicit analysis window is honored
    auto windowed = cfg;
    windowed.analysis.window_start_us = 4.6;
    windowed.analysis.window_end_us = 9.0;
    const auto wout = compute_scenario("fig4b", windowed);
    REQUIRE(wout.beat_period_s.has_value());
    CHECK(*wout.beat_period_s == doctest::Approx(1e-6).epsilon(1e-2));

    // summary advertises the beat
    const auto summary = summary_text(out);
    CHECK(summary.find("beat_period_us = 1.000") != std::string::npos);
}

TEST_CASE("refinement check passes on a reduced-grid scenario") {
    auto cfg = preset_config("fig2a");
    cfg.grid.nz = 96;
    cfg.grid.nt = 4001;
    cfg.output.convergence_check = true;
    const auto out = compute_scenario("fig2a-small", cfg);
    REQUIRE(out.convergence_pass.has_value());
    CHECK(*out.convergence_pass);
    REQUIRE(out.convergence_max_delta.has_value());
    CHECK(*out.convergence_max_delta < 0.01);
}
