#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "coldsplit/analysis.hpp"

using namespace coldsplit;
using cplx = std::complex<double>;

namespace {

constexpr double TWO_PI = 2.0 * M_PI;

// Integer-valued doubles in a small range: +, - and the conservation sums
// stay exact in binary, so the identities can be checked bitwise.
Vec3 lattice_vec(std::mt19937& rng) {
    std::uniform_int_distribution<int> d(-8, 8);
    return {double(d(rng)), double(d(rng)), double(d(rng))};
}

std::vector<double> time_axis(std::size_t n, double dt) {
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = i * dt;
    return t;
}

std::vector<cplx> gaussian_trace(const std::vector<double>& t, double amp,
                                 double center, double width) {
    std::vector<cplx> v(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double u = (t[i] - center) / width;
        v[i] = amp * std::exp(-u * u);
    }
    return v;
}

} // namespace

TEST_CASE("vector geometry: angles at the axes and near zero") {
    CHECK(angle_between({1, 0, 0}, {0, 1, 0}) == doctest::Approx(M_PI_2).epsilon(1e-15));
    CHECK(angle_between({2, 0, 0}, {5, 0, 0}) == 0.0);
    CHECK(angle_between({1, 0, 0}, {-3, 0, 0}) == doctest::Approx(M_PI).epsilon(1e-15));
    // atan2 form stays accurate for tiny angles where acos would round to 0
    const double eps = 1e-8;
    CHECK(angle_between({1, 0, 0}, {std::cos(eps), std::sin(eps), 0}) ==
          doctest::Approx(eps).epsilon(1e-6));
    CHECK(norm(Vec3{3, 4, 0}) == 5.0);
    CHECK(dot(Vec3{1, 2, 3}, Vec3{4, 5, 6}) == 32.0);
    CHECK(cross(Vec3{1, 0, 0}, Vec3{0, 1, 0}) == Vec3{0, 0, 1});
}

TEST_CASE("phase matching conserves momentum and energy bitwise on lattice inputs") {
    std::mt19937 rng(414243);
    std::uniform_int_distribution<int> w(-100, 100);
    for (int trial = 0; trial < 10000; ++trial) {
        const Vec3 ks = lattice_vec(rng), kf = lattice_vec(rng), kr = lattice_vec(rng);
        const double ws = w(rng), wf = w(rng), wr = w(rng);
        const auto pm = phase_match(ks, kf, kr, ws, wf, wr);
        CHECK(pm.k_spin + kf == ks);          // writing: k_s = k_spin + k_fwc
        CHECK(pm.k_out == pm.k_spin + kr);    // reading: k_out = k_spin + k_rc
        CHECK(pm.omega_spin + wf == ws);
        CHECK(pm.omega_out == pm.omega_spin + wr);
    }
}

TEST_CASE("phase matching special cases are exact") {
    std::mt19937 rng(515253);
    for (int trial = 0; trial < 1000; ++trial) {
        const Vec3 ks = lattice_vec(rng), kf = lattice_vec(rng);
        // reading with the writing control returns the original direction
        const auto fw = phase_match(ks, kf, kf, 10.0, 3.0, 3.0);
        CHECK(fw.k_out == ks);
        CHECK(fw.omega_out == 10.0);
        CHECK(fw.angle == 0.0);
        // reading with the counter-propagating probe direction mirrors the
        // writing control
        const auto bw = phase_match(ks, kf, -ks, 10.0, 3.0, 3.0);
        CHECK(bw.k_out == -kf);
    }
}

TEST_CASE("combiner ports are lossless and complementary") {
    std::mt19937 rng(616263);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto t = time_axis(257, 1e-9);
    std::vector<cplx> fw(t.size()), bw(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        fw[i] = cplx(u(rng), u(rng));
        bw[i] = cplx(u(rng), u(rng));
    }
    const auto c = combine(t, fw, bw, 0.7, TWO_PI * 1e6);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double total = std::norm(fw[i]) + std::norm(bw[i]);
        CHECK(c.port_plus[i] + c.port_minus[i] == doctest::Approx(total).epsilon(1e-12));
        CHECK(c.port_plus[i] >= 0.0);
        CHECK(c.port_minus[i] >= 0.0);
    }
    std::vector<cplx> bad(t.size() - 1);
    CHECK_THROWS_AS(combine(t, fw, bad, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("fringe visibility follows 2ab/(a^2+b^2) for unbalanced arms") {
    const auto t = time_axis(2001, 4e-9);
    const auto fw = gaussian_trace(t, 1.0, 4e-6, 1e-6);
    struct Case {
        double ratio, want;
    };
    for (const auto& [ratio, want] : {Case{1.0, 1.0}, Case{0.5, 0.8}, Case{0.1, 2.0 * 0.1 / 1.01}}) {
        const auto bw = gaussian_trace(t, ratio, 4e-6, 1e-6);
        const auto pts = fringe_scan(t, fw, bw, 0.0, 0.0, 8e-6, 12);
        REQUIRE(pts.size() == 12);
        const auto fit = fit_fringe(pts);
        CHECK(fit.visibility == doctest::Approx(want).epsilon(1e-3));
        CHECK(visibility(pts) == fit.visibility);
    }
    // one dark arm: flat fringe, zero visibility
    const auto none = gaussian_trace(t, 0.0, 4e-6, 1e-6);
    const auto flat = fit_fringe(fringe_scan(t, fw, none, 0.0, 0.0, 8e-6, 12));
    CHECK(flat.visibility < 1e-12);
}

TEST_CASE("fringe fit recovers a known phase and offset") {
    // synthetic scan points, no traces involved
    for (double phi0 : {0.0, 0.4, -1.2, 2.9}) {
        std::vector<FringePoint> pts;
        for (int k = 0; k < 12; ++k) {
            const double phi = TWO_PI * k / 12;
            pts.push_back({phi, 2.5 + 1.75 * std::cos(phi + phi0)});
        }
        const auto fit = fit_fringe(pts);
        CHECK(fit.offset == doctest::Approx(2.5).epsilon(1e-12));
        CHECK(fit.amplitude == doctest::Approx(1.75).epsilon(1e-12));
        const double dphi = std::remainder(fit.phase - phi0, TWO_PI);
        CHECK(std::abs(dphi) < 1e-12);
        CHECK(fit.visibility == doctest::Approx(0.7).epsilon(1e-12));
    }
    // rotating one arm shifts the fitted phase by the same angle
    const auto t = time_axis(2001, 4e-9);
    const auto fw = gaussian_trace(t, 1.0, 4e-6, 1e-6);
    auto bw = gaussian_trace(t, 0.8, 4e-6, 1e-6);
    const double base = fit_fringe(fringe_scan(t, fw, bw, 0.0, 0.0, 8e-6, 12)).phase;
    for (auto& v : bw) v *= std::polar(1.0, 0.6);
    const double rotated = fit_fringe(fringe_scan(t, fw, bw, 0.0, 0.0, 8e-6, 12)).phase;
    CHECK(std::abs(std::remainder(rotated - base - 0.6, TWO_PI)) < 1e-9);
}

TEST_CASE("fringe fit rejects degenerate inputs") {
    CHECK_THROWS_AS(fit_fringe({}), std::invalid_argument);
    CHECK_THROWS_AS(fit_fringe({{0.0, 1.0}, {1.0, 2.0}}), std::invalid_argument);
    // all-zero intensities: no fringe to normalize by
    std::vector<FringePoint> dark;
    for (int k = 0; k < 12; ++k) dark.push_back({TWO_PI * k / 12, 0.0});
    CHECK_THROWS_AS(fit_fringe(dark), std::invalid_argument);
}

TEST_CASE("beat period from a detuned combine under a varying envelope") {
    const auto t = time_axis(8001, 1e-9);
    const auto fw = gaussian_trace(t, 1.0, 4e-6, 1.5e-6);
    const auto bw = gaussian_trace(t, 0.9, 4e-6, 1.5e-6);
    const double delta = TWO_PI * 2e6;  // 0.5 us beat
    const auto c = combine(t, fw, bw, 0.0, delta);
    const double period = beat_period(c.time, c.port_plus);
    CHECK(period == doctest::Approx(TWO_PI / delta).epsilon(1e-2));

    // pure tone, constant envelope: sub-percent recovery
    std::vector<double> tone(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) tone[i] = 1.0 + std::cos(delta * t[i]);
    CHECK(beat_period(t, tone) == doctest::Approx(TWO_PI / delta).epsilon(1e-3));
}

TEST_CASE("beat detector reports none without oscillation") {
    const auto t = time_axis(8001, 1e-9);
    const auto fw = gaussian_trace(t, 1.0, 4e-6, 1.5e-6);
    const auto bw = gaussian_trace(t, 0.9, 4e-6, 1.5e-6);
    const auto c = combine(t, fw, bw, 0.3, 0.0);  // degenerate carriers
    CHECK_THROWS_AS(beat_period(c.time, c.port_plus), std::invalid_argument);
    CHECK_THROWS_AS(beat_period({0.0, 1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("splitting ratio is an exact complement pair") {
    std::mt19937 rng(717273);
    std::uniform_real_distribution<double> u(1e-12, 1.0);
    for (int trial = 0; trial < 10000; ++trial) {
        SimResult r;
        r.ledger.retrieved_fw = u(rng);
        r.ledger.retrieved_bw = u(rng);
        const auto s = splitting_ratio(r);
        CHECK(s.fw + s.bw == 1.0);  // bitwise
        CHECK(s.fw >= 0.0);
        CHECK(s.bw >= 0.0);
        CHECK(s.fw == doctest::Approx(r.ledger.retrieved_fw /
                                      (r.ledger.retrieved_fw + r.ledger.retrieved_bw))
                          .epsilon(1e-15));
    }
    SimResult empty;
    CHECK_THROWS_AS(splitting_ratio(empty), std::invalid_argument);
}

TEST_CASE("dual-rail state: exact normalization and limiting angles") {
    std::mt19937 rng(818283);
    std::uniform_real_distribution<double> u(1e-6, 5e7);
    for (int trial = 0; trial < 10000; ++trial) {
        const double wf = u(rng), wb = u(rng), p1 = u(rng) * 1e-7, p2 = u(rng) * 1e-7;
        const auto st = dual_rail_state(wf, wb, p1, p2);
        CHECK(st.p_fw + st.p_bw == 1.0);  // bitwise
        CHECK(st.p_fw >= 0.0);
        CHECK(st.p_bw >= 0.0);
        CHECK(std::norm(st.amp_fw) == doctest::Approx(st.p_fw).epsilon(1e-15));
        CHECK(std::norm(st.amp_bw) == doctest::Approx(st.p_bw).epsilon(1e-15));
        CHECK(st.delta_phi == p2 - p1);
        // tan(theta) = omega_fw / omega_bw
        CHECK(std::tan(st.theta) == doctest::Approx(wf / wb).epsilon(1e-12));
    }

    // forward-only, backward-only, balanced
    const auto fw_only = dual_rail_state(2.0e7, 0.0, 0.0, 0.0);
    CHECK(fw_only.theta == doctest::Approx(M_PI_2).epsilon(1e-15));
    CHECK(fw_only.p_fw == 1.0);
    CHECK(fw_only.p_bw == 0.0);

    const auto bw_only = dual_rail_state(0.0, 2.0e7, 0.0, 0.5);
    CHECK(bw_only.theta == 0.0);
    CHECK(bw_only.p_fw == 0.0);
    CHECK(bw_only.p_bw == 1.0);
    CHECK(std::arg(bw_only.amp_bw) == doctest::Approx(0.5).epsilon(1e-15));

    const auto even = dual_rail_state(1.7e7, 1.7e7, 0.1, 0.9);
    CHECK(even.theta == doctest::Approx(M_PI_4).epsilon(1e-15));
    CHECK(even.p_fw == 0.5);
    CHECK(even.p_bw == 0.5);
    CHECK(even.delta_phi == doctest::Approx(0.8).epsilon(1e-15));

    CHECK_THROWS_AS(dual_rail_state(0.0, 0.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(dual_rail_state(-1.0, 1.0, 0.0, 0.0), std::invalid_argument);
}
