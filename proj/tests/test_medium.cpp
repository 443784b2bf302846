#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "coldsplit/medium.hpp"

using namespace coldsplit;

namespace {

constexpr double TWO_PI = 2.0 * M_PI;

MediumParams reference_medium(double od = 21.0) {
    return {od, TWO_PI * 5.8e6, TWO_PI * 3.8e3, 0.01};
}

// Phase of the field transfer exp(i*(od/2)*chi).
double transfer_phase(double delta, double omega_c, const MediumParams& m) {
    return 0.5 * m.od * eit_susceptibility(delta, omega_c, m).value.real();
}

} // namespace

TEST_CASE("on-resonance two-level transmission is exp(-od)") {
    for (double od : {1.0, 21.0, 100.0}) {
        const auto m = reference_medium(od);
        CHECK(two_level_transmission(0.0, m) == doctest::Approx(std::exp(-od)).epsilon(1e-12));
    }
}

TEST_CASE("two-level line: half absorption at delta = gamma/2, even, monotone") {
    const auto m = reference_medium();
    const double hw = 0.5 * m.gamma;
    CHECK(two_level_transmission(hw, m) == doctest::Approx(std::exp(-0.5 * m.od)).epsilon(1e-12));
    CHECK(two_level_transmission(-hw, m) == doctest::Approx(std::exp(-0.5 * m.od)).epsilon(1e-12));
    double prev = two_level_transmission(0.0, m);
    for (int k = 1; k <= 40; ++k) {
        const double d = k * 0.25 * hw;
        const double t = two_level_transmission(d, m);
        CHECK(t == doctest::Approx(two_level_transmission(-d, m)).epsilon(1e-14));
        CHECK(t > prev);       // transmission grows away from the line
        CHECK(t > 0.0);
        CHECK(t <= 1.0);
        prev = t;
    }
}

TEST_CASE("eit susceptibility reduces to the two-level line at omega_c = 0") {
    const auto m = reference_medium();
    for (int k = -20; k <= 20; ++k) {
        const double d = k * 0.1 * m.gamma;
        CHECK(eit_transmission(d, 0.0, m) ==
              doctest::Approx(two_level_transmission(d, m)).epsilon(1e-12));
    }
}

TEST_CASE("eit transparency oracle at the reference operating point") {
    // independently computed value for od=21, Gamma=2pi*5.8 MHz,
    // gamma_gs=2pi*3.8 kHz, Omega_c=2pi*5.8 MHz
    const auto m = reference_medium();
    CHECK(eit_transmission(0.0, TWO_PI * 5.8e6, m) ==
          doctest::Approx(0.9728929421332360).epsilon(1e-9));
}

TEST_CASE("group delay oracle and its gamma_gs -> 0 limit") {
    const auto m = reference_medium();
    const double wc = TWO_PI * 5.8e6;
    CHECK(group_delay(wc, m) == doctest::Approx(5.747424581486383e-7).epsilon(1e-9));

    auto ideal = m;
    ideal.gamma_gs = 0.0;
    CHECK(group_delay(wc, ideal) ==
          doctest::Approx(m.od * m.gamma / (wc * wc)).epsilon(1e-12));
}

TEST_CASE("group delay equals the finite-difference phase slope of the transfer") {
    // d(phase)/d(delta) at line center, central difference with h = 1 rad/s
    for (double od : {1.0, 21.0, 100.0}) {
        const auto m = reference_medium(od);
        for (double ratio : {0.2, 1.0, 5.0}) {
            const double wc = ratio * m.gamma;
            const double h = 1.0;
            const double slope =
                (transfer_phase(h, wc, m) - transfer_phase(-h, wc, m)) / (2.0 * h);
            CHECK(group_delay(wc, m) == doctest::Approx(slope).epsilon(1e-2));
        }
    }
}

TEST_CASE("susceptibility is passive and stores its detuning") {
    const auto m = reference_medium();
    for (double wc : {0.0, TWO_PI * 2e6, TWO_PI * 5.8e6, TWO_PI * 20e6}) {
        for (int k = -30; k <= 30; ++k) {
            const double d = k * 0.2 * m.gamma;
            const auto chi = eit_susceptibility(d, wc, m);
            CHECK(chi.detuning == d);
            CHECK(chi.value.imag() >= 0.0);  // absorption never negative
        }
    }
}

TEST_CASE("eit window deepens with control power") {
    const auto m = reference_medium();
    double prev = two_level_transmission(0.0, m);
    for (double mhz : {1.0, 2.0, 4.0, 8.0, 16.0}) {
        const double t = eit_transmission(0.0, TWO_PI * mhz * 1e6, m);
        CHECK(t > prev);
        prev = t;
    }
    CHECK(prev < 1.0);
}

TEST_CASE("coupling product matches the od normalization") {
    const auto m = reference_medium();
    CHECK(m.coupling_product() == m.od * m.gamma / (4.0 * m.length));
}

TEST_CASE("parameter validation") {
    auto m = reference_medium();
    CHECK_NOTHROW(m.validate());
    m.od = 0.0;
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
    m = reference_medium();
    m.gamma = -1.0;
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
    m = reference_medium();
    m.gamma_gs = -1.0;
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
    m = reference_medium();
    m.length = 0.0;
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
    CHECK_THROWS_AS(group_delay(0.0, reference_medium()), std::invalid_argument);
    CHECK_THROWS_AS(eit_susceptibility(0.0, -1.0, reference_medium()), std::invalid_argument);
}
