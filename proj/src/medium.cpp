#include "coldsplit/medium.hpp"

#include <cmath>
#include <stdexcept>

namespace coldsplit {

using cplx = std::complex<double>;

void MediumParams::validate() const {
    if (!(od > 0.0) || !std::isfinite(od))
        throw std::invalid_argument("medium: od must be > 0");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("medium: gamma must be > 0");
    if (!(gamma_gs >= 0.0) || !std::isfinite(gamma_gs))
        throw std::invalid_argument("medium: gamma_gs must be >= 0");
    if (!(length > 0.0) || !std::isfinite(length))
        throw std::invalid_argument("medium: length must be > 0");
}

double two_level_transmission(double delta, const MediumParams& medium) {
    const double hw = 0.5 * medium.gamma;
    return std::exp(-medium.od * hw * hw / (delta * delta + hw * hw));
}

Susceptibility eit_susceptibility(double delta, double omega_c, const MediumParams& medium) {
    if (omega_c < 0.0)
        throw std::invalid_argument("eit_susceptibility: omega_c must be >= 0");
    const double hw = 0.5 * medium.gamma;
    const cplx i(0.0, 1.0);
    cplx chi;
    if (omega_c == 0.0) {
        // two-level reduction; the (gamma_gs - i*delta) factor cancels
        chi = i * hw / (cplx(hw, -delta));
    } else {
        const cplx gs(medium.gamma_gs, -delta);
        const cplx denom = cplx(hw, -delta) * gs + 0.25 * omega_c * omega_c;
        chi = i * hw * gs / denom;
    }
    return Susceptibility{delta, chi};
}

double eit_transmission(double delta, double omega_c, const MediumParams& medium) {
    return std::exp(-medium.od * eit_susceptibility(delta, omega_c, medium).value.imag());
}

double group_delay(double omega_c, const MediumParams& medium) {
    if (!(omega_c > 0.0))
        throw std::invalid_argument("group_delay: omega_c must be > 0");
    const double hw = 0.5 * medium.gamma;
    const double hc2 = 0.25 * omega_c * omega_c;
    const double d0 = hw * medium.gamma_gs + hc2;
    return 0.25 * medium.od * medium.gamma * (hc2 - medium.gamma_gs * medium.gamma_gs) / (d0 * d0);
}

} // namespace coldsplit
