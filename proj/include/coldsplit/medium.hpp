#pragma once

#include <complex>

namespace coldsplit {

// Parameters of the Lambda-type atomic medium. All rates are angular (rad/s).
//
// Conventions used throughout the library:
//  - Rabi frequencies are FULL Rabi frequencies; coupling terms in the
//    equations of motion carry Omega/2.
//  - od is the intensity attenuation exponent: on-resonance two-level
//    transmission is exactly exp(-od). The coupling constants are never set
//    independently; their product is pinned to kappa*kappa' = od*gamma/(4*length).
//  - Homogeneous (Lorentzian) lineshape; no Doppler broadening.
struct MediumParams {
    double od;        // optical depth, dimensionless, > 0
    double gamma;     // full decay rate of |g>-|e> (rad/s), > 0
    double gamma_gs;  // ground-state dephasing rate (rad/s), >= 0
    double length;    // medium extent (m), > 0

    // kappa * kappa' = od*gamma/(4L); units (rad/s)^2 / m with the symmetric
    // kappa = kappa' split used by the solver.
    double coupling_product() const { return od * gamma / (4.0 * length); }

    void validate() const; // throws std::invalid_argument on a bad field
};

// Steady-state probe response at one detuning. Im(value) >= 0 is the
// absorption (passive medium); Re(value) is the dispersion. The field
// transfer across the medium is exp(i*(od/2)*value).
struct Susceptibility {
    double detuning;             // probe detuning from |g>-|e> (rad/s)
    std::complex<double> value;  // dimensionless response
};

// Intensity transmission of the bare two-level line (control off):
// T(delta) = exp(-od*(gamma/2)^2 / (delta^2 + (gamma/2)^2)).
double two_level_transmission(double delta, const MediumParams& medium);

// Steady-state Lambda-system response for control Rabi frequency omega_c >= 0.
// Reduces exactly to the two-level response when omega_c = 0.
Susceptibility eit_susceptibility(double delta, double omega_c, const MediumParams& medium);

// exp(-od * Im chi) for the susceptibility above.
double eit_transmission(double delta, double omega_c, const MediumParams& medium);

// Small-detuning phase slope of the EIT transfer function,
//   tau_d = (od*gamma/4) * ((omega_c/2)^2 - gamma_gs^2) / ((gamma/2)*gamma_gs + (omega_c/2)^2)^2,
// which is od*gamma/omega_c^2 in the usual gamma_gs -> 0 limit.
// Throws std::invalid_argument when omega_c <= 0 (no transparency channel).
double group_delay(double omega_c, const MediumParams& medium);

} // namespace coldsplit
