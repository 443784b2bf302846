#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "coldsplit/medium.hpp"
#include "coldsplit/schedule.hpp"

namespace coldsplit {

// Space-time discretization. nz points span [0, L], nt points span [0, t_end].
struct Grid {
    int nz = 256;
    int nt = 8001;
    double t_end = 8e-6;  // s

    double dt() const { return t_end / (nt - 1); }
    double dz(double length) const { return length / (nz - 1); }

    // nz >= 64 and dt * max(gamma/2, |Omega|/2, |detuning|) < 0.1.
    // Throws NumericError when the contract is violated.
    void validate(const MediumParams& medium, const ControlSchedule& fw,
                  const ControlSchedule& bw) const;
};

// Weak-probe state of the medium: forward/backward probe envelopes, the
// corresponding optical polarizations, and the shared spin wave, all on the
// z grid. Envelopes are slowly varying in co-rotating frames: e_f at the
// input carrier, e_b at the phase-matched backward output carrier (input
// carrier + backward control detuning), which puts the explicit detuning
// term on p_b instead.
struct SimState {
    std::vector<std::complex<double>> e_f, e_b;  // probe envelopes
    std::vector<std::complex<double>> p_f, p_b;  // optical polarizations
    std::vector<std::complex<double>> s;         // spin wave
};

// Envelope-energy bookkeeping. p and s are scaled so |p|^2 + |s|^2 is an
// energy line density commensurate with the |e|^2 flux; the balance
//   input = leaked + retrieved_fw + retrieved_bw + dissipated
// closes to discretization accuracy. dissipated includes whatever excitation
// is still inside the medium when the run ends.
struct EnergyLedger {
    double input = 0.0;
    double leaked = 0.0;        // forward-face output before retrieval starts
    double retrieved_fw = 0.0;  // forward-face output after retrieval starts
    double retrieved_bw = 0.0;  // backward-face output after retrieval starts
    double dissipated = 0.0;    // gamma and gamma_gs loss integrals + residual
};

// Downsampled |.|^2 map over (t, z), row-major with z fastest.
struct SpacetimeMap {
    std::vector<double> t;
    std::vector<double> z;
    std::vector<double> v;
    double at(std::size_t it, std::size_t iz) const { return v[it * z.size() + iz]; }
};

struct SolverOptions {
    // Non-empty: start from this spin wave (size nz) instead of vacuum.
    std::vector<std::complex<double>> initial_spin_wave;
    // Inject the probe at z = L into the backward channel instead of z = 0
    // into the forward channel (mirror-image runs).
    bool probe_into_bw = false;
    // Residual wave-vector mismatch exp(i*dk*z) on the backward coupling
    // (rad/m). Zero keeps backward retrieval perfectly phase matched.
    double bw_k_mismatch = 0.0;
    bool record_field_map = false;  // |e_f|^2 + |e_b|^2 over (z,t)
    bool record_spin_map = false;   // |s|^2 over (z,t)
    int map_time_stride = 8;
};

struct SimResult {
    std::vector<double> time;  // nt samples
    std::vector<double> z;     // nz samples
    // Complex exit-face traces: forward at z = L, backward at z = 0.
    std::vector<std::complex<double>> fw_field, bw_field;
    // |Omega(t)| of each control, for emission alongside the traces.
    std::vector<double> control_fw, control_bw;
    EnergyLedger ledger;
    // First interval with both controls off, if any, and the retrieval
    // turn-on time that ends the dark stretch, if any.
    std::optional<std::pair<double, double>> storage_interval;
    std::optional<double> retrieval_start;
    std::optional<SpacetimeMap> field_map, spin_map;
    std::vector<std::complex<double>> final_spin_wave;

    std::vector<double> fw_out() const;    // |e_f(L,t)|^2
    std::vector<double> bw_out() const;    // |e_b(0,t)|^2
    std::vector<double> fw_phase() const;  // arg e_f(L,t)
    std::vector<double> bw_phase() const;  // arg e_b(0,t)
};

// Integrate the 1+1D weak-probe Maxwell-Bloch system
//   dz e_f = i k p_f,          -dz e_b = i k p_b           (quasi-steady)
//   dt p_f = -(gamma/2 + i D_f) p_f + i k e_f + i (Omega_f/2) s
//   dt p_b = -(gamma/2 + i D_b) p_b + i k e_b + i (Omega_b/2) s
//   dt s   = -gamma_gs s + i (Omega_f*/2) p_f + i (Omega_b*/2) p_b
// with k^2 = od*gamma/(4L), boundary conditions e_f(0,t) = probe(t),
// e_b(L,t) = 0, and classic RK4 on the atomic variables with a field
// re-solve per substage. Light transit across the medium is 4-5 orders of
// magnitude faster than the atomic dynamics, so the field equations carry
// no time derivative and the CFL constraint tied to c never enters.
//
// This is the standard weak-probe linearization of the Lambda system; both
// controls read their own detuning from their schedule (D_f is normally 0).
//
// Throws NumericError on a stability-contract violation (before
// integrating) and on a non-finite state (with the offending step index).
SimResult run(const MediumParams& medium, const ControlSchedule& fw,
              const ControlSchedule& bw, const ProbePulse& probe,
              const Grid& grid, const SolverOptions& options = {});

// (retrieved_fw + retrieved_bw) / input. Requires a defined storage interval
// and nonzero input energy; throws std::invalid_argument otherwise.
double storage_efficiency(const SimResult& result);

} // namespace coldsplit
