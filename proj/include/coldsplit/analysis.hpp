#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "coldsplit/solver.hpp"

namespace coldsplit {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
inline Vec3 operator*(double c, Vec3 a) { return {c * a.x, c * a.y, c * a.z}; }
inline bool operator==(Vec3 a, Vec3 b) { return a.x == b.x && a.y == b.y && a.z == b.z; }

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
double norm(Vec3 a);
// Angle in [0, pi]; atan2(|a x b|, a.b) stays accurate near 0 and pi.
double angle_between(Vec3 a, Vec3 b);

// Wave-vector / frequency bookkeeping for storage followed by retrieval:
// writing with the FW control leaves k_spin = k_s - k_fwc (and omega_spin
// likewise); reading with a control k_rc emits at k_out = k_spin + k_rc,
// omega_out = omega_spin + omega_rc. The identities hold by construction;
// angle is measured between k_out and k_s.
struct PhaseMatch {
    Vec3 k_s, k_fwc, k_rc;
    Vec3 k_spin, k_out;
    double omega_s = 0.0, omega_fwc = 0.0, omega_rc = 0.0;
    double omega_spin = 0.0, omega_out = 0.0;
    double angle = 0.0;  // rad, between k_out and k_s
};

PhaseMatch phase_match(Vec3 k_s, Vec3 k_fwc, Vec3 k_rc,
                       double omega_s, double omega_fwc, double omega_rc);

// Retrieved-energy split. fw + bw == 1 exactly (bw is computed as the exact
// complement). Throws std::invalid_argument when nothing was retrieved.
struct SplitRatio {
    double fw = 0.0, bw = 0.0;
};
SplitRatio splitting_ratio(const SimResult& result);

// Lossless 50/50 combiner applied to the two exit-face traces:
//   port_plus(t)  = |e_f + e^(i dphi) e_b e^(-i delta t)|^2 / 2
//   port_minus(t) = |e_f - e^(i dphi) e_b e^(-i delta t)|^2 / 2
// The e^(-i delta t) factor restores the carrier offset between the two
// outputs (e_b is recorded in a frame shifted by the BW control detuning),
// so a nonzero delta beats at period 2*pi/delta. Port sum equals
// |e_f|^2 + |e_b|^2 pointwise. Throws on mismatched trace lengths.
struct CombinedTrace {
    std::vector<double> time;
    std::vector<double> port_plus, port_minus;
};
CombinedTrace combine(const std::vector<double>& time,
                      const std::vector<std::complex<double>>& fw_trace,
                      const std::vector<std::complex<double>>& bw_trace,
                      double delta_phi, double delta);

struct FringePoint {
    double phase = 0.0;      // rad, combiner phase setting
    double intensity = 0.0;  // window-integrated port_plus
};

// Integrate port_plus over [t0, t1] at n equally spaced combiner phases
// covering [0, 2*pi).
std::vector<FringePoint> fringe_scan(const std::vector<double>& time,
                                     const std::vector<std::complex<double>>& fw_trace,
                                     const std::vector<std::complex<double>>& bw_trace,
                                     double delta, double t0, double t1,
                                     int n_settings = 12);

// Least-squares sinusoid I(phi) = offset + amplitude*cos(phi + phase);
// visibility = amplitude/offset. Throws on a degenerate fit (fewer than
// three distinct phases, singular normal equations, or offset <= 0).
struct FringeFit {
    double offset = 0.0;
    double amplitude = 0.0;
    double phase = 0.0;
    double visibility = 0.0;
};
FringeFit fit_fringe(const std::vector<FringePoint>& fringe);
double visibility(const std::vector<FringePoint>& fringe);

// Dominant oscillation period of an intensity trace. Peaks locate the
// oscillation; the period is then refined from the zero crossings of the
// envelope-detrended trace (peak-to-peak spacing alone is biased under a
// varying envelope). Throws std::invalid_argument("no oscillation
// detected") when the trace holds fewer than two full cycles.
double beat_period(const std::vector<double>& time,
                   const std::vector<double>& intensity);

// Parameters of the retrieved dual-rail superposition
//   sin(theta)|1>_fw|0>_bw + e^(i dphi) cos(theta)|0>_fw|1>_bw,
// tan(theta) = omega_fw/omega_bw, dphi = phi2 - phi1. p_fw and p_bw are the
// port probabilities constructed so p_fw + p_bw == 1 holds bitwise; the
// amplitudes are their square roots (normalized to rounding). Throws when
// both Rabi frequencies are zero.
struct DualRailState {
    double theta = 0.0;      // rad
    double delta_phi = 0.0;  // rad
    std::complex<double> amp_fw, amp_bw;
    double p_fw = 0.0, p_bw = 0.0;
};
DualRailState dual_rail_state(double omega_fw, double omega_bw,
                              double phi1, double phi2);

// Fringe + visibility (+ beat period when a detuned combine was requested),
// as assembled by the scenario layer.
struct InterferenceResult {
    std::vector<FringePoint> fringe;
    double visibility = 0.0;
    std::optional<double> beat_period_s;
};

} // namespace coldsplit
