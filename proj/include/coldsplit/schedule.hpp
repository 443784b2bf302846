#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace coldsplit {

// One on-interval of a control beam. The amplitude rises from zero over
// [t_start, t_start+ramp] with a smoothstep profile, holds, and falls back to
// zero over [t_end-ramp, t_end]. ramp = 0 means instant switching.
struct ControlSegment {
    double t_start;    // s
    double t_end;      // s
    double amplitude;  // full Rabi frequency (rad/s), >= 0
    double phase;      // rad
    double ramp;       // smoothstep duration (s), >= 0
};

// Piecewise control program Omega(t) = A(t) * exp(i*phase). Segments must be
// time-ordered and non-overlapping; the evaluated complex Rabi frequency is
// continuous whenever ramp > 0.
struct ControlSchedule {
    std::vector<ControlSegment> segments;
    double detuning = 0.0;  // offset of this control from |s>-|e> (rad/s)

    void validate() const;  // throws std::invalid_argument
    std::complex<double> evaluate(double t) const;  // zero outside all segments
    double max_amplitude() const;
    bool always_off() const;

    // Merged closed supports of all segments, time-ordered.
    std::vector<std::pair<double, double>> on_intervals() const;
};

// Gaussian input probe envelope (amplitude FWHM).
struct ProbePulse {
    double peak_amplitude = 1.0;  // arbitrary envelope units
    double center = 0.0;          // s
    double fwhm = 1e-6;           // s, > 0

    void validate() const;
    std::complex<double> evaluate(double t) const;
    // Closed-form envelope energy: integral of |E|^2 dt.
    double energy() const;
};

// 3 t^2 - 2 t^3 on [0,1], clamped outside.
double smoothstep(double t);

} // namespace coldsplit
