#include "coldsplit/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace coldsplit {

double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * (3.0 - 2.0 * t);
}

void ControlSchedule::validate() const {
    if (!std::isfinite(detuning))
        throw std::invalid_argument("schedule: detuning must be finite");
    double prev_end = -std::numeric_limits<double>::infinity();
    for (const auto& s : segments) {
        if (!(s.t_end > s.t_start))
            throw std::invalid_argument("schedule: segment must have t_end > t_start");
        if (s.t_start < prev_end)
            throw std::invalid_argument("schedule: segments must be time-ordered and non-overlapping");
        if (!(s.amplitude >= 0.0) || !std::isfinite(s.amplitude))
            throw std::invalid_argument("schedule: amplitude must be >= 0");
        if (!(s.ramp >= 0.0))
            throw std::invalid_argument("schedule: ramp must be >= 0");
        if (s.ramp > 0.0 && s.t_end - s.t_start < 2.0 * s.ramp)
            throw std::invalid_argument("schedule: segment shorter than its two ramps");
        if (!std::isfinite(s.phase))
            throw std::invalid_argument("schedule: phase must be finite");
        prev_end = s.t_end;
    }
}

std::complex<double> ControlSchedule::evaluate(double t) const {
    for (const auto& s : segments) {
        if (t < s.t_start || t > s.t_end) continue;
        double a = s.amplitude;
        if (s.ramp > 0.0) {
            a *= smoothstep((t - s.t_start) / s.ramp);
            a *= smoothstep((s.t_end - t) / s.ramp);
        }
        return std::polar(a, s.phase);
    }
    return {0.0, 0.0};
}

double ControlSchedule::max_amplitude() const {
    double m = 0.0;
    for (const auto& s : segments) m = std::max(m, s.amplitude);
    return m;
}

bool ControlSchedule::always_off() const {
    return max_amplitude() == 0.0;
}

std::vector<std::pair<double, double>> ControlSchedule::on_intervals() const {
    std::vector<std::pair<double, double>> out;
    for (const auto& s : segments) {
        if (s.amplitude <= 0.0) continue;
        if (!out.empty() && s.t_start <= out.back().second) {
            out.back().second = std::max(out.back().second, s.t_end);
        } else {
            out.emplace_back(s.t_start, s.t_end);
        }
    }
    return out;
}

void ProbePulse::validate() const {
    if (!(fwhm > 0.0) || !std::isfinite(fwhm))
        throw std::invalid_argument("probe: fwhm must be > 0");
    if (!(peak_amplitude >= 0.0) || !std::isfinite(peak_amplitude))
        throw std::invalid_argument("probe: peak_amplitude must be >= 0");
    if (!std::isfinite(center))
        throw std::invalid_argument("probe: center must be finite");
}

std::complex<double> ProbePulse::evaluate(double t) const {
    const double u = (t - center) / fwhm;
    return {peak_amplitude * std::exp(-4.0 * M_LN2 * u * u), 0.0};
}

double ProbePulse::energy() const {
    // integral of peak^2 * exp(-8 ln2 u^2) dt = peak^2 * fwhm * sqrt(pi/(8 ln2))
    return peak_amplitude * peak_amplitude * fwhm * std::sqrt(M_PI / (8.0 * M_LN2));
}

} // namespace coldsplit
