#include "coldsplit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace coldsplit {

using cplx = std::complex<double>;

double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

double angle_between(Vec3 a, Vec3 b) {
    return std::atan2(norm(cross(a, b)), dot(a, b));
}

PhaseMatch phase_match(Vec3 k_s, Vec3 k_fwc, Vec3 k_rc,
                       double omega_s, double omega_fwc, double omega_rc) {
    PhaseMatch pm;
    pm.k_s = k_s;
    pm.k_fwc = k_fwc;
    pm.k_rc = k_rc;
    pm.omega_s = omega_s;
    pm.omega_fwc = omega_fwc;
    pm.omega_rc = omega_rc;
    pm.k_spin = k_s - k_fwc;
    pm.k_out = pm.k_spin + k_rc;
    pm.omega_spin = omega_s - omega_fwc;
    pm.omega_out = pm.omega_spin + omega_rc;
    pm.angle = angle_between(pm.k_out, k_s);
    return pm;
}

SplitRatio splitting_ratio(const SimResult& result) {
    const double total = result.ledger.retrieved_fw + result.ledger.retrieved_bw;
    if (!(total > 0.0))
        throw std::invalid_argument("splitting_ratio: zero total retrieval");
    SplitRatio r;
    r.fw = result.ledger.retrieved_fw / total;
    r.bw = 1.0 - r.fw;  // exact complement, so fw + bw == 1 bitwise
    return r;
}

CombinedTrace combine(const std::vector<double>& time,
                      const std::vector<cplx>& fw_trace,
                      const std::vector<cplx>& bw_trace,
                      double delta_phi, double delta) {
    const std::size_t n = time.size();
    if (fw_trace.size() != n || bw_trace.size() != n)
        throw std::invalid_argument("combine: traces do not share a time base");
    CombinedTrace out;
    out.time = time;
    out.port_plus.resize(n);
    out.port_minus.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx b = bw_trace[i] * std::polar(1.0, delta_phi - delta * time[i]);
        out.port_plus[i] = 0.5 * std::norm(fw_trace[i] + b);
        out.port_minus[i] = 0.5 * std::norm(fw_trace[i] - b);
    }
    return out;
}

namespace {

double window_integral(const std::vector<double>& t, const std::vector<double>& v,
                       double t0, double t1) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        if (t[i] < t0 || t[i + 1] > t1) continue;
        sum += 0.5 * (v[i] + v[i + 1]) * (t[i + 1] - t[i]);
    }
    return sum;
}

} // namespace

std::vector<FringePoint> fringe_scan(const std::vector<double>& time,
                                     const std::vector<cplx>& fw_trace,
                                     const std::vector<cplx>& bw_trace,
                                     double delta, double t0, double t1,
                                     int n_settings) {
    if (n_settings < 3)
        throw std::invalid_argument("fringe_scan: need at least 3 phase settings");
    std::vector<FringePoint> fringe;
    fringe.reserve(n_settings);
    for (int k = 0; k < n_settings; ++k) {
        const double phi = 2.0 * std::numbers::pi * k / n_settings;
        const CombinedTrace c = combine(time, fw_trace, bw_trace, phi, delta);
        fringe.push_back({phi, window_integral(c.time, c.port_plus, t0, t1)});
    }
    return fringe;
}

FringeFit fit_fringe(const std::vector<FringePoint>& fringe) {
    if (fringe.size() < 3)
        throw std::invalid_argument("fit_fringe: need at least 3 fringe points");
    // Normal equations for I(phi) = A + C cos(phi) + S sin(phi).
    double m[3][3] = {};
    double rhs[3] = {};
    for (const auto& p : fringe) {
        const double b[3] = {1.0, std::cos(p.phase), std::sin(p.phase)};
        for (int i = 0; i < 3; ++i) {
            rhs[i] += b[i] * p.intensity;
            for (int j = 0; j < 3; ++j) m[i][j] += b[i] * b[j];
        }
    }
    // Gaussian elimination with partial pivoting.
    int idx[3] = {0, 1, 2};
    for (int c = 0; c < 3; ++c) {
        int p = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::abs(m[idx[r]][c]) > std::abs(m[idx[p]][c])) p = r;
        std::swap(idx[c], idx[p]);
        const double piv = m[idx[c]][c];
        if (std::abs(piv) < 1e-9 * fringe.size())
            throw std::invalid_argument("fit_fringe: degenerate phase settings");
        for (int r = c + 1; r < 3; ++r) {
            const double f = m[idx[r]][c] / piv;
            for (int j = c; j < 3; ++j) m[idx[r]][j] -= f * m[idx[c]][j];
            rhs[idx[r]] -= f * rhs[idx[c]];
        }
    }
    double x[3];
    for (int c = 2; c >= 0; --c) {
        double v = rhs[idx[c]];
        for (int j = c + 1; j < 3; ++j) v -= m[idx[c]][j] * x[j];
        x[c] = v / m[idx[c]][c];
    }
    FringeFit fit;
    fit.offset = x[0];
    fit.amplitude = std::hypot(x[1], x[2]);
    fit.phase = std::atan2(-x[2], x[1]);
    if (!(fit.offset > 0.0))
        throw std::invalid_argument("fit_fringe: degenerate fit, non-positive offset");
    fit.visibility = std::min(1.0, fit.amplitude / fit.offset);
    return fit;
}

double visibility(const std::vector<FringePoint>& fringe) {
    return fit_fringe(fringe).visibility;
}

namespace {

// Strict local maxima above a fraction of the global maximum.
std::vector<std::size_t> strong_peaks(const std::vector<double>& v, double rel) {
    const double top = *std::max_element(v.begin(), v.end());
    std::vector<std::size_t> peaks;
    if (!(top > 0.0)) return peaks;
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
        if (v[i] > rel * top && v[i] > v[i - 1] && v[i] >= v[i + 1])
            peaks.push_back(i);
    return peaks;
}

// Least-squares slope of t_k against k; the mean crossing spacing with
// endpoint noise averaged down.
double crossing_slope(const std::vector<double>& tc) {
    const double n = static_cast<double>(tc.size());
    double kbar = 0.5 * (n - 1.0), tbar = 0.0;
    for (double t : tc) tbar += t;
    tbar /= n;
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < tc.size(); ++k) {
        const double dk = static_cast<double>(k) - kbar;
        num += dk * (tc[k] - tbar);
        den += dk * dk;
    }
    return num / den;
}

} // namespace

double beat_period(const std::vector<double>& time,
                   const std::vector<double>& intensity) {
    const std::size_t n = time.size();
    if (intensity.size() != n)
        throw std::invalid_argument("beat_period: trace does not match time base");
    if (n < 8) throw std::invalid_argument("beat_period: no oscillation detected");

    const auto peaks = strong_peaks(intensity, 0.2);
    if (peaks.size() < 3)
        throw std::invalid_argument("beat_period: no oscillation detected");

    std::vector<double> spacings;
    for (std::size_t i = 0; i + 1 < peaks.size(); ++i)
        spacings.push_back(time[peaks[i + 1]] - time[peaks[i]]);
    std::sort(spacings.begin(), spacings.end());
    double period = spacings[spacings.size() / 2];  // median peak spacing

    // Refine: subtract a one-period moving average (leaves the oscillating
    // part, removes the envelope) and fit the zero-crossing times. Two
    // passes so the averaging window matches the refined period.
    const double dt = (time.back() - time.front()) / (n - 1);
    for (int pass = 0; pass < 2; ++pass) {
        const std::size_t w = static_cast<std::size_t>(std::lround(period / dt)) | 1u;
        const std::size_t h = w / 2;
        if (h == 0 || 2 * h >= n) break;
        double acc = 0.0;
        for (std::size_t i = 0; i < w; ++i) acc += intensity[i];
        std::vector<double> det(n, 0.0);
        for (std::size_t i = h; i + h < n; ++i) {
            det[i] = intensity[i] - acc / w;
            if (i + h + 1 < n) acc += intensity[i + h + 1] - intensity[i - h];
        }
        const std::size_t lo = std::max(peaks.front(), h);
        const std::size_t hi = std::min(peaks.back(), n - h - 1);
        std::vector<double> crossings;
        for (std::size_t i = lo; i < hi; ++i)
            if (det[i] * det[i + 1] < 0.0)
                crossings.push_back(time[i] + dt * det[i] / (det[i] - det[i + 1]));
        if (crossings.size() < 4) break;
        const double refined = 2.0 * crossing_slope(crossings);
        if (!(refined > 0.0) || std::abs(refined - period) > 0.5 * period) break;
        period = refined;
    }
    return period;
}

DualRailState dual_rail_state(double omega_fw, double omega_bw,
                              double phi1, double phi2) {
    if (omega_fw < 0.0 || omega_bw < 0.0)
        throw std::invalid_argument("dual_rail_state: Rabi frequencies must be >= 0");
    if (omega_fw == 0.0 && omega_bw == 0.0)
        throw std::invalid_argument("dual_rail_state: both Rabi frequencies zero");
    DualRailState st;
    st.theta = std::atan2(omega_fw, omega_bw);
    st.delta_phi = phi2 - phi1;
    const double a = omega_fw * omega_fw, b = omega_bw * omega_bw;
    st.p_fw = a / (a + b);
    st.p_bw = 1.0 - st.p_fw;  // exact complement: p_fw + p_bw == 1 bitwise
    st.amp_fw = std::sqrt(st.p_fw);
    st.amp_bw = std::polar(std::sqrt(st.p_bw), st.delta_phi);
    return st;
}

} // namespace coldsplit
