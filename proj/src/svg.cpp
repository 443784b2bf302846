#include "coldsplit/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace coldsplit {

namespace {

std::string f2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string g4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

struct Range {
    double lo = 0.0, hi = 1.0;
    double map(double v, double a, double b) const {  // data -> pixel
        return a + (v - lo) / (hi - lo) * (b - a);
    }
};

Range span(double lo, double hi) {
    if (!(hi > lo)) {
        lo -= 1.0;
        hi += 1.0;
    }
    const double pad = 0.04 * (hi - lo);
    return {lo == 0.0 ? 0.0 : lo - pad, hi + pad};
}

std::vector<double> ticks(const Range& r, int target = 6) {
    const double raw = (r.hi - r.lo) / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * mag) {
            step = m * mag;
            break;
        }
    std::vector<double> out;
    for (double v = std::ceil(r.lo / step) * step; v <= r.hi + 1e-9 * step; v += step)
        out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return out;
}

const double kViridis[9][3] = {
    {68, 1, 84},   {72, 40, 120},  {62, 73, 137},  {49, 104, 142}, {38, 130, 142},
    {31, 158, 137}, {53, 183, 121}, {110, 206, 88}, {253, 231, 37}};

std::string viridis(double u) {
    u = std::clamp(u, 0.0, 1.0) * 8.0;
    const int i = std::min(7, static_cast<int>(u));
    const double f = u - i;
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                  static_cast<int>(kViridis[i][0] + f * (kViridis[i + 1][0] - kViridis[i][0])),
                  static_cast<int>(kViridis[i][1] + f * (kViridis[i + 1][1] - kViridis[i][1])),
                  static_cast<int>(kViridis[i][2] + f * (kViridis[i + 1][2] - kViridis[i][2])));
    return buf;
}

void open_svg(std::string& s, int w, int h) {
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) +
         "\" height=\"" + std::to_string(h) + "\" viewBox=\"0 0 " + std::to_string(w) +
         " " + std::to_string(h) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void text(std::string& s, double x, double y, const std::string& t,
          const std::string& anchor = "middle", int size = 12,
          const std::string& extra = "") {
    s += "<text x=\"" + f2(x) + "\" y=\"" + f2(y) + "\" font-family=\"sans-serif\" font-size=\"" +
         std::to_string(size) + "\" text-anchor=\"" + anchor + "\"" + extra + ">" + t +
         "</text>\n";
}

} // namespace

std::string line_chart_svg(const std::string& title,
                           const std::string& xlabel, const std::string& ylabel,
                           const std::vector<double>& x,
                           const std::vector<PlotSeries>& series) {
    const int W = 880, H = 460;
    const double L = 72, R = W - 24, T = 40, B = H - 56;
    std::string s;
    open_svg(s, W, H);
    text(s, W / 2.0, 22, title, "middle", 14, " font-weight=\"bold\"");

    Range xr = span(x.empty() ? 0.0 : x.front(), x.empty() ? 1.0 : x.back());
    double ylo = 0.0, yhi = 1.0;
    bool first = true;
    for (const auto& sr : series)
        for (double v : sr.y) {
            if (first) {
                ylo = yhi = v;
                first = false;
            }
            ylo = std::min(ylo, v);
            yhi = std::max(yhi, v);
        }
    Range yr = span(ylo, yhi);

    for (double tx : ticks(xr)) {
        const double px = xr.map(tx, L, R);
        s += "<line x1=\"" + f2(px) + "\" y1=\"" + f2(T) + "\" x2=\"" + f2(px) + "\" y2=\"" +
             f2(B) + "\" stroke=\"#e4e4e4\"/>\n";
        text(s, px, B + 18, g4(tx));
    }
    for (double ty : ticks(yr)) {
        const double py = yr.map(ty, B, T);
        s += "<line x1=\"" + f2(L) + "\" y1=\"" + f2(py) + "\" x2=\"" + f2(R) + "\" y2=\"" +
             f2(py) + "\" stroke=\"#e4e4e4\"/>\n";
        text(s, L - 8, py + 4, g4(ty), "end");
    }
    s += "<rect x=\"" + f2(L) + "\" y=\"" + f2(T) + "\" width=\"" + f2(R - L) + "\" height=\"" +
         f2(B - T) + "\" fill=\"none\" stroke=\"#333\"/>\n";
    text(s, (L + R) / 2, H - 16, xlabel);
    text(s, 0, 0, ylabel, "middle", 12,
         " transform=\"translate(18," + f2((T + B) / 2) + ") rotate(-90)\"");

    const std::size_t n = x.size();
    const std::size_t stride = std::max<std::size_t>(1, n / 1600);
    for (const auto& sr : series) {
        s += "<polyline fill=\"none\" stroke=\"" + sr.color + "\" stroke-width=\"1.4\" points=\"";
        for (std::size_t i = 0; i < n && i < sr.y.size(); i += stride)
            s += f2(xr.map(x[i], L, R)) + "," + f2(yr.map(sr.y[i], B, T)) + " ";
        if (n > 0 && !sr.y.empty()) {
            const std::size_t last = std::min(n, sr.y.size()) - 1;
            s += f2(xr.map(x[last], L, R)) + "," + f2(yr.map(sr.y[last], B, T));
        }
        s += "\"/>\n";
    }
    double ly = T + 16;
    for (const auto& sr : series) {
        s += "<line x1=\"" + f2(R - 150) + "\" y1=\"" + f2(ly - 4) + "\" x2=\"" + f2(R - 124) +
             "\" y2=\"" + f2(ly - 4) + "\" stroke=\"" + sr.color + "\" stroke-width=\"2\"/>\n";
        text(s, R - 118, ly, sr.name, "start");
        ly += 16;
    }
    s += "</svg>\n";
    return s;
}

std::string heatmap_svg(const std::string& title,
                        const std::string& xlabel, const std::string& ylabel,
                        const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<double>& values) {
    const int W = 880, H = 520;
    const double L = 72, R = W - 96, T = 40, B = H - 56;
    const std::size_t nx = x.size(), ny = y.size();
    std::string s;
    open_svg(s, W, H);
    text(s, (L + R) / 2, 22, title, "middle", 14, " font-weight=\"bold\"");
    if (nx < 2 || ny < 2 || values.size() != nx * ny) {
        s += "</svg>\n";
        return s;
    }

    // Box-average down to a manageable cell count.
    const std::size_t bx = std::max<std::size_t>(1, nx / 150);
    const std::size_t by = std::max<std::size_t>(1, ny / 120);
    const std::size_t mx = (nx + bx - 1) / bx, my = (ny + by - 1) / by;
    std::vector<double> cell(mx * my, 0.0);
    std::vector<int> cnt(mx * my, 0);
    for (std::size_t iy = 0; iy < ny; ++iy)
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const std::size_t c = (iy / by) * mx + ix / bx;
            cell[c] += values[iy * nx + ix];
            ++cnt[c];
        }
    double vmax = 0.0;
    for (std::size_t c = 0; c < cell.size(); ++c) {
        cell[c] /= cnt[c];
        vmax = std::max(vmax, cell[c]);
    }
    if (!(vmax > 0.0)) vmax = 1.0;

    const double cw = (R - L) / mx, ch = (B - T) / my;
    for (std::size_t iy = 0; iy < my; ++iy)
        for (std::size_t ix = 0; ix < mx; ++ix) {
            const double v = cell[iy * mx + ix] / vmax;
            s += "<rect x=\"" + f2(L + ix * cw) + "\" y=\"" + f2(B - (iy + 1) * ch) +
                 "\" width=\"" + f2(cw + 0.5) + "\" height=\"" + f2(ch + 0.5) + "\" fill=\"" +
                 viridis(v) + "\"/>\n";
        }

    Range xr{x.front(), x.back()};
    Range yr{y.front(), y.back()};
    for (double tx : ticks(xr)) {
        const double px = xr.map(tx, L, R);
        text(s, px, B + 18, g4(tx));
    }
    for (double ty : ticks(yr)) {
        const double py = yr.map(ty, B, T);
        text(s, L - 8, py + 4, g4(ty), "end");
    }
    s += "<rect x=\"" + f2(L) + "\" y=\"" + f2(T) + "\" width=\"" + f2(R - L) + "\" height=\"" +
         f2(B - T) + "\" fill=\"none\" stroke=\"#333\"/>\n";
    text(s, (L + R) / 2, H - 16, xlabel);
    text(s, 0, 0, ylabel, "middle", 12,
         " transform=\"translate(18," + f2((T + B) / 2) + ") rotate(-90)\"");

    // Colorbar.
    const double cbx = R + 18, cbw = 16;
    const int steps = 32;
    for (int i = 0; i < steps; ++i) {
        const double u0 = static_cast<double>(i) / steps;
        const double py = B - (B - T) * (i + 1.0) / steps;
        s += "<rect x=\"" + f2(cbx) + "\" y=\"" + f2(py) + "\" width=\"" + f2(cbw) +
             "\" height=\"" + f2((B - T) / steps + 0.5) + "\" fill=\"" + viridis(u0) + "\"/>\n";
    }
    text(s, cbx + cbw / 2, B + 16, "0");
    text(s, cbx + cbw / 2, T - 6, g4(vmax));
    s += "</svg>\n";
    return s;
}

} // namespace coldsplit
