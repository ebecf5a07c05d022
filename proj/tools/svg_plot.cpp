#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace omsq::plot {

namespace {

constexpr int kW = 720, kH = 500;
constexpr int kL = 70, kR = 40, kT = 40, kB = 55;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#17becf", "#8c564b", "#7f7f7f"};

void header(std::ostringstream& os, const std::string& title) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
       << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << " " << kH
       << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"15\">"
       << title << "</text>\n";
}

void axes(std::ostringstream& os, double x0, double x1, double y0, double y1,
          const std::string& xl, const std::string& yl) {
    os << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << kW - kL - kR
       << "\" height=\"" << kH - kT - kB
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double fx = kL + (kW - kL - kR) * k / 4.0;
        const double fy = kH - kB + 16;
        os << "<text x=\"" << fx << "\" y=\"" << fy
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
              "font-size=\"11\">"
           << num(x0 + (x1 - x0) * k / 4.0) << "</text>\n";
        const double gy = kH - kB - (kH - kT - kB) * k / 4.0;
        os << "<text x=\"" << kL - 6 << "\" y=\"" << gy + 4
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
              "font-size=\"11\">"
           << num(y0 + (y1 - y0) * k / 4.0) << "</text>\n";
    }
    os << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"" << kH - 14
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"13\">"
       << xl << "</text>\n";
    os << "<text x=\"18\" y=\"" << (kT + kH - kB) / 2
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"13\" transform=\"rotate(-90 18 "
       << (kT + kH - kB) / 2 << ")\">" << yl << "</text>\n";
}

// compact diverging-free sequential ramp (dark blue -> yellow)
void ramp(double t, int& r, int& g, int& b) {
    t = std::clamp(t, 0.0, 1.0);
    const double stops[5][3] = {{68, 1, 84},
                                {59, 82, 139},
                                {33, 145, 140},
                                {94, 201, 98},
                                {253, 231, 37}};
    const double u = t * 4;
    const int k = std::min(3, static_cast<int>(u));
    const double f = u - k;
    r = static_cast<int>(stops[k][0] + f * (stops[k + 1][0] - stops[k][0]));
    g = static_cast<int>(stops[k][1] + f * (stops[k + 1][1] - stops[k][1]));
    b = static_cast<int>(stops[k][2] + f * (stops[k + 1][2] - stops[k][2]));
}

} // namespace

std::string line_plot(const std::vector<Series>& series,
                      const std::string& x_label, const std::string& y_label,
                      const std::string& title) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
    double y0 = x0, y1 = -x0;
    for (const auto& s : series)
        for (size_t k = 0; k < s.x.size(); ++k) {
            if (!std::isfinite(s.y[k])) continue;
            x0 = std::min(x0, s.x[k]);
            x1 = std::max(x1, s.x[k]);
            y0 = std::min(y0, s.y[k]);
            y1 = std::max(y1, s.y[k]);
        }
    if (!(x0 < x1)) { x0 = 0; x1 = 1; }
    if (!(y0 < y1)) { y0 -= 0.5; y1 += 0.5; }
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;

    std::ostringstream os;
    header(os, title);
    axes(os, x0, x1, y0, y1, x_label, y_label);
    auto px = [&](double x) { return kL + (x - x0) / (x1 - x0) * (kW - kL - kR); };
    auto py = [&](double y) {
        return kH - kB - (y - y0) / (y1 - y0) * (kH - kT - kB);
    };
    for (size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        std::ostringstream pts;
        bool pen_down = false;
        os << "<path d=\"";
        for (size_t k = 0; k < s.x.size(); ++k) {
            if (!std::isfinite(s.y[k])) {
                pen_down = false;
                continue;
            }
            os << (pen_down ? "L" : "M") << num(px(s.x[k])) << " "
               << num(py(s.y[k])) << " ";
            pen_down = true;
        }
        os << "\" fill=\"none\" stroke=\"" << kColors[si % 8]
           << "\" stroke-width=\"1.6\"/>\n";
        os << "<text x=\"" << kW - kR - 6 << "\" y=\"" << kT + 16 + 16 * si
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
              "font-size=\"12\" fill=\""
           << kColors[si % 8] << "\">" << s.label << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string heatmap(const std::vector<std::optional<double>>& values, int nx,
                    int ny, double x0, double x1, double y0, double y1,
                    const std::string& x_label, const std::string& y_label,
                    const std::string& title) {
    double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
    for (const auto& v : values)
        if (v) {
            vmin = std::min(vmin, *v);
            vmax = std::max(vmax, *v);
        }
    if (!(vmin < vmax)) { vmin = 0; vmax = 1; }

    std::ostringstream os;
    header(os, title + "  [" + num(vmin) + ", " + num(vmax) + "]");
    const double cw = static_cast<double>(kW - kL - kR) / nx;
    const double ch = static_cast<double>(kH - kT - kB) / ny;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const auto& v = values[static_cast<size_t>(j) * nx + i];
            int r = 25, g = 25, b = 25; // missing (unstable) cells stay dark
            if (v) ramp((*v - vmin) / (vmax - vmin), r, g, b);
            const double x = kL + i * cw;
            const double y = kH - kB - (j + 1) * ch;
            os << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\""
               << num(cw + 0.5) << "\" height=\"" << num(ch + 0.5)
               << "\" fill=\"rgb(" << r << "," << g << "," << b << ")\"/>\n";
        }
    axes(os, x0, x1, y0, y1, x_label, y_label);
    os << "</svg>\n";
    return os.str();
}

} // namespace omsq::plot
