#include "epfano/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace epfano {

namespace {

constexpr double kWidth = 640.0;
constexpr double kPanelHeight = 260.0;
constexpr double kMargin = 56.0;

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s)
{
    std::string out;
    for (const char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

struct Box {
    double x0, y0, w, h;
    double xmin, xmax, ymin, ymax;

    double px(double x) const { return x0 + (x - xmin) / (xmax - xmin) * w; }
    double py(double y) const { return y0 + h - (y - ymin) / (ymax - ymin) * h; }
};

void pad_range(double& lo, double& hi)
{
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        lo = 0.0;
        hi = 1.0;
    }
    if (hi - lo <= 1e-300) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
}

void frame(std::string& out, const Box& b, const std::string& xlabel, const std::string& ylabel)
{
    out += "<rect x='" + num(b.x0) + "' y='" + num(b.y0) + "' width='" + num(b.w) + "' height='" + num(b.h) +
           "' fill='none' stroke='black'/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = b.xmin + (b.xmax - b.xmin) * k / 4.0;
        const double yv = b.ymin + (b.ymax - b.ymin) * k / 4.0;
        out += "<text x='" + num(b.px(xv)) + "' y='" + num(b.y0 + b.h + 14) +
               "' font-size='10' text-anchor='middle'>" + tick(xv) + "</text>\n";
        out += "<text x='" + num(b.x0 - 4) + "' y='" + num(b.py(yv) + 3) +
               "' font-size='10' text-anchor='end'>" + tick(yv) + "</text>\n";
    }
    out += "<text x='" + num(b.x0 + b.w / 2) + "' y='" + num(b.y0 + b.h + 30) +
           "' font-size='12' text-anchor='middle'>" + escape(xlabel) + "</text>\n";
    out += "<text x='" + num(b.x0 - 44) + "' y='" + num(b.y0 + b.h / 2) +
           "' font-size='12' text-anchor='middle' transform='rotate(-90 " + num(b.x0 - 44) + " " +
           num(b.y0 + b.h / 2) + ")'>" + escape(ylabel) + "</text>\n";
}

// Polyline broken at non-finite points.
void polyline(std::string& out, const Box& b, const std::vector<double>& x, const std::vector<double>& y,
              const std::string& style)
{
    std::string pts;
    auto flush = [&] {
        if (!pts.empty()) out += "<polyline fill='none' " + style + " points='" + pts + "'/>\n";
        pts.clear();
    };
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!std::isfinite(x[k]) || !std::isfinite(y[k])) {
            flush();
            continue;
        }
        pts += num(b.px(x[k])) + "," + num(b.py(y[k])) + " ";
    }
    flush();
}

std::string header(double height, const std::string& title)
{
    return "<?xml version='1.0' encoding='UTF-8'?>\n<svg xmlns='http://www.w3.org/2000/svg' width='" + num(kWidth) +
           "' height='" + num(height) + "' font-family='sans-serif'>\n<rect width='100%' height='100%' fill='white'/>\n" +
           "<text x='" + num(kWidth / 2) + "' y='20' font-size='14' text-anchor='middle'>" + escape(title) +
           "</text>\n";
}

}  // namespace

std::string cross_section_svg(const std::vector<CrossSectionSample>& samples, const std::string& title)
{
    std::vector<double> e, t22, inter;
    for (const auto& s : samples) {
        e.push_back(s.e);
        t22.push_back(s.valid ? s.t22_sq : std::numeric_limits<double>::quiet_NaN());
        inter.push_back(s.valid ? s.interference_22 : std::numeric_limits<double>::quiet_NaN());
    }
    auto range = [](const std::vector<double>& v) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const double x : v)
            if (std::isfinite(x)) {
                lo = std::min(lo, x);
                hi = std::max(hi, x);
            }
        return std::pair{lo, hi};
    };
    double emin = e.empty() ? 0.0 : e.front(), emax = e.empty() ? 1.0 : e.back();
    if (emax <= emin) emax = emin + 1.0;
    auto [t_lo, t_hi] = range(t22);
    auto [i_lo, i_hi] = range(inter);
    t_lo = std::min(t_lo, 0.0);
    pad_range(t_lo, t_hi);
    pad_range(i_lo, i_hi);

    const double height = 2 * kPanelHeight + 3 * kMargin;
    std::string out = header(height, title);
    const Box top{kMargin + 20, kMargin - 20, kWidth - 2 * kMargin - 10, kPanelHeight, emin, emax, t_lo, t_hi};
    const Box bottom{kMargin + 20, 2 * kMargin + kPanelHeight - 20, kWidth - 2 * kMargin - 10, kPanelHeight,
                     emin, emax, i_lo, i_hi};
    frame(out, top, "E", "|T22|^2");
    frame(out, bottom, "E", "interference");
    polyline(out, top, e, t22, "stroke='black' stroke-width='1.2'");
    if (i_lo < 0.0 && i_hi > 0.0)
        polyline(out, bottom, {emin, emax}, {0.0, 0.0}, "stroke='gray' stroke-dasharray='3,3'");
    polyline(out, bottom, e, inter, "stroke='black' stroke-width='1.2'");
    out += "</svg>\n";
    return out;
}

std::string trajectory_svg(const Trajectory& full, const Trajectory& reduced, const std::string& title)
{
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
    for (const Trajectory* t : {&full, &reduced})
        for (const auto* br : {&t->branch_a, &t->branch_b})
            for (const cplx z : *br) {
                xlo = std::min(xlo, z.real());
                xhi = std::max(xhi, z.real());
                ylo = std::min(ylo, z.imag());
                yhi = std::max(yhi, z.imag());
            }
    pad_range(xlo, xhi);
    pad_range(ylo, yhi);

    const double height = 2 * kPanelHeight + 2 * kMargin;
    std::string out = header(height, title);
    const Box b{kMargin + 20, kMargin - 20, kWidth - 2 * kMargin - 10, 2 * kPanelHeight, xlo, xhi, ylo, yhi};
    frame(out, b, "Re E", "Im E");

    auto draw = [&](const std::vector<cplx>& z, const std::string& colour, const std::string& dash) {
        std::vector<double> x, y;
        for (const cplx w : z) {
            x.push_back(w.real());
            y.push_back(w.imag());
        }
        polyline(out, b, x, y, "stroke='" + colour + "' stroke-width='1.4'" + dash);
        if (!z.empty())
            out += "<circle cx='" + num(b.px(z.front().real())) + "' cy='" + num(b.py(z.front().imag())) +
                   "' r='4' fill='" + colour + "'/>\n";
    };
    draw(full.branch_a, "red", "");
    draw(full.branch_b, "green", "");
    draw(reduced.branch_a, "red", " stroke-dasharray='5,4' opacity='0.7'");
    draw(reduced.branch_b, "green", " stroke-dasharray='5,4' opacity='0.7'");
    out += "</svg>\n";
    return out;
}

}  // namespace epfano
