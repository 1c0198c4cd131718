#include "svg_writer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace freelevy_cli {
namespace {

constexpr double W = 800, H = 500, L = 70, R = 20, T = 40, B = 50;

const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_svg(const std::vector<SvgSeries>& series, const std::vector<SvgAtom>& atoms,
                       const std::string& title) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y1 = 0.0;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y1 = std::max(y1, s.y[i]);
        }
    for (const auto& a : atoms) {
        x0 = std::min(x0, a.location);
        x1 = std::max(x1, a.location);
    }
    if (!std::isfinite(x0)) x0 = -1.0, x1 = 1.0;
    if (x1 <= x0) x0 -= 1.0, x1 += 1.0;
    if (!(y1 > 0.0)) y1 = 1.0;
    y1 *= 1.05;

    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - y / y1 * (H - T - B); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
       << W << ' ' << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
       << escape(title) << "</text>\n";
    os << "<g stroke=\"black\" stroke-width=\"1\">\n";
    os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\"/>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\"/>\n";
    os << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int k = 0; k <= 5; ++k) {
        const double x = x0 + (x1 - x0) * k / 5, y = y1 * k / 5;
        os << "<text x=\"" << num(px(x)) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << num(x)
           << "</text>\n";
        os << "<text x=\"" << L - 6 << "\" y=\"" << num(py(y) + 4) << "\" text-anchor=\"end\">" << num(y)
           << "</text>\n";
    }
    os << "</g>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = palette[k % (sizeof palette / sizeof *palette)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) os << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
        os << "\"/>\n";
        os << "<text x=\"" << W - R - 4 << "\" y=\"" << T + 14 * (k + 1) << "\" text-anchor=\"end\" fill=\"" << color
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(s.label) << "</text>\n";
    }
    for (const auto& a : atoms) {
        const double top = H - B - std::clamp(a.mass, 0.0, 1.0) * (H - T - B);
        os << "<line x1=\"" << num(px(a.location)) << "\" y1=\"" << H - B << "\" x2=\"" << num(px(a.location))
           << "\" y2=\"" << num(top) << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
        os << "<circle cx=\"" << num(px(a.location)) << "\" cy=\"" << num(top) << "\" r=\"4\" fill=\"black\"><title>"
           << escape(a.label) << " mass " << num(a.mass) << "</title></circle>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace freelevy_cli
