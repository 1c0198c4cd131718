#pragma once

#include <string>
#include <vector>

namespace freelevy_cli {

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct SvgAtom {
    std::string label;
    double location = 0.0;
    double mass = 0.0;
};

// Overlay of polylines with axes; atoms are drawn as vertical lollipops with height
// proportional to their mass (mass 1 reaches the top of the plot).
std::string render_svg(const std::vector<SvgSeries>& series, const std::vector<SvgAtom>& atoms,
                       const std::string& title);

}  // namespace freelevy_cli
