#include "freelevy/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace freelevy {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string ExtendedReal::to_string() const { return infinite_ ? "inf" : format_double(value_); }

json to_json(const ExtendedReal& v) {
    if (v.is_infinite()) return "inf";
    return v.value();
}

json to_json(const AtomRecord& a) {
    if (!a.present) return json{{"present", false}};
    return json{{"present", true}, {"location", a.location}, {"mass", a.mass}};
}

json to_json(const Classification& c) {
    return json{{"tag", to_string(c.tag)},
                {"atom", to_json(c.atom)},
                {"s_nu_mass", to_json(c.s_nu_mass)},
                {"s_a", c.s_a}};
}

json to_json(const Interval& i) { return json::array({i.lo, i.hi}); }

json to_json(const ModeReport& r) {
    json modes = json::array();
    for (const auto& m : r.modes) {
        json j{{"psi", m.psi}, {"atom", m.atom}};
        j["height"] = m.atom ? json("inf") : json(m.height);
        modes.push_back(j);
    }
    json comps = json::array();
    for (const auto& c : r.components) comps.push_back(to_json(c));
    return json{{"s", r.s},         {"components", comps}, {"modes", modes},
                {"atom", to_json(r.atom)}, {"unimodal", r.unimodal}, {"reason", r.reason}};
}

json to_json(const ThetaScan& t) { return json{{"R", t.R}, {"thetas", t.thetas}, {"values", t.values}}; }

json to_json(const ValidationReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back(json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return json{{"passed", r.passed()},
                {"integrability", r.integrability},
                {"point_mass", r.point_mass},
                {"checks", checks}};
}

json to_json(const SupportReport& r) {
    json psi = json::array(), x = json::array();
    for (const auto& i : r.psi_intervals) psi.push_back(to_json(i));
    for (const auto& i : r.x_intervals) x.push_back(to_json(i));
    return json{{"psi_intervals", psi}, {"x_intervals", x}, {"atom", to_json(r.atom)}};
}

std::string curve_csv(const DensityCurve& c) {
    std::ostringstream os;
    os << "x,v,psi,f\n";
    for (const auto& s : c.samples())
        os << format_double(s.x) << ',' << format_double(s.v) << ',' << format_double(s.psi) << ','
           << format_double(s.f) << '\n';
    return os.str();
}

std::string theta_csv(const ThetaScan& t) {
    std::ostringstream os;
    os << "theta,value\n";
    for (std::size_t i = 0; i < t.thetas.size(); ++i)
        os << format_double(t.thetas[i]) << ',' << format_double(t.values[i]) << '\n';
    return os.str();
}

}  // namespace freelevy
