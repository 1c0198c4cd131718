#include "freelevy/spec_loader.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "freelevy/catalog.hpp"
#include "freelevy/errors.hpp"

namespace freelevy {
namespace {

using json = nlohmann::json;

double number(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw SpecError("spec: " + where + " is missing \"" + key + "\"");
    if (!j.at(key).is_number()) throw SpecError("spec: " + where + "." + key + " must be a number");
    return j.at(key).get<double>();
}

Params params_of(const json& j, const std::string& where) {
    Params p;
    if (!j.contains("params")) return p;
    const json& o = j.at("params");
    if (!o.is_object()) throw SpecError("spec: " + where + ".params must be an object");
    for (const auto& [k, v] : o.items()) {
        if (!v.is_number()) throw SpecError("spec: " + where + ".params." + k + " must be a number");
        p[k] = v.get<double>();
    }
    return p;
}

std::string name_of(const json& j, const std::string& where) {
    if (!j.contains("name") || !j.at("name").is_string()) throw SpecError("spec: " + where + " needs a string \"name\"");
    return j.at("name").get<std::string>();
}

}  // namespace

MeasureModel load_spec(const std::string& text, const std::string& name) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SpecError(std::string("spec: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw SpecError("spec: top level must be an object");
    for (const auto& [k, v] : doc.items())
        if (k != "eta" && k != "a" && k != "levy" && k != "closed_form") throw SpecError("spec: unknown key \"" + k + "\"");

    FreeTriplet t;
    t.eta = doc.contains("eta") ? number(doc, "eta", "spec") : 0.0;
    t.a = doc.contains("a") ? number(doc, "a", "spec") : 0.0;
    if (t.a < 0.0) throw SpecError("spec: a must be nonnegative");

    if (doc.contains("levy")) {
        const json& levy = doc.at("levy");
        if (!levy.is_array()) throw SpecError("spec: levy must be an array");
        for (std::size_t i = 0; i < levy.size(); ++i) {
            const json& c = levy[i];
            const std::string where = "levy[" + std::to_string(i) + "]";
            if (!c.is_object() || !c.contains("type") || !c.at("type").is_string())
                throw SpecError("spec: " + where + " needs a string \"type\"");
            const std::string type = c.at("type").get<std::string>();
            LevyMeasure part;
            if (type == "atom") {
                const double loc = number(c, "t", where), w = number(c, "w", where);
                if (loc == 0.0) throw SpecError("spec: " + where + " has location 0; nu({0}) = 0 is required");
                if (!(w > 0.0)) throw SpecError("spec: " + where + " needs a positive weight");
                part.atoms.push_back({loc, w});
            } else if (type == "power") {
                const double cc = number(c, "c", where), alpha = number(c, "alpha", where);
                if (!(cc > 0.0)) throw SpecError("spec: " + where + ".c must be positive");
                if (!(alpha > 0.0 && alpha < 2.0)) throw SpecError("spec: " + where + ".alpha must lie in (0, 2)");
                const std::string side = c.value("side", "");
                if (side != "pos" && side != "neg") throw SpecError("spec: " + where + ".side must be \"pos\" or \"neg\"");
                DensityPiece pc;
                const double sg = side == "pos" ? 1.0 : -1.0;
                pc.density = [cc, alpha, sg](double x) { return x * sg > 0.0 ? cc / std::pow(std::abs(x), 1.0 + alpha) : 0.0; };
                pc.left = side == "pos" ? 0.0 : -std::numeric_limits<double>::infinity();
                pc.right = side == "pos" ? std::numeric_limits<double>::infinity() : 0.0;
                pc.zero_exponent = 1.0 + alpha;
                pc.tail_exponent = alpha;
                part.pieces.push_back(pc);
            } else if (type == "family") {
                const MeasureModel fam = make(name_of(c, where), params_of(c, where));
                if (!fam.triplet) throw SpecError("spec: family " + fam.name + " has no Levy measure");
                part = fam.triplet->levy;
            } else {
                throw SpecError("spec: " + where + " has unknown type \"" + type + "\"");
            }
            t.levy = merge(t.levy, part);
        }
    }
    t.levy.symmetric = !t.levy.empty() && check_symmetry(t.levy);
    if (t.levy.empty()) t.levy.symmetric = true;

    MeasureModel m;
    m.name = name;
    // A spec with nothing but closed_form describes the law by its transform alone.
    const bool transform_only = doc.contains("closed_form") && !doc.contains("eta") && !doc.contains("a") &&
                                !doc.contains("levy");
    if (!transform_only) m.triplet = t;
    if (doc.contains("closed_form")) {
        const json& cf = doc.at("closed_form");
        if (!cf.is_object()) throw SpecError("spec: closed_form must be an object");
        const MeasureModel ref = make(name_of(cf, "closed_form"), params_of(cf, "closed_form"));
        if (!ref.closed_phi) throw SpecError("spec: family " + ref.name + " has no closed-form transform");
        m.closed_phi = ref.closed_phi;
        m.reference_density = ref.reference_density;
        m.reference_cauchy = ref.reference_cauchy;
    }
    return m;
}

MeasureModel load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("spec: cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return load_spec(os.str(), path);
}

}  // namespace freelevy
