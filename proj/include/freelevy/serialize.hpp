#pragma once

#include <string>

#include <json.hpp>

#include "freelevy/analysis.hpp"
#include "freelevy/inversion.hpp"
#include "freelevy/measure_model.hpp"

namespace freelevy {

using json = nlohmann::json;

json to_json(const ExtendedReal& v);  // number, or the string "inf"
json to_json(const AtomRecord& a);
json to_json(const Classification& c);
json to_json(const Interval& i);
json to_json(const ModeReport& r);
json to_json(const ThetaScan& t);
json to_json(const ValidationReport& r);
json to_json(const SupportReport& r);

// "x,v,psi,f" with 17 significant digits; undefined samples are omitted.
std::string curve_csv(const DensityCurve& c);
std::string theta_csv(const ThetaScan& t);

std::string format_double(double v);

}  // namespace freelevy
