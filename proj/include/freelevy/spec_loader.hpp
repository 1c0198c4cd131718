#pragma once

#include <string>

#include "freelevy/measure_model.hpp"

namespace freelevy {

// Measure spec:
// {"eta": number, "a": number,
//  "levy": [{"type": "atom", "t": number, "w": number}
//         | {"type": "power", "c": number, "alpha": number, "side": "pos" | "neg"}
//         | {"type": "family", "name": string, "params": object}],
//  "closed_form": {"name": string, "params": object}}
// A spec holding only closed_form yields a model without a triplet.
// Throws SpecError on malformed input and UnknownFamily on an unknown family name.
MeasureModel load_spec(const std::string& text, const std::string& name = "spec");
MeasureModel load_spec_file(const std::string& path);

}  // namespace freelevy
