#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "freelevy/measure_model.hpp"

namespace freelevy {

using Params = std::map<std::string, double>;

struct CatalogEntry {
    std::string id;
    std::string parameters;  // e.g. "b (default 1)"
    std::string validity;
    std::string provenance;
    std::function<MeasureModel(const Params&)> build;
};

const std::vector<CatalogEntry>& catalog();
std::vector<std::string> catalog_ids();

// Throws UnknownFamily listing the available ids, or InvalidParams on a violated constraint.
MeasureModel make(const std::string& id, const Params& params = {});

// Levy densities of the catalog families.
double cauchy_mixture_levy_density(double p, double x);
double free_meixner_levy_density(double a, double b, double x);
double student3_levy_density(double x);

}  // namespace freelevy
