#pragma once

#include <string>
#include <vector>

#include "freelevy/transforms.hpp"

namespace freelevy {

struct CaseRow {
    std::string label;
    std::string expected;
    std::string computed;
    std::string tolerance;
    bool pass = false;
};

struct CaseResult {
    std::string id;
    std::string title;
    std::vector<CaseRow> rows;
    bool pass() const;
};

// Case ids in run order. Each id may also be requested through its alias.
std::vector<std::string> case_ids();

// Runs one case, or every case for "all". Throws UnknownCase for an unknown id.
std::vector<CaseResult> reproduce(const std::string& id, const EvalContext& ctx = {});

std::string format_table(const std::vector<CaseResult>& results);

}  // namespace freelevy
