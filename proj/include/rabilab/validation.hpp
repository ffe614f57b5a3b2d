#pragma once

// Acceptance criteria as a registry shared by the `validate` subcommand and
// the acceptance test binary.

#include "json.hpp"

#include <functional>
#include <string>
#include <vector>

namespace rabilab::validation {

struct CriterionResult {
    std::string id;
    std::string title;
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    std::string comparison;  // how measured relates to expected, e.g. "|m - e| <= tol"
    std::string detail;
    double runtime_s = 0.0;
    double runtime_limit_s = 0.0;  // 0 = no limit
    bool pass = false;
};

struct Criterion {
    std::string id;
    std::string title;
    double runtime_limit_s = 0.0;
    std::function<CriterionResult()> run;
};

const std::vector<Criterion>& registry();

// Runs the named criteria (all when `only` is empty) in registry order.
// Unknown ids are ConfigErrors. An exception inside a criterion is a failure
// with the message as detail.
std::vector<CriterionResult> run_criteria(const std::vector<std::string>& only = {});

std::string format_line(const CriterionResult& r);
nlohmann::ordered_json to_json(const std::vector<CriterionResult>& results);

}  // namespace rabilab::validation
