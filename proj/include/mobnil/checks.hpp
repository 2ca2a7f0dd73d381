#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mobnil::checks {

struct CheckResult {
    std::string suite;
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SuiteSummary {
    std::vector<CheckResult> results;
    bool all_passed() const;
    std::string to_json() const;
};

// sieve, circle, nilflow, phases, vaughan, correlate, or all.
const std::vector<std::string>& suite_names();
// Throws ValidationError for an unknown suite name.
SuiteSummary run_suite(const std::string& name, std::uint64_t seed);

}  // namespace mobnil::checks
