#pragma once

// Randomized property suite over every module, driven by one seed. Reports are
// deterministic: same seed and order, same results in the same order.

#include <cstdint>
#include <string>
#include <vector>

namespace bifree {

struct PropertyResult {
    std::string name;
    int cases = 0;
    bool passed = true;
    // first failing case, empty when passed
    std::string detail;
};

struct VerifyOptions {
    int cases = 6;
    bool stop_on_failure = false;
};

struct VerifyReport {
    std::uint64_t seed = 0;
    int order = 0;
    std::vector<PropertyResult> results;

    bool passed() const;
    // nullptr when everything passed
    const PropertyResult* first_failure() const;
};

// Names of all properties in run order.
std::vector<std::string> verify_property_names();

VerifyReport run_verify(std::uint64_t seed, int order, const VerifyOptions& options = {});

} // namespace bifree
