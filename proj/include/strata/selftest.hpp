#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace strata {

struct SelfTestOptions {
    bool quick = false;
    std::uint64_t seed = 1;
};

struct CheckResult {
    std::string anchor;
    bool pass = false;
    std::string detail;
};

struct SelfTestReport {
    bool quick = false;
    std::uint64_t seed = 1;
    std::vector<CheckResult> checks;

    bool all_pass() const;
    std::string to_json() const;   // byte-stable for identical options
    std::string to_table() const;  // one "anchor: PASS/FAIL" line per check
};

// Runs the whole property suite at desk scale.
SelfTestReport run_selftest(const SelfTestOptions& opt);

}  // namespace strata
