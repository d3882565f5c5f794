#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fdsic {

struct CheckResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    /// How `value` is compared with `threshold`, for the report.
    std::string comparison;
    bool pass = false;
};

/// Quick self-check of the build: closed-form reductions, quantizer and
/// amplifier moment oracles, theory against Monte Carlo, and the digital
/// canceller. `trials` scales the Monte Carlo checks.
std::vector<CheckResult> run_validation_suite(std::uint64_t seed, std::int64_t trials);

}  // namespace fdsic
