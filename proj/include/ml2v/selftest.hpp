#pragma once

#include <string>
#include <vector>

namespace ml2v {

struct SuiteResult {
    std::string name;
    bool passed = false;
    int checks = 0;
    std::string detail;  ///< first failure, or a short summary
};

/// Names accepted by run_selftest: gamma, contour, series, expansion,
/// representations, asymptotics.
std::vector<std::string> selftest_suites();

/// Runs every suite whose name equals `filter` (all when empty).
std::vector<SuiteResult> run_selftest(const std::string& filter = "");

}  // namespace ml2v
