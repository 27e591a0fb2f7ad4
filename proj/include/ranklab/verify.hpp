#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ranklab {

enum class Suite { Thm1, Thm3, Lti, Selective, Lemmas, Oracles, All };

const char* to_string(Suite s);
Suite suite_from_string(const std::string& name);

// One named property: how many configurations ran, how many violated the
// assertion, how many were skipped because their preconditions did not
// hold, and the worst observed margin/deviation for reporting.
struct CheckResult {
    std::string name;
    int trials = 0;
    int failures = 0;
    int skipped = 0;
    double worst = 0.0;
    std::string detail;

    bool passed() const { return failures == 0; }
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckResult> checks;

    bool passed() const;
};

// Runs one suite with `trials` random configurations per property (fixed
// worked cases always run). `inject_failure` adds a deliberately failing
// negative-control check so the failure path stays exercised.
SuiteResult run_suite(Suite suite, std::uint64_t seed, int trials,
                      bool inject_failure = false);

std::vector<SuiteResult> run_suites(Suite suite, std::uint64_t seed, int trials,
                                    bool inject_failure = false);

std::string summarize(const std::vector<SuiteResult>& results);

}  // namespace ranklab
