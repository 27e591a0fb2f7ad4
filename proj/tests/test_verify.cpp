#include "doctest.h"
#include "ranklab/error.hpp"
#include "ranklab/verify.hpp"

using namespace ranklab;

TEST_CASE("suite name mapping") {
    CHECK(suite_from_string("thm1") == Suite::Thm1);
    CHECK(suite_from_string("oracles") == Suite::Oracles);
    CHECK(suite_from_string("all") == Suite::All);
    CHECK_THROWS_AS(suite_from_string("nope"), ConfigError);
}

TEST_CASE("property suites pass on random configurations") {
    for (Suite s : {Suite::Thm1, Suite::Thm3, Suite::Lti, Suite::Selective,
                    Suite::Lemmas}) {
        const SuiteResult r = run_suite(s, 2024, 12);
        INFO(summarize({r}));
        CHECK(r.passed());
    }
}

TEST_CASE("oracles suite isolates the sign-flip regime") {
    // The fixed grid includes the lambda = -3 structured-pair leg, whose
    // all-nonnegative closed form cannot follow the sign-correct
    // simulation; everything else in the suite must hold.
    const SuiteResult r = run_suite(Suite::Oracles, 7, 10);
    REQUIRE(r.checks.size() >= 6);
    CHECK_FALSE(r.checks[0].passed());
    CHECK(r.checks[0].failures == 1);
    for (std::size_t i = 1; i < r.checks.size(); ++i) {
        INFO(r.checks[i].name);
        CHECK(r.checks[i].passed());
    }
}

TEST_CASE("negative control fails with a replayable trial") {
    const SuiteResult r = run_suite(Suite::Thm1, 99, 4, /*inject_failure=*/true);
    CHECK_FALSE(r.passed());
    bool saw_control = false;
    for (const CheckResult& c : r.checks) {
        if (c.name.find("negative control") != std::string::npos) {
            saw_control = true;
            CHECK(c.failures == 1);
            CHECK(c.detail.find("trial") != std::string::npos);
        }
    }
    CHECK(saw_control);
}

TEST_CASE("suite runs are deterministic") {
    const std::string a = summarize(run_suites(Suite::Lemmas, 3, 8));
    const std::string b = summarize(run_suites(Suite::Lemmas, 3, 8));
    CHECK(a == b);
    const std::string c = summarize(run_suites(Suite::Lemmas, 4, 8));
    CHECK(a != c);
}
