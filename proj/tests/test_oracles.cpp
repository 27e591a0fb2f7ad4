#include <cmath>

#include "doctest.h"
#include "ranklab/metrics.hpp"
#include "ranklab/oracles.hpp"
#include "ranklab/rng.hpp"

using namespace ranklab;

TEST_CASE("alpha step") {
    CHECK(lti_pair_alpha_step(1.0, 1.0) == doctest::Approx(2.0));
    CHECK(lti_pair_alpha_step(2.0, 1.0) == doctest::Approx(6.82842712).epsilon(1e-8));
    CHECK(lti_pair_alpha_step(1.0, -3.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(lti_pair_alpha_step(1.0, -1.0), LambdaSingular);
    CHECK_THROWS_AS(lti_pair_alpha_step(0.5, 0.0), DomainError);
}

TEST_CASE("alpha step growth for lambda above -1") {
    SplitMix64 rng(61);
    for (int t = 0; t < 40; ++t) {
        const double lambda = rng.uniform(-0.95, 4.0);
        const double alpha = 1.0 + 9.0 * rng.uniform();
        const double stepped = lti_pair_alpha_step(alpha, lambda);
        CHECK(stepped >= alpha * (1.0 + 4.0 / ((1.0 + lambda) * (1.0 + lambda))));
    }
}

TEST_CASE("structured pair closed form") {
    CHECK(max_abs_diff(lti_pair_state(0, 0.7), Matrix::identity(2)) == 0.0);
    CHECK(max_abs_diff(lti_pair_state(1, 1.0),
                       Matrix(2, 2, {1, 0, 0.70710678, 0.70710678})) < 1e-8);

    const Matrix deep = lti_pair_state(20, 0.0);
    CHECK(std::abs(deep(1, 0) - 1.0) < 1e-8);
    CHECK(std::abs(deep(1, 1)) < 1e-8);
    CHECK(mu(deep) < 1e-8);

    CHECK_THROWS_AS(lti_pair_state(3, -1.0), LambdaSingular);
}

TEST_CASE("selective pair closed form") {
    const Matrix start = selective_pair_state(0, 2.0, 1.0, 1.0);
    CHECK(max_abs_diff(start,
                       Matrix(2, 2, {1, 0, 0.70710678, 0.70710678})) < 1e-8);

    const Matrix k2 = selective_pair_state(2, 0.0, 1.0, 1.0);
    CHECK(k2(1, 0) == doctest::Approx(0.97014250).epsilon(1e-8));
    CHECK(k2(1, 1) == doctest::Approx(0.24253563).epsilon(1e-8));

    // Dominant second component with alternating signs; mu settles at the
    // orthogonal-rows value 1.
    const Matrix k30 = selective_pair_state(30, -3.0, 1.0, 1.0);
    CHECK(std::abs(k30(1, 0)) < 1e-8);
    CHECK(std::abs(std::abs(k30(1, 1)) - 1.0) < 1e-8);
    CHECK(mu(k30) == doctest::Approx(1.0).epsilon(1e-6));

    CHECK_THROWS_AS(selective_pair_state(2, 0.0, -1.0, 1.0), DomainError);
    CHECK_THROWS_AS(selective_pair_state(1, -2.0, 1.0, 0.0), DegenerateNorm);
}

TEST_CASE("collapse and no-collapse branches of the structured pair") {
    for (double lambda : {0.0, 1.0, -1.5}) {
        double alpha = 1.0;
        bool collapsed = false;
        for (int k = 1; k <= 200 && !collapsed; ++k) {
            alpha = lti_pair_alpha_step(alpha, lambda);
            collapsed = mu(Matrix(2, 2,
                                  {1.0, 0.0, std::sqrt((alpha - 1.0) / alpha),
                                   1.0 / std::sqrt(alpha)})) < 1e-8;
        }
        CHECK(collapsed);
    }
    for (double lambda : {-3.0, -5.0}) {
        double alpha = 1.0;
        double min_mu = 1e300;
        double max_alpha = 0.0;
        for (int k = 0; k <= 1000; ++k) {
            max_alpha = std::max(max_alpha, alpha);
            CHECK(alpha >= 1.0);
            min_mu = std::min(min_mu, mu(Matrix(2, 2,
                                               {1.0, 0.0,
                                                std::sqrt((alpha - 1.0) / alpha),
                                                1.0 / std::sqrt(alpha)})));
            if (k < 1000) alpha = lti_pair_alpha_step(alpha, lambda);
        }
        CHECK(min_mu > 0.05);
        CHECK(max_alpha <= 10.0);
    }
}

TEST_CASE("collapse and no-collapse branches of the selective pair") {
    for (double lambda : {0.0, 1.0}) {
        CHECK(mu(selective_pair_state(60, lambda, 1.0, 1.0)) < 1e-8);
        const double rate = std::abs(1.0 + lambda) / std::abs(2.0 + lambda);
        const double r50 = mu(selective_pair_state(51, lambda, 1.0, 1.0)) /
                           mu(selective_pair_state(50, lambda, 1.0, 1.0));
        CHECK(r50 == doctest::Approx(rate).epsilon(1e-6));
    }
    for (double lambda : {-3.0, -4.0}) {
        CHECK(mu(selective_pair_state(60, lambda, 1.0, 1.0)) ==
              doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("oracle against simulator") {
    CHECK(oracle_vs_simulator({CounterexampleSystem::StructuredLtiPair, 1.0, 1.0, 0.0},
                              10) < 1e-10);
    CHECK(oracle_vs_simulator({CounterexampleSystem::SelectivePair, 0.0, 1.0, 1.0},
                              10) < 1e-10);
    CHECK_THROWS_AS(
        oracle_vs_simulator({CounterexampleSystem::StructuredLtiPair, -1.0, 1.0, 0.0}, 5),
        LambdaSingular);
}

TEST_CASE("oracle against simulator across the valid skip range") {
    SplitMix64 rng(67);
    for (int t = 0; t < 30; ++t) {
        CounterexampleSpec spec;
        if (t % 2 == 0) {
            spec.system = CounterexampleSystem::StructuredLtiPair;
            spec.lambda = rng.uniform(-0.9, 3.0);
        } else {
            spec.system = CounterexampleSystem::SelectivePair;
            spec.lambda = rng.uniform(-0.9, 3.0);
            spec.alpha0 = rng.uniform(0.2, 2.0);
            spec.beta0 = rng.uniform(-2.0, 2.0);
        }
        CHECK(oracle_vs_simulator(spec, 25) < 1e-10);
    }
}

TEST_CASE("selective pair matches the simulator even when row signs flip") {
    // Negative 1+lambda alternates the first row's sign; the closed form
    // carries it and still tracks the simulation exactly.
    CHECK(oracle_vs_simulator({CounterexampleSystem::SelectivePair, -3.0, 1.0, 1.0},
                              30) < 1e-10);
    CHECK(selective_pair_state(1, -3.0, 1.0, 1.0)(0, 0) == -1.0);
}
