#include <cmath>

#include "doctest.h"
#include "ranklab/metrics.hpp"
#include "ranklab/modelgen.hpp"
#include "ranklab/rng.hpp"

using namespace ranklab;

TEST_CASE("residual subtracts the column-mean row") {
    CHECK(max_abs_diff(residual(Matrix(2, 2, {1, 0, 1, 0})), Matrix(2, 2)) == 0.0);
    CHECK(max_abs_diff(residual(Matrix::identity(2)),
                       Matrix(2, 2, {0.5, -0.5, -0.5, 0.5})) < 1e-15);
    CHECK(frobenius_norm(residual(Matrix(1, 3, {4, -1, 2}))) == 0.0);

    SplitMix64 rng(3);
    for (int t = 0; t < 25; ++t) {
        const Matrix y = random_gaussian(rng.uniform_int(1, 6), rng.uniform_int(1, 6), 2.0, rng);
        const Matrix r = residual(y);
        for (int j = 0; j < r.cols; ++j) {
            double mean = 0.0;
            for (int i = 0; i < r.rows; ++i) mean += r(i, j);
            CHECK(std::abs(mean / r.rows) < 1e-12);
        }
    }
}

TEST_CASE("mu on worked matrices") {
    CHECK(mu(Matrix(2, 2, {1, 0, 1, 0})) == 0.0);
    CHECK(mu(Matrix::identity(2)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mu(Matrix(3, 2, {1, 0, 0, 1, 1, 1})) ==
          doctest::Approx(1.15470054).epsilon(1e-8));
}

TEST_CASE("mu equals the residual norm and is shift invariant") {
    SplitMix64 rng(9);
    for (int t = 0; t < 25; ++t) {
        const int n = rng.uniform_int(1, 6);
        const int d = rng.uniform_int(1, 6);
        const Matrix y = random_gaussian(n, d, 1.5, rng);
        CHECK(mu(y) == frobenius_norm(residual(y)));

        Matrix shifted = y;
        for (int j = 0; j < d; ++j) {
            const double c = rng.uniform(-10.0, 10.0);
            for (int i = 0; i < n; ++i) shifted(i, j) += c;
        }
        CHECK(mu(shifted) == doctest::Approx(mu(y)).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("normalized mu") {
    CHECK(normalized_mu(Matrix(2, 2, {1, 0, 1, 0})) == 0.0);
    CHECK(normalized_mu(Matrix::identity(2)) ==
          doctest::Approx(0.70710678).epsilon(1e-8));
    CHECK_THROWS_AS(normalized_mu(Matrix(2, 2)), ZeroMatrix);

    SplitMix64 rng(13);
    for (int t = 0; t < 25; ++t) {
        const Matrix y = random_gaussian(rng.uniform_int(1, 5), rng.uniform_int(1, 5), 1.0, rng);
        if (frobenius_norm(y) == 0.0) continue;
        const double s = rng.uniform(0.1, 100.0);
        CHECK(normalized_mu(s * y) ==
              doctest::Approx(normalized_mu(y)).epsilon(1e-12));
    }
}

TEST_CASE("phi on worked matrices") {
    CHECK(phi(Matrix::identity(2)) == 0.0);
    CHECK(phi(Matrix(2, 2, {1, 0, 1, 0})) == 1.0);
    const double theta = 3.14159265358979323846 / 3.0;
    CHECK(phi(Matrix(2, 2, {1, 0, std::cos(theta), std::sin(theta)})) ==
          doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("unit-row identities for mu and phi") {
    SplitMix64 rng(21);
    for (int t = 0; t < 25; ++t) {
        const int n = rng.uniform_int(2, 6);
        const int d = rng.uniform_int(2, 6);
        const Matrix y = row_normalize(random_gaussian(n, d, 1.0, rng));

        // mu^2 = (1/2N) sum_ij ||y_i - y_j||^2
        double acc = 0.0;
        double max_pair = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                double dist = 0.0;
                for (int k = 0; k < d; ++k) dist += (y(i, k) - y(j, k)) * (y(i, k) - y(j, k));
                acc += dist;
                max_pair = std::max(max_pair, dist);
            }
        }
        CHECK(mu(y) * mu(y) == doctest::Approx(acc / (2 * n)).epsilon(1e-9));
        CHECK(1.0 - phi(y) >= max_pair / 2.0 - 1e-12);
    }
}
