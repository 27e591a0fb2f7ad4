#pragma once

#include <optional>
#include <vector>

#include "ranklab/error.hpp"

namespace ranklab {

// The constants entering the skip-strength lower bound: extreme singular
// values of the value transform across layers (c = inf sigma_min,
// s = sup sigma_max), the mixing-norm supremum c_m, the sequence length,
// and the per-layer collapse rate a in (0, 1].
struct BoundConstants {
    double c = 1.0;
    double s = 1.0;
    double c_m = 0.0;
    int n = 1;
    double a = 1.0;

    void validate() const;
};

// lambda^2 c^2 - a s^2 (c_m + |lambda|)^2. The guarantee requires this to
// be strictly positive.
double thm1_margin(double lambda, const BoundConstants& k);

// Smallest |lambda| making the margin positive, or nullopt when
// c^2 - a s^2 <= 0 (no skip strength works).
std::optional<double> lambda_threshold(const BoundConstants& k);

// Input floor b: the minimum mu(Y0)^2 for a K-step guarantee,
// (1/a^K) * 2 lambda N s^2 c_m / margin. Keeps lambda's sign in the
// numerator, so a negative skip strength yields a negative (vacuous)
// floor. Throws MarginNotPositive when the margin is not positive.
double input_floor_b(double lambda, const BoundConstants& k, int big_k);

// One-step lower bound on mu^2 after a normalised layer:
// (lambda^2 c^2 mu_prev^2 - 2 lambda N s^2 c_m) / (s^2 (c_m + |lambda|)^2).
// May be negative, in which case the floor is vacuous.
double recursion_floor(double mu_sq_prev, double lambda, const BoundConstants& k);

// Selective-with-LayerNorm decay envelope sqrt(N) (1 - c^2 lmin^2
// alpha^(2N))^K. Requires the base term c^2 lmin^2 alpha^(2N) in (0, 1).
double thm3_upper(int n, double c, double lambda_min, double alpha, int big_k);

// Structured-LTI stack envelope: product of per-layer spectral norms times
// ||Y0||_F. The constant-weight case is norms = {w, w, ..., w}.
double lti_upper(const std::vector<double>& layer_norms, double y0_frob);

// Doubly-exponential selective-stack envelopes with s = sqrt(N)*wbc_frob:
//   norm_bound = s^((3^k - 1)/2) * y0^(3^k)      (k >= 0)
//   mu_bound   = s^((3^(k-1) + 1)/2) * y0^(3^k)  (k >= 1)
// Values may overflow to +inf; that is reported, not masked.
struct SelectiveUpper {
    double norm_bound = 0.0;
    double mu_bound = 0.0;
};

SelectiveUpper selective_upper(int n, double wbc_frob, double y0_frob, int k);

}  // namespace ranklab
