#include "ranklab/bounds.hpp"

#include <cmath>

namespace ranklab {

void BoundConstants::validate() const {
    // c > s cannot arise from real value transforms, but the threshold
    // formula is well defined for it and hypothetical constants are allowed.
    if (!(c >= 0.0) || !(s >= 0.0)) {
        throw DomainError("bound constants need c >= 0 and s >= 0");
    }
    if (!(c_m >= 0.0)) throw DomainError("c_m must be nonnegative");
    if (n < 1) throw DomainError("sequence length must be >= 1");
    if (!(a > 0.0) || a > 1.0) throw DomainError("collapse rate must be in (0, 1]");
}

double thm1_margin(double lambda, const BoundConstants& k) {
    k.validate();
    const double reach = k.c_m + std::abs(lambda);
    return lambda * lambda * k.c * k.c - k.a * k.s * k.s * reach * reach;
}

std::optional<double> lambda_threshold(const BoundConstants& k) {
    k.validate();
    const double gap = k.c * k.c - k.a * k.s * k.s;
    if (gap <= 0.0) return std::nullopt;
    const double num =
        k.a * k.c_m * k.s * k.s + std::sqrt(k.a * k.c * k.c * k.c_m * k.c_m * k.s * k.s);
    return num / gap;
}

double input_floor_b(double lambda, const BoundConstants& k, int big_k) {
    if (big_k < 0) throw DomainError("layer count must be >= 0");
    const double margin = thm1_margin(lambda, k);
    if (!(margin > 0.0)) {
        throw MarginNotPositive("input floor requires a positive margin");
    }
    const double numer = 2.0 * lambda * k.n * k.s * k.s * k.c_m;
    return numer / margin / std::pow(k.a, big_k);
}

double recursion_floor(double mu_sq_prev, double lambda, const BoundConstants& k) {
    k.validate();
    const double reach = k.c_m + std::abs(lambda);
    const double numer = lambda * lambda * k.c * k.c * mu_sq_prev -
                         2.0 * lambda * k.n * k.s * k.s * k.c_m;
    return numer / (k.s * k.s * reach * reach);
}

double thm3_upper(int n, double c, double lambda_min, double alpha, int big_k) {
    if (n < 1 || big_k < 0) throw DomainError("thm3_upper: bad dimensions");
    const double base_term =
        c * c * lambda_min * lambda_min * std::pow(alpha, 2.0 * n);
    if (!(base_term > 0.0) || !(base_term < 1.0)) {
        throw BaseOutOfRange("decay base term must lie in (0, 1)");
    }
    return std::sqrt(static_cast<double>(n)) * std::pow(1.0 - base_term, big_k);
}

double lti_upper(const std::vector<double>& layer_norms, double y0_frob) {
    double prod = y0_frob;
    for (double w : layer_norms) prod *= w;
    return prod;
}

SelectiveUpper selective_upper(int n, double wbc_frob, double y0_frob, int k) {
    if (n < 1 || k < 0) throw DomainError("selective_upper: bad dimensions");
    const double s = std::sqrt(static_cast<double>(n)) * wbc_frob;
    const double three_k = std::pow(3.0, k);
    SelectiveUpper out;
    out.norm_bound = std::pow(s, (three_k - 1.0) / 2.0) * std::pow(y0_frob, three_k);
    if (k >= 1) {
        const double three_km1 = std::pow(3.0, k - 1);
        out.mu_bound = std::pow(s, (three_km1 + 1.0) / 2.0) * std::pow(y0_frob, three_k);
    } else {
        out.mu_bound = out.norm_bound;
    }
    return out;
}

}  // namespace ranklab
