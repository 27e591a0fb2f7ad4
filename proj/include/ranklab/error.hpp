#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace ranklab {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShapeMismatch : Error { using Error::Error; };

// row_normalize met a row with Euclidean norm <= kRowNormEps.
struct ZeroRow : Error { using Error::Error; };

// normalized token-similarity asked for on an all-zero matrix.
struct ZeroMatrix : Error { using Error::Error; };

struct NotSymmetric : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };

// skip strength -1 makes the two-token LTI closed form singular.
struct LambdaSingular : Error { using Error::Error; };

struct DegenerateNorm : Error { using Error::Error; };
struct MarginNotPositive : Error { using Error::Error; };
struct BaseOutOfRange : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

// An entry overflowed the representable range. Expected (and reported, not
// masked) in the doubly-exponential blow-up regimes; carries the failing
// layer index when the overflow happened inside a stacked forward pass.
struct NonFinite : Error {
    explicit NonFinite(const std::string& what,
                       std::optional<int> at_layer = std::nullopt)
        : Error(what), layer(at_layer) {}
    std::optional<int> layer;
};

}  // namespace ranklab
