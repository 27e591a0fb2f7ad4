#pragma once

#include "ranklab/matrix.hpp"

namespace ranklab {

// y minus the matrix whose every row is the column-mean row of y. The
// result has zero column means; its Frobenius norm is the token-similarity
// measure mu.
Matrix residual(const Matrix& y);

// Token-similarity measure: ||y - 1*colmean(y)||_F. Zero iff all rows are
// identical. Implemented as frobenius_norm(residual(y)) so the two agree
// exactly.
double mu(const Matrix& y);

// mu normalised by ||y||_F; scale-invariant. Throws ZeroMatrix when
// ||y||_F == 0.
double normalized_mu(const Matrix& y);

// Minimum row inner product over all ordered pairs, i=j included. For
// unit-row input the diagonal contributes 1 and never decides the minimum.
double phi(const Matrix& y);

}  // namespace ranklab
