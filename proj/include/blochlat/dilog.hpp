#pragma once

#include "blochlat/complex.hpp"
#include "blochlat/precision.hpp"

namespace blochlat {

/// Volume of the ideal tetrahedron with cross-ratio z: the Bloch-Wigner
/// function D(z) = Im(Li2(z)) + arg(1-z) * log|z|, accurate to within
/// 10^(5-digits). Evaluated by power series and functional equations, never
/// by quadrature. z in {0, 1, inf} throws DegenerateSimplexError.
Real dilog_D(const BigComplex& z, const PrecisionContext& ctx);

/// Independent test oracle: evaluates the same function by direct adaptive
/// tanh-sinh integration of the dilogarithm integral over t in [0,1].
/// Requires 1/z off the open interval (0,1), i.e. z not real > 1; the
/// integrand's endpoint singularity at t=0 is removable. Non-convergence
/// throws QuadratureFailureError.
Real dilog_D_quadrature(const BigComplex& z, const PrecisionContext& ctx);

/// Principal-branch complex dilogarithm Li2(z), z not in {0, 1}. Exposed for
/// tests; dilog_D is the volume-facing entry point.
BigComplex dilog_li2(const BigComplex& z, const PrecisionContext& ctx);

} // namespace blochlat
