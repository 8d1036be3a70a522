#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <vector>

#include "blochlat/complex.hpp"
#include "blochlat/precision.hpp"

namespace blochlat {

using Integer = mp::number<mp::gmp_int, mp::et_off>;

/// Integer polynomial, coefficients ascending by degree. Degree >= 1 and a
/// nonzero leading coefficient are enforced; irreducibility is not checked
/// (census polynomials are ingested as-is).
struct IntPolynomial {
    std::vector<Integer> coefficients;

    explicit IntPolynomial(std::vector<Integer> coeffs);
    IntPolynomial(std::initializer_list<long> coeffs);

    int degree() const { return static_cast<int>(coefficients.size()) - 1; }
    Integer max_abs_coefficient() const;

    /// Canonical form: divided by content, leading coefficient positive.
    IntPolynomial canonical() const;

    BigComplex evaluate(const BigComplex& z) const;

    bool operator==(const IntPolynomial& o) const { return coefficients == o.coefficients; }

    /// Ordering by (degree, coefficient list); used for deterministic keys.
    bool operator<(const IntPolynomial& o) const;

    std::string to_string() const; // e.g. "x^3 - x^2 + 1"
};

/// All complex roots with the residual bound they were certified against.
struct RootSet {
    std::vector<BigComplex> roots;   // sorted by (Re, Im)
    Real residual_bound;             // every root r has |p(r)| <= residual_bound
    int real_count = 0;              // roots classified real (|Im| <= 10^(10-digits))
};

/// Simultaneous Aberth-Ehrlich iteration from deterministically placed
/// starting points (scaled, phase-offset roots of unity), polished until
/// every residual clears 10^(10-digits) * (1 + max |coefficient|). Non-real
/// roots are paired into conjugates within the same tolerance and the output
/// is sorted by (Re, Im). Throws RootFindingFailureError on stagnation.
RootSet roots(const IntPolynomial& p, const PrecisionContext& ctx);

/// r2: number of conjugate pairs of non-real roots.
int count_complex_places(const IntPolynomial& p, const PrecisionContext& ctx);

} // namespace blochlat
