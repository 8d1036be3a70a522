#pragma once

#include <vector>

#include "blochlat/rational.hpp"

namespace blochlat {

/// Outcome of integer-relation detection.
struct RelationResult {
    enum class Status { RELATION, INDEPENDENT };

    Status status = Status::INDEPENDENT;
    /// Present iff RELATION: content-free (gcd 1), first nonzero entry
    /// positive, every |coefficient| within the bound used for the search.
    std::vector<Integer> coefficients;
    /// |sum c_i x_i| / max|x_i|; meaningful iff RELATION.
    Real residual;

    bool is_relation() const { return status == Status::RELATION; }
};

/// Integer-relation detection via LLL reduction of the standard embedding
/// [I | N*x], run at a ladder of scales N derived from the context digits.
/// A candidate is accepted when every |coefficient| <= coeff_bound and the
/// true residual (relative to max|x|) is at most 10^(-digits/4); among
/// accepted candidates the one with the smallest maximum coefficient wins.
/// Returns INDEPENDENT when no candidate survives, which is exactly the
/// paper-style 2^12 cutoff statement when coeff_bound is left at its default
/// (4096, or 64 below 20 digits).
///
/// Preconditions: values non-empty; each value is exactly zero or has
/// magnitude above 10^(-digits/2). An exact zero short-circuits to the
/// trivial unit relation. Fewer than two nonzero values cannot be related:
/// INDEPENDENT. Contexts below 8 digits throw InsufficientPrecisionError.
RelationResult lindep(const std::vector<Real>& values, const PrecisionContext& ctx,
                      long coeff_bound = 0);

/// Coordinates of the target over the basis, for a relation found on the
/// concatenation [v, b_1..b_d]: c_j = -dep_{j+1}/dep_1. dep_1 = 0 throws
/// TargetNotInvolvedError.
std::vector<Rational> rational_coordinates(const RelationResult& dep);

} // namespace blochlat
