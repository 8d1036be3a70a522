#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <optional>
#include <string>
#include <vector>

#include "blochlat/errors.hpp"
#include "blochlat/precision.hpp"

namespace blochlat {

using Integer = mp::number<mp::gmp_int, mp::et_off>;

/// Exact rational, always reduced with positive denominator (gmp canonical
/// form). Wrapped rather than aliased so the few domain operations live next
/// to the type.
using Rational = mp::number<mp::gmp_rational, mp::et_off>;

inline Integer numerator_of(const Rational& q) { return numerator(q); }
inline Integer denominator_of(const Rational& q) { return denominator(q); }

Rational parse_rational(const std::string& text); // "p/q" or integer or decimal
std::string format_rational(const Rational& q);   // "p/q" or "p"

Real to_real(const Rational& q, const PrecisionContext& ctx);

/// Largest positive rational g with a/g and b/g integers:
/// gcd(a_num*b_den, b_num*a_den) / (a_den*b_den), reduced. gcd(0, x) = |x|;
/// both zero throws UndefinedGcdError.
Rational fractional_gcd(const Rational& a, const Rational& b);

/// Fold of fractional_gcd with infinity as the identity element
/// (gcd(inf, x) = |x|). empty() until the first nonzero value arrives.
class FractionalGcdFold {
public:
    void accumulate(const Rational& x);
    bool empty() const { return !value_.has_value(); }
    const Rational& value() const;

private:
    std::optional<Rational> value_;
};

/// Exact determinant by fraction-free (Bareiss) elimination on the
/// denominator-cleared integer matrix.
Rational rational_determinant(const std::vector<std::vector<Rational>>& m);

} // namespace blochlat
