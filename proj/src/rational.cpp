#include "blochlat/rational.hpp"

#include <algorithm>

namespace blochlat {

Rational parse_rational(const std::string& text) {
    std::string t = text;
    t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c); }),
            t.end());
    if (t.empty())
        throw FormatError("empty rational literal");
    try {
        auto slash = t.find('/');
        if (slash != std::string::npos)
            return Rational(Integer(t.substr(0, slash)), Integer(t.substr(slash + 1)));
        auto dot = t.find('.');
        if (dot == std::string::npos)
            return Rational(Integer(t));
        // Decimal literal: scale the fractional part exactly.
        std::string digits = t.substr(0, dot) + t.substr(dot + 1);
        std::size_t frac_len = t.size() - dot - 1;
        Integer den = 1;
        for (std::size_t i = 0; i < frac_len; ++i)
            den *= 10;
        return Rational(Integer(digits), den);
    } catch (const std::exception&) {
        throw FormatError("bad rational literal: '" + text + "'");
    }
}

std::string format_rational(const Rational& q) {
    if (denominator_of(q) == 1)
        return numerator_of(q).str();
    return numerator_of(q).str() + "/" + denominator_of(q).str();
}

Real to_real(const Rational& q, const PrecisionContext& ctx) {
    ScopedPrecision guard(ctx);
    Real r;
    mpfr_set_q(r.backend().data(), q.backend().data(), MPFR_RNDN);
    return r;
}

Rational fractional_gcd(const Rational& a, const Rational& b) {
    if (a == 0 && b == 0)
        throw UndefinedGcdError("fractional_gcd(0, 0)");
    if (a == 0)
        return abs(b);
    if (b == 0)
        return abs(a);
    Integer an = numerator_of(a), ad = denominator_of(a);
    Integer bn = numerator_of(b), bd = denominator_of(b);
    return Rational(gcd(abs(an * bd), abs(bn * ad)), ad * bd);
}

void FractionalGcdFold::accumulate(const Rational& x) {
    if (x == 0)
        return;
    if (!value_)
        value_ = abs(x);
    else
        value_ = fractional_gcd(*value_, x);
}

const Rational& FractionalGcdFold::value() const {
    if (!value_)
        throw UndefinedGcdError("fractional gcd fold saw no nonzero values");
    return *value_;
}

Rational rational_determinant(const std::vector<std::vector<Rational>>& m) {
    std::size_t n = m.size();
    if (n == 0)
        throw DomainError("determinant of an empty matrix");
    for (const auto& row : m)
        if (row.size() != n)
            throw DomainError("determinant needs a square matrix");

    // Clear denominators row by row, then run integer Bareiss.
    std::vector<std::vector<Integer>> a(n, std::vector<Integer>(n));
    Integer scale = 1;
    for (std::size_t i = 0; i < n; ++i) {
        Integer l = 1;
        for (std::size_t j = 0; j < n; ++j)
            l = lcm(l, denominator_of(m[i][j]));
        for (std::size_t j = 0; j < n; ++j) {
            Rational v = m[i][j] * l;
            a[i][j] = numerator_of(v);
        }
        scale *= l;
    }

    Integer sign = 1;
    Integer prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t pivot = k + 1;
            while (pivot < n && a[pivot][k] == 0)
                ++pivot;
            if (pivot == n)
                return Rational(0);
            std::swap(a[k], a[pivot]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    return Rational(sign * a[n - 1][n - 1], scale);
}

} // namespace blochlat
