#include "blochlat/complex.hpp"

#include <algorithm>
#include <cctype>

namespace blochlat {

BigComplex BigComplex::conj() const {
    if (inf_)
        return infinity();
    return BigComplex(re_, -im_);
}

BigComplex operator+(const BigComplex& a, const BigComplex& b) {
    if (a.inf_ && b.inf_)
        throw DomainError("inf + inf is indeterminate");
    if (a.inf_ || b.inf_)
        return BigComplex::infinity();
    return BigComplex(a.re_ + b.re_, a.im_ + b.im_);
}

BigComplex operator-(const BigComplex& a, const BigComplex& b) {
    if (a.inf_ && b.inf_)
        throw DomainError("inf - inf is indeterminate");
    if (a.inf_ || b.inf_)
        return BigComplex::infinity();
    return BigComplex(a.re_ - b.re_, a.im_ - b.im_);
}

BigComplex operator-(const BigComplex& a) {
    if (a.inf_)
        return BigComplex::infinity();
    return BigComplex(-a.re_, -a.im_);
}

BigComplex operator*(const BigComplex& a, const BigComplex& b) {
    if (a.inf_ || b.inf_) {
        if ((a.inf_ && b.is_zero()) || (b.inf_ && a.is_zero()))
            throw DomainError("0 * inf is indeterminate");
        return BigComplex::infinity();
    }
    return BigComplex(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
}

BigComplex operator/(const BigComplex& a, const BigComplex& b) {
    if (a.inf_ && b.inf_)
        throw DomainError("inf / inf is indeterminate");
    if (a.inf_)
        return BigComplex::infinity();
    if (b.inf_)
        return BigComplex(Real(0), Real(0));
    if (b.is_zero()) {
        if (a.is_zero())
            throw DomainError("0 / 0 is indeterminate");
        return BigComplex::infinity();
    }
    Real d = b.re_ * b.re_ + b.im_ * b.im_;
    return BigComplex((a.re_ * b.re_ + a.im_ * b.im_) / d,
                      (a.im_ * b.re_ - a.re_ * b.im_) / d);
}

Real abs_value(const BigComplex& z) {
    Real r;
    mpfr_hypot(r.backend().data(), z.re().backend().data(), z.im().backend().data(), MPFR_RNDN);
    return r;
}

Real norm_sq(const BigComplex& z) {
    return z.re() * z.re() + z.im() * z.im();
}

Real arg(const BigComplex& z) {
    Real r;
    mpfr_atan2(r.backend().data(), z.im().backend().data(), z.re().backend().data(), MPFR_RNDN);
    return r;
}

BigComplex clog(const BigComplex& z) {
    if (z.is_zero())
        throw DomainError("log of zero");
    return BigComplex(log(abs_value(z)), arg(z));
}

BigComplex clog1p(const BigComplex& z) {
    Real az = abs_value(z);
    if (az >= Real(0.25))
        return clog(BigComplex(Real(1), Real(0)) + z);
    // |z| < 1/4: alternating power series log(1+z) = z - z^2/2 + z^3/3 - ...
    long bits = static_cast<long>(mpfr_get_prec(z.re().backend().data()));
    BigComplex term = z;
    BigComplex sum = z;
    long k = 1;
    Real cutoff = ldexp(Real(1), -static_cast<int>(bits + 8));
    while (abs_value(term) > cutoff * (k + 1)) {
        ++k;
        term = term * z;
        BigComplex contrib(term.re() / k, term.im() / k);
        if (k % 2 == 0)
            sum = sum - contrib;
        else
            sum = sum + contrib;
        if (k > bits * 4)
            throw DomainError("clog1p series failed to converge");
    }
    return sum;
}

Real distance(const BigComplex& a, const BigComplex& b) {
    return abs_value(a - b);
}

BigComplex parse_complex(const std::string& text, const PrecisionContext& ctx) {
    ScopedPrecision guard(ctx);
    std::string t = text;
    t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c); }),
            t.end());
    if (t.empty())
        throw FormatError("empty complex literal");
    std::string lower = t;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (lower == "inf" || lower == "+inf" || lower == "-inf")
        return BigComplex::infinity();

    if (t.back() != 'i' && t.back() != 'I')
        return BigComplex(parse_real(t, ctx), Real(0));

    // Trailing 'i': split off the imaginary term at the last +/- that is not
    // part of an exponent.
    std::string body = t.substr(0, t.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
        char c = body[i];
        if ((c == '+' || c == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    auto parse_coeff = [&](std::string s) {
        if (s.empty() || s == "+")
            return Real(1);
        if (s == "-")
            return Real(-1);
        return parse_real(s, ctx);
    };
    if (split == std::string::npos)
        return BigComplex(Real(0), parse_coeff(body));
    return BigComplex(parse_real(body.substr(0, split), ctx),
                      parse_coeff(body.substr(split)));
}

std::string format_complex(const BigComplex& z, const PrecisionContext& ctx) {
    if (z.is_infinity())
        return "inf";
    std::string re = format_real(z.re(), ctx);
    std::string im = format_real(z.im(), ctx);
    if (!im.empty() && im[0] == '-')
        return re + im + "i";
    return re + "+" + im + "i";
}

} // namespace blochlat
