#include "blochlat/precision.hpp"

#include <algorithm>
#include <cctype>

namespace blochlat {

PrecisionContext PrecisionContext::standard(unsigned digits) {
    if (digits < 20)
        throw DomainError("PrecisionContext: standard contexts need >= 20 digits, got " +
                          std::to_string(digits));
    return PrecisionContext{digits};
}

PrecisionContext PrecisionContext::low_precision(unsigned digits) {
    if (digits < 6)
        throw DomainError("PrecisionContext: low-precision contexts need >= 6 digits, got " +
                          std::to_string(digits));
    return PrecisionContext{digits};
}

Real PrecisionContext::tolerance(int offset) const {
    ScopedPrecision guard(*this);
    return pow10(offset - static_cast<long>(digits));
}

ScopedPrecision::ScopedPrecision(const PrecisionContext& ctx)
    : ScopedPrecision(ctx.working_digits()) {}

ScopedPrecision::ScopedPrecision(unsigned decimal_digits) {
    saved_ = Real::default_precision();
    Real::default_precision(decimal_digits);
}

ScopedPrecision::~ScopedPrecision() {
    Real::default_precision(saved_);
}

Real const_pi() {
    Real r;
    mpfr_const_pi(r.backend().data(), MPFR_RNDN);
    return r;
}

Real rebase(const Real& x) {
    Real r;
    mpfr_set(r.backend().data(), x.backend().data(), MPFR_RNDN);
    return r;
}

Real pow10(long e) {
    Real r;
    mpfr_ui_pow_ui(r.backend().data(), 10, static_cast<unsigned long>(e < 0 ? -e : e), MPFR_RNDN);
    if (e < 0)
        r = 1 / r;
    return r;
}

Real parse_real(const std::string& text, const PrecisionContext& ctx) {
    ScopedPrecision guard(ctx);
    std::string t = text;
    t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c); }),
            t.end());
    if (t.empty())
        throw FormatError("empty real literal");
    std::string lower = t;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (lower == "inf" || lower == "+inf")
        return std::numeric_limits<Real>::infinity();
    if (lower == "-inf")
        return -std::numeric_limits<Real>::infinity();
    try {
        return Real(t);
    } catch (const std::exception&) {
        throw FormatError("bad real literal: '" + text + "'");
    }
}

std::string format_real(const Real& value, unsigned digits) {
    if (mpfr_inf_p(value.backend().data()))
        return mpfr_sgn(value.backend().data()) < 0 ? "-inf" : "inf";
    std::string s = value.str(digits);
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return c == 'E' ? 'e' : c; });
    return s;
}

std::string format_real(const Real& value, const PrecisionContext& ctx) {
    return format_real(value, ctx.digits);
}

} // namespace blochlat
