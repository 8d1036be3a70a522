#pragma once

#include <string>

#include "blochlat/precision.hpp"

namespace blochlat {

/// Complex number over Real with an explicit point at infinity, so the
/// boundary point of H^3 can be passed around like any other cross-ratio
/// input. Arithmetic follows the Riemann-sphere limit rules; indeterminate
/// forms (inf - inf, 0 * inf, inf / inf, 0 / 0) throw DomainError.
class BigComplex {
public:
    BigComplex() : re_(0), im_(0), inf_(false) {}
    BigComplex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)), inf_(false) {}
    explicit BigComplex(Real re) : re_(std::move(re)), im_(0), inf_(false) {}
    explicit BigComplex(long v) : re_(v), im_(0), inf_(false) {}

    static BigComplex infinity() {
        BigComplex z;
        z.inf_ = true;
        return z;
    }

    bool is_infinity() const { return inf_; }
    bool is_zero() const { return !inf_ && re_ == 0 && im_ == 0; }

    const Real& re() const { return finite_or_throw().re_; }
    const Real& im() const { return finite_or_throw().im_; }

    BigComplex conj() const;

    friend BigComplex operator+(const BigComplex& a, const BigComplex& b);
    friend BigComplex operator-(const BigComplex& a, const BigComplex& b);
    friend BigComplex operator-(const BigComplex& a);
    friend BigComplex operator*(const BigComplex& a, const BigComplex& b);
    friend BigComplex operator/(const BigComplex& a, const BigComplex& b);

    bool operator==(const BigComplex& o) const {
        if (inf_ || o.inf_)
            return inf_ && o.inf_;
        return re_ == o.re_ && im_ == o.im_;
    }
    bool operator!=(const BigComplex& o) const { return !(*this == o); }

private:
    const BigComplex& finite_or_throw() const {
        if (inf_)
            throw DomainError("component access on the point at infinity");
        return *this;
    }

    Real re_, im_;
    bool inf_;
};

/// |z|; infinite input throws.
Real abs_value(const BigComplex& z);

/// |z|^2.
Real norm_sq(const BigComplex& z);

/// Principal argument in (-pi, pi].
Real arg(const BigComplex& z);

/// Principal complex logarithm. z must be finite and nonzero.
BigComplex clog(const BigComplex& z);

/// log(1 + z) without cancellation for small |z|.
BigComplex clog1p(const BigComplex& z);

/// Distance |a - b| between finite points.
Real distance(const BigComplex& a, const BigComplex& b);

/// Parse "a", "a+bi", "a-bi", "bi", "i", "-i", "inf". Whitespace ignored.
BigComplex parse_complex(const std::string& text, const PrecisionContext& ctx);

/// "a+bi" / "a-bi" / "inf", components at context digits.
std::string format_complex(const BigComplex& z, const PrecisionContext& ctx);

} // namespace blochlat
