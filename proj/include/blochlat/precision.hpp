#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <string>

#include "blochlat/errors.hpp"

namespace blochlat {

namespace mp = boost::multiprecision;

/// Arbitrary-precision real number. Precision is carried per value; arithmetic
/// results inherit the precision of their operands, so values created at a
/// context's working precision stay there.
using Real = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;

/// Decimal working precision for a whole computation. Every operation in the
/// library takes a context explicitly; nothing reads ambient global state
/// except through ScopedPrecision, which the entry points install themselves.
struct PrecisionContext {
    unsigned digits = 64;

    /// Standard contexts require at least 20 digits.
    static PrecisionContext standard(unsigned digits = 64);

    /// Low-precision contexts (>= 6 digits) exist to reproduce printed tables
    /// whose values carry only a handful of digits.
    static PrecisionContext low_precision(unsigned digits);

    bool is_low_precision() const { return digits < 20; }

    /// Internal precision: the requested digits plus guard digits.
    unsigned working_digits() const { return digits + 20; }

    /// 10^(offset - digits), the library-wide tolerance family.
    Real tolerance(int offset) const;

    /// Default integer-relation coefficient bound: 2^12, shrunk to 64 below
    /// 20 digits where printed-table inputs cannot support large coefficients.
    long default_coeff_bound() const { return digits < 20 ? 64 : 4096; }
};

/// RAII guard setting the thread's default mpfr precision to the context's
/// working precision. Entry points construct one before touching Reals.
class ScopedPrecision {
public:
    explicit ScopedPrecision(const PrecisionContext& ctx);
    explicit ScopedPrecision(unsigned decimal_digits);
    ~ScopedPrecision();
    ScopedPrecision(const ScopedPrecision&) = delete;
    ScopedPrecision& operator=(const ScopedPrecision&) = delete;

private:
    unsigned saved_;
};

/// pi at the current default precision.
Real const_pi();

/// Copy of x rounded to the current default precision. Inputs entering an
/// operation go through this so results carry the context's precision rather
/// than whatever the caller happened to pass in.
Real rebase(const Real& x);


/// 10^e at the current default precision.
Real pow10(long e);

/// Parse a decimal real; accepts "inf"/"-inf". Throws FormatError.
Real parse_real(const std::string& text, const PrecisionContext& ctx);

/// Format with `digits` significant digits, lowercase exponent, "inf" for
/// infinities. Round-trips through parse_real at the same context.
std::string format_real(const Real& value, const PrecisionContext& ctx);
std::string format_real(const Real& value, unsigned digits);

} // namespace blochlat
