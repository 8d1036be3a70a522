#include "blochlat/dilog.hpp"

#include <boost/multiprecision/gmp.hpp>
#include <mutex>
#include <vector>

namespace blochlat {

namespace {

using Rational = mp::number<mp::gmp_rational, mp::et_off>;
using Integer = mp::number<mp::gmp_int, mp::et_off>;

/// Bernoulli numbers B_0, B_1, ... as exact rationals (B_1 = -1/2), grown on
/// demand and shared process-wide. Exact values are precision-independent,
/// so one cache serves every context.
const Rational& bernoulli(std::size_t n) {
    static std::vector<Rational> cache{Rational(1), Rational(-1, 2)};
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    while (cache.size() <= n) {
        std::size_t m = cache.size();
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        Rational sum(0);
        Integer binom(1); // C(m+1, 0)
        for (std::size_t j = 0; j < m; ++j) {
            sum += Rational(binom) * cache[j];
            binom = binom * Integer(m + 1 - j) / Integer(j + 1);
        }
        cache.push_back(-sum / Rational(binom));
    }
    return cache[n];
}

void check_not_degenerate(const BigComplex& z) {
    if (z.is_infinity() || z.is_zero() || (z.im() == 0 && z.re() == 1))
        throw DegenerateSimplexError("dilog argument must avoid 0, 1, inf");
}

/// Li2 by its defining power series; requires |z| <= 1/2 for fast decay.
BigComplex li2_series(const BigComplex& z, long bits) {
    BigComplex zk = z;
    BigComplex sum = z;
    Real cutoff = ldexp(Real(1), -static_cast<int>(bits + 8));
    for (long k = 2;; ++k) {
        zk = zk * z;
        Real kk = Real(k) * Real(k);
        sum = sum + BigComplex(zk.re() / kk, zk.im() / kk);
        if (abs_value(zk) < cutoff)
            break;
        if (k > bits * 4)
            throw DomainError("li2 series failed to converge");
    }
    return sum;
}

/// Li2 via the expansion in w = -log(1-z):
///   Li2(z) = sum_{n>=0} B_n w^{n+1} / (n! (n+1)),
/// which converges for |w| < 2*pi and is used on the annulus where neither z
/// nor 1-z is small.
BigComplex li2_log_series(const BigComplex& w, long bits) {
    BigComplex wpow = w;           // w^{n+1}
    Rational fact(1);              // n!
    BigComplex sum(Real(0), Real(0));
    Real cutoff = ldexp(Real(1), -static_cast<int>(bits + 8));
    for (long n = 0;; ++n) {
        if (n > 0)
            fact *= n;
        const Rational& bn = bernoulli(static_cast<std::size_t>(n));
        if (bn != 0) {
            Rational coeff = bn / (fact * (n + 1));
            Real c(coeff);
            BigComplex term(wpow.re() * c, wpow.im() * c);
            sum = sum + term;
            if (n > 2 && abs_value(term) < cutoff)
                break;
        }
        wpow = wpow * w;
        if (n > bits * 4)
            throw DomainError("li2 log-series failed to converge");
    }
    return sum;
}

/// Li2 on the closed unit disk, z not in {0, 1}.
BigComplex li2_disk(const BigComplex& z, long bits) {
    Real az = abs_value(z);
    BigComplex one(Real(1), Real(0));
    BigComplex one_minus = one - z;
    if (az <= Real(1) / 2)
        return li2_series(z, bits);
    if (abs_value(one_minus) <= Real(1) / 2) {
        // Reflection: Li2(z) = pi^2/6 - log(z) log(1-z) - Li2(1-z).
        Real pi = const_pi();
        BigComplex head(pi * pi / 6, Real(0));
        return head - clog(z) * clog(one_minus) - li2_series(one_minus, bits);
    }
    // |w| stays below ~1.8 < 2*pi on this region.
    return li2_log_series(-clog(one_minus), bits);
}

} // namespace

BigComplex dilog_li2(const BigComplex& z, const PrecisionContext& ctx) {
    ScopedPrecision guard(ctx);
    check_not_degenerate(z);
    BigComplex zz(rebase(z.re()), rebase(z.im()));
    long bits = static_cast<long>(mpfr_get_prec(zz.re().backend().data()));
    if (abs_value(zz) <= Real(1))
        return li2_disk(zz, bits);
    // Inversion: Li2(z) = -pi^2/6 - log(-z)^2 / 2 - Li2(1/z).
    Real pi = const_pi();
    BigComplex lm = clog(-zz);
    BigComplex head(-pi * pi / 6, Real(0));
    return head - lm * lm / BigComplex(Real(2), Real(0)) -
           li2_disk(BigComplex(Real(1), Real(0)) / zz, bits);
}

Real dilog_D(const BigComplex& z, const PrecisionContext& ctx) {
    ScopedPrecision guard(ctx);
    check_not_degenerate(z);
    BigComplex zz(rebase(z.re()), rebase(z.im()));
    BigComplex li2 = dilog_li2(zz, ctx);
    BigComplex one_minus = BigComplex(Real(1), Real(0)) - zz;
    return li2.im() + arg(one_minus) * log(abs_value(zz));
}

Real dilog_D_quadrature(const BigComplex& z, const PrecisionContext& ctx) {
    ScopedPrecision guard(ctx);
    check_not_degenerate(z);
    if (z.im() == 0 && z.re() > 1)
        throw QuadratureFailureError("integration path hits the branch point for real z > 1");
    BigComplex zz(rebase(z.re()), rebase(z.im()));

    // Integrand of Li2: f(t) = -log(1 - t z) / t, extended by f(0) = z.
    auto integrand = [&](const Real& t) -> BigComplex {
        BigComplex tz(t * zz.re(), t * zz.im());
        BigComplex l = clog1p(-tz);
        return BigComplex(-l.re() / t, -l.im() / t);
    };

    // tanh-sinh quadrature on (0,1): t = (1 + tanh((pi/2) sinh(u))) / 2.
    Real pi = const_pi();
    Real half_pi = pi / 2;
    Real target = ctx.tolerance(5) / 16;
    long wbits = static_cast<long>(mpfr_get_prec(zz.re().backend().data()));

    auto node = [&](const Real& u, Real& t, Real& weight) {
        Real su = sinh(u);
        Real cu = cosh(u);
        Real e = exp(half_pi * su);
        Real sech = 2 / (e + 1 / e);            // sech(pi/2 sinh u)
        t = 1 / (1 + exp(-pi * su));            // (1 + tanh)/2 without cancellation
        weight = half_pi * cu * sech * sech / 2;
    };

    Real umax = log(Real(wbits)); // tanh-sinh clip; generous for the bit budget
    BigComplex total(Real(0), Real(0));
    Real h = 1;
    {
        Real t, w;
        node(Real(0), t, w);
        total = integrand(t) * BigComplex(w, Real(0));
        for (Real u = h; u <= umax; u += h) {
            node(u, t, w);
            if (w != 0 && t > 0 && t < 1)
                total = total + integrand(t) * BigComplex(w, Real(0));
            node(-u, t, w);
            if (w != 0 && t > 0 && t < 1)
                total = total + integrand(t) * BigComplex(w, Real(0));
        }
    }
    BigComplex previous = total * BigComplex(h, Real(0));
    const int max_level = 16;
    bool converged = false;
    BigComplex integral = previous;
    for (int level = 1; level <= max_level; ++level) {
        h = h / 2;
        // Only odd multiples of the new h are new nodes.
        for (Real u = h; u <= umax; u += 2 * h) {
            Real t, w;
            node(u, t, w);
            if (w != 0 && t > 0 && t < 1)
                total = total + integrand(t) * BigComplex(w, Real(0));
            node(-u, t, w);
            if (w != 0 && t > 0 && t < 1)
                total = total + integrand(t) * BigComplex(w, Real(0));
        }
        integral = total * BigComplex(h, Real(0));
        Real diff = abs_value(integral - previous);
        if (level >= 3 && diff < target) {
            converged = true;
            break;
        }
        previous = integral;
    }
    if (!converged)
        throw QuadratureFailureError("tanh-sinh refinement did not reach the target accuracy");

    BigComplex one_minus = BigComplex(Real(1), Real(0)) - zz;
    return integral.im() + arg(one_minus) * log(abs_value(zz));
}

} // namespace blochlat
