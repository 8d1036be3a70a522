#include "blochlat/polyroots.hpp"

#include <algorithm>
#include <sstream>

namespace blochlat {

IntPolynomial::IntPolynomial(std::vector<Integer> coeffs) : coefficients(std::move(coeffs)) {
    while (coefficients.size() > 1 && coefficients.back() == 0)
        coefficients.pop_back();
    if (coefficients.size() < 2)
        throw DomainError("IntPolynomial: degree must be at least 1");
    if (coefficients.back() == 0)
        throw DomainError("IntPolynomial: leading coefficient must be nonzero");
}

IntPolynomial::IntPolynomial(std::initializer_list<long> coeffs)
    : IntPolynomial(std::vector<Integer>(coeffs.begin(), coeffs.end())) {}

Integer IntPolynomial::max_abs_coefficient() const {
    Integer m = 0;
    for (const auto& c : coefficients)
        m = std::max(m, abs(c));
    return m;
}

IntPolynomial IntPolynomial::canonical() const {
    Integer content = 0;
    for (const auto& c : coefficients)
        content = gcd(content, c);
    if (content == 0)
        content = 1;
    if (coefficients.back() < 0)
        content = -content;
    std::vector<Integer> out;
    out.reserve(coefficients.size());
    for (const auto& c : coefficients)
        out.push_back(c / content);
    return IntPolynomial(std::move(out));
}

BigComplex IntPolynomial::evaluate(const BigComplex& z) const {
    BigComplex acc(Real(coefficients.back()), Real(0));
    for (std::size_t i = coefficients.size() - 1; i-- > 0;)
        acc = acc * z + BigComplex(Real(coefficients[i]), Real(0));
    return acc;
}

bool IntPolynomial::operator<(const IntPolynomial& o) const {
    if (degree() != o.degree())
        return degree() < o.degree();
    // Compare descending-degree first, matching how polynomials are read.
    for (std::size_t i = coefficients.size(); i-- > 0;) {
        if (coefficients[i] != o.coefficients[i])
            return coefficients[i] < o.coefficients[i];
    }
    return false;
}

std::string IntPolynomial::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = coefficients.size(); i-- > 0;) {
        const Integer& c = coefficients[i];
        if (c == 0)
            continue;
        Integer a = abs(c);
        if (first) {
            if (c < 0)
                os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        if (a != 1 || i == 0)
            os << a.str();
        if (i >= 1) {
            os << "x";
            if (i >= 2)
                os << "^" << i;
        }
    }
    if (first)
        os << "0";
    return os.str();
}

namespace {

struct Workspace {
    std::vector<BigComplex> coeffs;  // ascending, at working precision
    std::vector<BigComplex> dcoeffs; // derivative

    BigComplex eval(const BigComplex& z) const { return horner(coeffs, z); }
    BigComplex deval(const BigComplex& z) const { return horner(dcoeffs, z); }

    static BigComplex horner(const std::vector<BigComplex>& c, const BigComplex& z) {
        BigComplex acc = c.back();
        for (std::size_t i = c.size() - 1; i-- > 0;)
            acc = acc * z + c[i];
        return acc;
    }
};

} // namespace

RootSet roots(const IntPolynomial& p, const PrecisionContext& ctx) {
    // Clusters converge slowly; run the iteration well above the context.
    ScopedPrecision guard(2 * ctx.digits + 30);

    int deg = p.degree();
    std::vector<BigComplex> found;
    found.reserve(static_cast<std::size_t>(deg));

    // Exact zero roots come off first.
    std::size_t zero_roots = 0;
    while (zero_roots < p.coefficients.size() - 1 && p.coefficients[zero_roots] == 0)
        ++zero_roots;
    for (std::size_t i = 0; i < zero_roots; ++i)
        found.emplace_back(Real(0), Real(0));

    int n = deg - static_cast<int>(zero_roots);
    if (n > 0) {
        Workspace ws;
        ws.coeffs.reserve(static_cast<std::size_t>(n) + 1);
        for (std::size_t i = zero_roots; i < p.coefficients.size(); ++i)
            ws.coeffs.emplace_back(Real(p.coefficients[i]), Real(0));
        for (int i = 1; i <= n; ++i)
            ws.dcoeffs.push_back(BigComplex(Real(i), Real(0)) * ws.coeffs[static_cast<std::size_t>(i)]);

        // Cauchy bound radius, deterministic phase-offset ring of start points.
        Real lead = abs_value(ws.coeffs.back());
        Real radius = 0;
        for (int i = 0; i < n; ++i)
            radius = std::max(radius, abs_value(ws.coeffs[static_cast<std::size_t>(i)]) / lead);
        radius += 1;
        Real pi = const_pi();
        std::vector<BigComplex> z;
        z.reserve(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            Real theta = 2 * pi * (Real(k) + Real(1) / 4 + Real(1) / (2 * n)) / n;
            z.emplace_back(radius * cos(theta), radius * sin(theta));
        }

        long wbits = static_cast<long>(mpfr_get_prec(z[0].re().backend().data()));
        Real step_tol = ldexp(Real(1), -static_cast<int>(wbits - 8));
        const int max_sweeps = 200;
        bool converged = false;
        for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
            Real worst(0);
            for (int i = 0; i < n; ++i) {
                BigComplex pv = ws.eval(z[static_cast<std::size_t>(i)]);
                BigComplex dv = ws.deval(z[static_cast<std::size_t>(i)]);
                if (pv.is_zero())
                    continue;
                BigComplex newton = dv.is_zero() ? BigComplex(Real(0), Real(0)) : pv / dv;
                if (newton.is_zero()) {
                    // p'(z)=0 away from a root: nudge deterministically.
                    z[static_cast<std::size_t>(i)] =
                        z[static_cast<std::size_t>(i)] + BigComplex(Real(1) / 1000, Real(1) / 1000);
                    worst = std::max(worst, Real(1));
                    continue;
                }
                BigComplex repel(Real(0), Real(0));
                for (int j = 0; j < n; ++j) {
                    if (j == i)
                        continue;
                    BigComplex d = z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)];
                    if (d.is_zero())
                        d = BigComplex(ldexp(Real(1), -static_cast<int>(wbits / 2)), Real(0));
                    repel = repel + BigComplex(Real(1), Real(0)) / d;
                }
                BigComplex denom = BigComplex(Real(1), Real(0)) - newton * repel;
                BigComplex step = denom.is_zero() ? newton : newton / denom;
                z[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)] - step;
                Real rel = abs_value(step) / (1 + abs_value(z[static_cast<std::size_t>(i)]));
                worst = std::max(worst, rel);
            }
            if (worst < step_tol)
                converged = true;
        }

        // Newton polish.
        for (auto& r : z) {
            for (int it = 0; it < 4; ++it) {
                BigComplex pv = ws.eval(r);
                BigComplex dv = ws.deval(r);
                if (pv.is_zero() || dv.is_zero())
                    break;
                r = r - pv / dv;
            }
        }
        for (auto& r : z)
            found.push_back(r);

        if (!converged) {
            Real best(0);
            for (const auto& r : found)
                best = std::max(best, abs_value(p.evaluate(r)));
            // Accept anyway if the residual check below passes; flagged there.
            (void)best;
        }
    }

    // Classification and conjugate pairing at the context's tolerance.
    Real tol = ctx.tolerance(10);
    RootSet out;
    out.residual_bound = rebase(tol * (1 + Real(p.max_abs_coefficient())));

    std::vector<BigComplex> reals, complexes;
    for (const auto& r : found) {
        if (abs(r.im()) <= tol)
            reals.emplace_back(r.re(), Real(0));
        else
            complexes.push_back(r);
    }
    // Greedy conjugate pairing: each positive-imaginary root picks its nearest
    // unclaimed mirror and both are symmetrized.
    std::vector<BigComplex> paired;
    std::vector<bool> used(complexes.size(), false);
    for (std::size_t i = 0; i < complexes.size(); ++i) {
        if (used[i] || complexes[i].im() < 0)
            continue;
        BigComplex mirror = complexes[i].conj();
        std::size_t best = complexes.size();
        Real best_d(0);
        for (std::size_t j = 0; j < complexes.size(); ++j) {
            if (j == i || used[j] || complexes[j].im() > 0)
                continue;
            Real d = distance(complexes[j], mirror);
            if (best == complexes.size() || d < best_d) {
                best = j;
                best_d = d;
            }
        }
        if (best == complexes.size() || best_d > tol * 2)
            throw RootFindingFailureError("conjugate pairing failed for " + p.to_string());
        used[i] = used[best] = true;
        Real re = (complexes[i].re() + complexes[best].re()) / 2;
        Real im = (complexes[i].im() - complexes[best].im()) / 2;
        paired.emplace_back(re, im);
        paired.emplace_back(re, -im);
    }
    for (std::size_t i = 0; i < complexes.size(); ++i)
        if (!used[i])
            throw RootFindingFailureError("unpaired non-real root for " + p.to_string());

    out.real_count = static_cast<int>(reals.size());
    for (auto& r : reals)
        out.roots.push_back(std::move(r));
    for (auto& r : paired)
        out.roots.push_back(std::move(r));
    std::sort(out.roots.begin(), out.roots.end(), [&](const BigComplex& a, const BigComplex& b) {
        if (a.re() != b.re())
            return a.re() < b.re();
        return a.im() < b.im();
    });

    Real worst_residual(0);
    for (const auto& r : out.roots)
        worst_residual = std::max(worst_residual, abs_value(p.evaluate(r)));
    if (worst_residual > out.residual_bound)
        throw RootFindingFailureError("root refinement stalled for " + p.to_string() +
                                      " (best residual " + format_real(worst_residual, 3) + ")");

    // Round the reported roots to the context's precision.
    {
        ScopedPrecision narrow(ctx);
        for (auto& r : out.roots)
            r = BigComplex(rebase(r.re()), rebase(r.im()));
        out.residual_bound = rebase(out.residual_bound);
    }
    return out;
}

int count_complex_places(const IntPolynomial& p, const PrecisionContext& ctx) {
    RootSet rs = roots(p, ctx);
    return (p.degree() - rs.real_count) / 2;
}

} // namespace blochlat
